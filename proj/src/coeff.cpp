#include "dk2/coeff.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <sstream>

#include "dk2/mzv.hpp"

namespace dk2 {

void CoeffMonomial::canonicalize() { std::sort(mzv_factors.begin(), mzv_factors.end()); }

Coeff Coeff::rational(const Rational& r) {
    Coeff c;
    if (r != 0) c.terms[CoeffMonomial{}] = r;
    return c;
}

Coeff Coeff::ipi(int pow) {
    Coeff c;
    c.terms[CoeffMonomial{pow, 0, {}}] = 1;
    return c;
}

Coeff Coeff::lneps(int pow) {
    Coeff c;
    c.terms[CoeffMonomial{0, pow, {}}] = 1;
    return c;
}

Coeff Coeff::zeta(const MZVIndex& idx) {
    if (!idx.admissible())
        throw coeff_error("non-admissible MZV index in Coeff::zeta");
    Coeff c;
    c.terms[CoeffMonomial{0, 0, {idx}}] = 1;
    return c;
}

Coeff Coeff::monomial(const CoeffMonomial& m, const Rational& r) {
    Coeff c;
    if (r != 0) {
        CoeffMonomial mm = m;
        mm.canonicalize();
        c.terms[mm] = r;
    }
    return c;
}

bool Coeff::mzv_free() const {
    for (auto& [m, r] : terms)
        if (!m.mzv_factors.empty()) return false;
    return true;
}

bool Coeff::has_lneps() const {
    for (auto& [m, r] : terms)
        if (m.lneps_pow > 0) return true;
    return false;
}

Coeff& Coeff::operator+=(const Coeff& o) {
    for (auto& [m, r] : o.terms) {
        auto it = terms.find(m);
        if (it == terms.end()) {
            terms.emplace(m, r);
        } else {
            it->second += r;
            if (it->second == 0) terms.erase(it);
        }
    }
    return *this;
}

Coeff& Coeff::operator-=(const Coeff& o) {
    for (auto& [m, r] : o.terms) {
        auto it = terms.find(m);
        if (it == terms.end()) {
            terms.emplace(m, -r);
        } else {
            it->second -= r;
            if (it->second == 0) terms.erase(it);
        }
    }
    return *this;
}

Coeff Coeff::operator-() const {
    Coeff c;
    for (auto& [m, r] : terms) c.terms.emplace(m, -r);
    return c;
}

Coeff Coeff::operator*(const Coeff& o) const {
    Coeff c;
    for (auto& [m1, r1] : terms) {
        for (auto& [m2, r2] : o.terms) {
            CoeffMonomial m;
            m.ipi_pow = m1.ipi_pow + m2.ipi_pow;
            m.lneps_pow = m1.lneps_pow + m2.lneps_pow;
            m.mzv_factors = m1.mzv_factors;
            m.mzv_factors.insert(m.mzv_factors.end(), m2.mzv_factors.begin(),
                                 m2.mzv_factors.end());
            m.canonicalize();
            auto it = c.terms.find(m);
            if (it == c.terms.end()) {
                c.terms.emplace(std::move(m), r1 * r2);
            } else {
                it->second += r1 * r2;
                if (it->second == 0) c.terms.erase(it);
            }
        }
    }
    return c;
}

Coeff Coeff::pow(int k) const {
    Coeff r = Coeff::one();
    for (int i = 0; i < k; ++i) r = r * *this;
    return r;
}

std::map<int, Coeff> Coeff::split_lneps() const {
    std::map<int, Coeff> out;
    for (auto& [m, r] : terms) {
        CoeffMonomial mm = m;
        int p = mm.lneps_pow;
        mm.lneps_pow = 0;
        out[p].terms[mm] = r;
    }
    return out;
}

static void print_rational(std::ostream& os, const Rational& r) {
    os << numerator(r);
    if (denominator(r) != 1) os << "/" << denominator(r);
}

std::string Coeff::str() const {
    if (terms.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto& [m, r] : terms) {
        if (!first) os << (r < 0 ? " - " : " + ");
        Rational rr = (!first && r < 0) ? Rational(-r) : r;
        first = false;
        print_rational(os, rr);
        if (m.ipi_pow > 0) {
            os << "*(ipi)";
            if (m.ipi_pow > 1) os << "^" << m.ipi_pow;
        }
        if (m.lneps_pow > 0) {
            os << "*leps";
            if (m.lneps_pow > 1) os << "^" << m.lneps_pow;
        }
        // equal MZV factors are grouped into powers
        for (size_t i = 0; i < m.mzv_factors.size();) {
            size_t j = i;
            while (j < m.mzv_factors.size() && m.mzv_factors[j] == m.mzv_factors[i]) ++j;
            os << "*z(";
            for (size_t e = 0; e < m.mzv_factors[i].entries.size(); ++e) {
                if (e) os << ",";
                os << m.mzv_factors[i].entries[e];
            }
            os << ")";
            if (j - i > 1) os << "^" << (j - i);
            i = j;
        }
    }
    return os.str();
}

namespace {

struct Parser {
    const std::string& s;
    size_t pos = 0;

    explicit Parser(const std::string& str) : s(str) {}

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool eat(char c) {
        skip_ws();
        if (pos < s.size() && s[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    bool eat_str(const std::string& w) {
        skip_ws();
        if (s.compare(pos, w.size(), w) == 0) {
            pos += w.size();
            return true;
        }
        return false;
    }
    [[noreturn]] void fail(const std::string& what) {
        throw coeff_error("coeff parse error at position " + std::to_string(pos) + ": " + what);
    }

    Int parse_int() {
        skip_ws();
        size_t start = pos;
        if (pos < s.size() && (s[pos] == '-' || s[pos] == '+')) ++pos;
        size_t digits = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos == digits) fail("expected integer");
        return Int(s.substr(start, pos - start));
    }

    int parse_exponent() {
        if (eat('^')) return static_cast<int>(parse_int().convert_to<long>());
        return 1;
    }

    // rational ['*' factor]* ; the leading rational is optional before a factor
    Coeff parse_term() {
        skip_ws();
        Rational r = 1;
        bool have_rat = false;
        size_t save = pos;
        if (pos < s.size() &&
            (std::isdigit(static_cast<unsigned char>(s[pos])) || s[pos] == '-' || s[pos] == '+')) {
            Int num = parse_int();
            Int den = 1;
            if (eat('/')) den = parse_int();
            r = Rational(num, den);
            have_rat = true;
        } else {
            pos = save;
        }
        CoeffMonomial m;
        bool expect_factor = !have_rat;
        while (true) {
            if (have_rat || !expect_factor) {
                if (!eat('*')) break;
            }
            skip_ws();
            if (eat_str("(ipi)")) {
                m.ipi_pow += parse_exponent();
            } else if (eat_str("leps")) {
                m.lneps_pow += parse_exponent();
            } else if (eat_str("z(")) {
                MZVIndex idx;
                idx.entries.push_back(static_cast<int>(parse_int().convert_to<long>()));
                while (eat(',')) idx.entries.push_back(static_cast<int>(parse_int().convert_to<long>()));
                if (!eat(')')) fail("expected ')' in z(...)");
                int e = parse_exponent();
                for (int i = 0; i < e; ++i) m.mzv_factors.push_back(idx);
            } else {
                fail("expected factor");
            }
            have_rat = true; // subsequent factors need '*'
            expect_factor = false;
        }
        m.canonicalize();
        return Coeff::monomial(m, r);
    }

    Coeff parse() {
        skip_ws();
        if (eat('0')) {
            skip_ws();
            if (pos == s.size()) return Coeff::zero();
            pos -= 1; // a term starting with 0 digits; back off
        }
        Coeff c = parse_term();
        while (true) {
            skip_ws();
            if (pos >= s.size()) break;
            if (eat('+')) {
                c += parse_term();
            } else if (eat('-')) {
                c -= parse_term();
            } else {
                fail("expected '+' or '-'");
            }
        }
        return c;
    }
};

} // namespace

Coeff coeff_parse(const std::string& s) {
    Parser p(s);
    return p.parse();
}

std::complex<double> coeff_eval(const Coeff& c, std::optional<double> eps, double mzv_tol) {
    std::complex<double> total = 0.0;
    for (auto& [m, r] : c.terms) {
        if (m.lneps_pow > 0 && !eps)
            throw coeff_error("coeff_eval: leps present but no eps supplied");
        std::complex<double> v = to_double(r);
        if (m.ipi_pow > 0)
            v *= std::pow(std::complex<double>(0.0, std::numbers::pi), m.ipi_pow);
        if (m.lneps_pow > 0) v *= std::pow(std::log(*eps), m.lneps_pow);
        for (auto& idx : m.mzv_factors) v *= mzv_eval(idx, mzv_tol);
        total += v;
    }
    return total;
}

static void check_pq(const std::vector<int>& p, const std::vector<int>& q) {
    if (p.empty() || p.size() != q.size())
        throw coeff_error("zeta_coeff: p and q must be nonempty with equal lengths");
    for (size_t l = 0; l < p.size(); ++l)
        if (p[l] < 1 || q[l] < 1) throw coeff_error("zeta_coeff: p,q must be positive");
}

Coeff zeta_coeff(const std::vector<int>& p, const std::vector<int>& q,
                 const std::vector<int>& j) {
    check_pq(p, q);
    if (j.size() != p.size()) throw coeff_error("zeta_coeff: j has wrong length");
    long abs_j = 0, abs_p = 0;
    Rational binoms = 1;
    for (size_t l = 0; l < p.size(); ++l) {
        if (j[l] < 0 || j[l] > p[l]) throw coeff_error("zeta_coeff: j out of range");
        abs_j += j[l];
        abs_p += p[l];
        binoms *= Rational(binomial(p[l], j[l]));
    }
    MZVIndex idx;
    for (size_t l = 0; l < p.size(); ++l) {
        idx.entries.push_back(p[l] + 1);
        for (int i = 0; i < q[l] - 1; ++i) idx.entries.push_back(1);
    }
    Rational sign = ((abs_j + abs_p) % 2 == 0) ? 1 : -1;
    return Coeff::monomial(CoeffMonomial{0, 0, {idx}}, sign * binoms);
}

Coeff zeta_coeff_full(const std::vector<int>& p, const std::vector<int>& q,
                      const std::vector<int>& j, const std::vector<int>& k) {
    Coeff base = zeta_coeff(p, q, j);
    if (k.size() != q.size()) throw coeff_error("zeta_coeff_full: k has wrong length");
    Rational extra = 1;
    for (size_t l = 0; l < q.size(); ++l) {
        if (k[l] < 0 || k[l] > q[l]) throw coeff_error("zeta_coeff_full: k out of range");
        extra *= Rational(binomial(q[l], k[l]));
        if (k[l] % 2 == 1) extra = -extra;
    }
    return base * Coeff::rational(extra);
}

} // namespace dk2
