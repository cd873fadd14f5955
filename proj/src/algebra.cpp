#include "dk2/algebra.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

namespace dk2 {

std::vector<AWord> graded_awords(int n, int d, size_t cap) {
    if (d < 0) throw dkalg_error("graded_awords: d >= 0 required");
    std::vector<AGen> letters = all_agens(n);
    double est = std::pow(static_cast<double>(letters.size()), d);
    if (est > static_cast<double>(cap))
        throw overflow_error("graded_awords: basis enumeration exceeds cap");
    std::vector<AWord> out;
    std::vector<AGen> cur;
    // prefixes of lex-normal trace words are lex-normal, so prune early
    auto is_normal = [&](const std::vector<AGen>& w) {
        return aword_normalize(w, n).letters == w;
    };
    auto rec = [&](auto&& self, int depth) -> void {
        if (depth == d) {
            out.push_back(AWord{cur});
            return;
        }
        for (auto& l : letters) {
            cur.push_back(l);
            if (is_normal(cur)) self(self, depth + 1);
            cur.pop_back();
        }
    };
    rec(rec, 0);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<BMon> graded_bmons(int n, int d, size_t cap) {
    if (d < 0) throw dkalg_error("graded_bmons: d >= 0 required");
    std::vector<BMon> out;
    for (auto& g : all_bgens(n)) {
        for (int d1 = 0; d1 <= d; ++d1) {
            auto lefts = graded_awords(n, d1, cap);
            auto rights = graded_awords(n, d - d1, cap);
            if (out.size() + lefts.size() * rights.size() > cap)
                throw overflow_error("graded_bmons: basis enumeration exceeds cap");
            for (auto& w1 : lefts)
                for (auto& w2 : rights) {
                    BMon m = bmon_normalize(w1.letters, g, w2.letters, n);
                    if (m.left == w1 && m.right == w2) out.push_back(m);
                }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::string aword_str(const AWord& w) {
    if (w.empty()) return "1";
    std::ostringstream os;
    for (size_t i = 0; i < w.letters.size(); ++i) {
        if (i) os << ".";
        os << "a" << w.letters[i].i << w.letters[i].j;
    }
    return os.str();
}

std::string bgen_str(const BGen& g) {
    std::ostringstream os;
    os << (g.kind == BKind::ell ? "l" : "r") << g.i << g.j << g.k;
    return os.str();
}

std::string bmon_str(const BMon& m) {
    std::ostringstream os;
    os << "[" << (m.left.empty() ? "" : aword_str(m.left)) << "|" << bgen_str(m.gen) << "|"
       << (m.right.empty() ? "" : aword_str(m.right)) << "]";
    return os.str();
}

namespace {

std::string coeff_wrapped(const Coeff& c) {
    if (c.terms.size() == 1) {
        auto& [m, r] = *c.terms.begin();
        if (m.is_one() && r > 0) {
            std::ostringstream os;
            os << numerator(r);
            if (denominator(r) != 1) os << "/" << denominator(r);
            return os.str();
        }
    }
    return "(" + c.str() + ")";
}

std::string coeff_wrapped(const Rational& r) {
    std::ostringstream os;
    if (r > 0) {
        os << numerator(r);
        if (denominator(r) != 1) os << "/" << denominator(r);
        return os.str();
    }
    os << "(" << numerator(r);
    if (denominator(r) != 1) os << "/" << denominator(r);
    os << ")";
    return os.str();
}

std::string coeff_wrapped(const std::complex<double>& z) {
    std::ostringstream os;
    os.precision(17);
    os << "(" << z.real();
    if (z.imag() >= 0)
        os << "+" << z.imag() << "i)";
    else
        os << z.imag() << "i)";
    return os.str();
}

template <class K>
std::string element_str_impl(const ElementT<K>& e) {
    if (e.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto& [w, c] : e.deg0) {
        if (!first) os << " + ";
        first = false;
        os << coeff_wrapped(c) << "*" << aword_str(w);
    }
    for (auto& [m, c] : e.degm1) {
        if (!first) os << " + ";
        first = false;
        os << coeff_wrapped(c) << "*" << bmon_str(m);
    }
    return os.str();
}

} // namespace

std::string element_str(const ElementT<Coeff>& e) { return element_str_impl(e); }
std::string element_str(const ElementT<Rational>& e) { return element_str_impl(e); }
std::string element_str(const ElementT<std::complex<double>>& e) { return element_str_impl(e); }

namespace {

struct ElemParser {
    const std::string& s;
    size_t pos = 0;
    int n;

    ElemParser(const std::string& str, int ambient) : s(str), n(ambient) {}

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    [[noreturn]] void fail(const std::string& what) {
        throw dkalg_error("element parse error at " + std::to_string(pos) + ": " + what);
    }
    bool peek(char c) {
        skip_ws();
        return pos < s.size() && s[pos] == c;
    }
    void expect(char c) {
        if (!peek(c)) fail(std::string("expected '") + c + "'");
        ++pos;
    }
    int digit() {
        if (pos >= s.size() || !std::isdigit(static_cast<unsigned char>(s[pos]))) fail("digit");
        return s[pos++] - '0';
    }

    AGen parse_agen() {
        expect('a');
        int i = digit(), j = digit();
        return agen(i, j);
    }
    std::vector<AGen> parse_aword_letters() {
        std::vector<AGen> v;
        skip_ws();
        if (pos < s.size() && s[pos] == '1') {
            ++pos;
            return v;
        }
        v.push_back(parse_agen());
        while (peek('.')) {
            ++pos;
            v.push_back(parse_agen());
        }
        return v;
    }

    Coeff parse_coeff_part() {
        skip_ws();
        if (peek('(')) {
            // balanced-paren coefficient
            size_t start = ++pos;
            int depth = 1;
            while (pos < s.size() && depth > 0) {
                if (s[pos] == '(') ++depth;
                if (s[pos] == ')') --depth;
                ++pos;
            }
            if (depth != 0) fail("unbalanced parens in coefficient");
            return coeff_parse(s.substr(start, pos - 1 - start));
        }
        size_t start = pos;
        if (pos < s.size() && (s[pos] == '-' || s[pos] == '+')) ++pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos < s.size() && s[pos] == '/') {
            ++pos;
            while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        }
        if (pos == start) fail("expected coefficient");
        return coeff_parse(s.substr(start, pos - start));
    }

    void parse_term(ElementT<Coeff>& e, bool negate) {
        Coeff c = parse_coeff_part();
        if (negate) c = -c;
        expect('*');
        skip_ws();
        if (peek('[')) {
            ++pos;
            std::vector<AGen> left;
            skip_ws();
            if (!peek('|')) left = parse_aword_letters();
            expect('|');
            skip_ws();
            if (pos >= s.size() || (s[pos] != 'l' && s[pos] != 'r')) fail("expected l/r generator");
            BKind kind = (s[pos] == 'l') ? BKind::ell : BKind::r;
            ++pos;
            int i = digit(), j = digit(), k = digit();
            expect('|');
            std::vector<AGen> right;
            skip_ws();
            if (!peek(']')) right = parse_aword_letters();
            expect(']');
            e.add_degm1(bmon_normalize(left, bgen(kind, i, j, k), right, n), c);
        } else {
            e.add_deg0(aword_normalize(parse_aword_letters(), n), c);
        }
    }

    ElementT<Coeff> parse() {
        ElementT<Coeff> e(n);
        skip_ws();
        if (pos < s.size() && s[pos] == '0' && pos + 1 == s.size()) return e;
        parse_term(e, false);
        while (true) {
            skip_ws();
            if (pos >= s.size()) break;
            if (peek('+')) {
                ++pos;
                parse_term(e, false);
            } else if (peek('-')) {
                ++pos;
                parse_term(e, true);
            } else {
                fail("expected '+' or '-'");
            }
        }
        return e;
    }
};

} // namespace

ElementT<Coeff> element_parse(const std::string& s, int n) {
    ElemParser p(s, n);
    return p.parse();
}

} // namespace dk2
