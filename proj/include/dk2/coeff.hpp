#pragma once

#include <complex>
#include <compare>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dk2/rational.hpp"

namespace dk2 {

// Index (s1,...,sk) of a multiple zeta value; admissible iff s1 >= 2.
struct MZVIndex {
    std::vector<int> entries;

    MZVIndex() = default;
    MZVIndex(std::initializer_list<int> s) : entries(s) {}
    explicit MZVIndex(std::vector<int> s) : entries(std::move(s)) {}

    bool admissible() const {
        if (entries.empty()) return false;
        if (entries.front() < 2) return false;
        for (int s : entries)
            if (s < 1) return false;
        return true;
    }
    int weight() const {
        int w = 0;
        for (int s : entries) w += s;
        return w;
    }
    auto operator<=>(const MZVIndex&) const = default;
};

// ipi^a * leps^b * product of MZV symbols (sorted multiset).
struct CoeffMonomial {
    int ipi_pow = 0;
    int lneps_pow = 0;
    std::vector<MZVIndex> mzv_factors; // kept sorted

    void canonicalize();
    bool is_one() const { return ipi_pow == 0 && lneps_pow == 0 && mzv_factors.empty(); }
    auto operator<=>(const CoeffMonomial&) const = default;
};

// Exact element of Q[(ipi), leps, MZV symbols]. No zero-valued terms.
class Coeff {
  public:
    std::map<CoeffMonomial, Rational> terms;

    Coeff() = default;

    static Coeff zero() { return Coeff(); }
    static Coeff one() { return rational(1); }
    static Coeff rational(const Rational& r);
    static Coeff from_int(long v) { return rational(Rational(v)); }
    static Coeff ipi(int pow = 1);
    static Coeff lneps(int pow = 1);
    static Coeff zeta(const MZVIndex& idx);
    static Coeff monomial(const CoeffMonomial& m, const Rational& r);

    bool is_zero() const { return terms.empty(); }
    // true iff every monomial is rational * ipi^a * leps^b (no MZV symbols)
    bool mzv_free() const;
    bool has_lneps() const;

    Coeff& operator+=(const Coeff& o);
    Coeff& operator-=(const Coeff& o);
    Coeff operator+(const Coeff& o) const { Coeff r = *this; r += o; return r; }
    Coeff operator-(const Coeff& o) const { Coeff r = *this; r -= o; return r; }
    Coeff operator-() const;
    Coeff operator*(const Coeff& o) const;
    Coeff& operator*=(const Coeff& o) { *this = *this * o; return *this; }
    bool operator==(const Coeff& o) const { return terms == o.terms; }

    Coeff pow(int k) const;

    // split by leps exponent; keys are the occurring powers, values leps-free
    std::map<int, Coeff> split_lneps() const;

    std::string str() const;
};

Coeff coeff_parse(const std::string& s);

// substitutes ipi -> i*pi, leps -> ln(eps), MZVs via mzv_eval at mzv_tol
std::complex<double> coeff_eval(const Coeff& c, std::optional<double> eps,
                                double mzv_tol = 1e-10);

struct coeff_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// zeta_j^{p,q} = (-1)^{|j|+|p|} zeta(p1+1,{1}^{q1-1},...) prod C(p_l, j_l)
Coeff zeta_coeff(const std::vector<int>& p, const std::vector<int>& q,
                 const std::vector<int>& j);

// zeta_{j,k}^{p,q} = zeta_j^{p,q} * prod C(q_l,k_l) (-1)^{k_l}
Coeff zeta_coeff_full(const std::vector<int>& p, const std::vector<int>& q,
                      const std::vector<int>& j, const std::vector<int>& k);

} // namespace dk2
