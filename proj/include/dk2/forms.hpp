#pragma once

#include "dk2/algebra.hpp"

namespace dk2 {

struct forms_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// exact multivariate rational functions

using Expo = std::vector<int>;

struct Poly {
    int nvars = 0;
    std::map<Expo, Rational> terms;

    Poly() = default;
    explicit Poly(int nv) : nvars(nv) {}
    static Poly constant(int nv, const Rational& r);
    static Poly var(int nv, int v, int pow = 1);
    // nvars == 0 acts as a dimensionless constant and promotes on demand
    Poly promoted(int nv) const;

    bool is_zero() const { return terms.empty(); }
    void add_term(const Expo& e, const Rational& r);

    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator-() const;
    Poly operator*(const Poly& o) const;
    Poly& operator+=(const Poly& o) { return *this = *this + o; }
    bool operator==(const Poly& o) const { return nvars == o.nvars && terms == o.terms; }

    Poly derivative(int v) const;
    // grlex-largest term
    std::pair<Expo, Rational> leading() const;
};

// numerator/denominator pair in canonical form: common monomial factor and
// rational content removed, denominator's grlex-leading coefficient positive;
// equality is the cross-multiplied polynomial identity
struct RatFun {
    Poly num, den;

    RatFun() : num(0), den(0) {}
    RatFun(Poly n, Poly d);
    static RatFun constant(int nv, const Rational& r) {
        return RatFun(Poly::constant(nv, r), Poly::constant(nv, 1));
    }
    static RatFun of(const Poly& p) { return RatFun(p, Poly::constant(p.nvars, 1)); }

    bool is_zero() const { return num.is_zero(); }

    RatFun operator+(const RatFun& o) const;
    RatFun operator-(const RatFun& o) const;
    RatFun operator-() const;
    RatFun operator*(const RatFun& o) const;
    RatFun operator/(const RatFun& o) const;
    RatFun& operator+=(const RatFun& o) { return *this = *this + o; }
    RatFun& operator-=(const RatFun& o) { return *this = *this - o; }
    RatFun& operator*=(const RatFun& o) { return *this = *this * o; }
    bool operator==(const RatFun& o) const; // cross-multiplied identity
    bool operator<(const RatFun& o) const;  // structural, for map keys only

    RatFun derivative(int v) const;
    RatFun pow(int k) const;
};

RatFun subst(const Poly& p, const std::vector<RatFun>& images);
RatFun subst(const RatFun& f, const std::vector<RatFun>& images);

std::string poly_str(const Poly& p, const std::vector<std::string>& vars);
std::string ratfun_str(const RatFun& f, const std::vector<std::string>& vars);

template <>
struct Ring<RatFun> {
    static RatFun from_int(long v) { return RatFun::constant(0, Rational(v)); }
    static RatFun from_rational(const Rational& r) { return RatFun::constant(0, r); }
    static bool is_zero(const RatFun& f) { return f.is_zero(); }
};

// ---------------------------------------------------------------------------
// algebra-valued differential forms

struct Chart {
    std::vector<std::string> vars;
    bool operator==(const Chart&) const = default;
    int size() const { return static_cast<int>(vars.size()); }
};

Chart chart_z1234();
Chart chart_zuvw();
Chart chart_xy();

struct AlgForm {
    Chart chart;
    int n = 0;      // algebra ambient
    int degree = 0; // form degree
    // wedge index (strictly increasing chart-variable indices) -> coefficient
    std::map<std::vector<int>, ElementT<RatFun>> comps;

    AlgForm() = default;
    AlgForm(Chart ch, int ambient, int deg)
        : chart(std::move(ch)), n(ambient), degree(deg) {}

    void add(const std::vector<int>& idx, const ElementT<RatFun>& e);
    bool is_zero() const;
    AlgForm operator+(const AlgForm& o) const;
    AlgForm operator-(const AlgForm& o) const;
    AlgForm operator-() const;
    bool operator==(const AlgForm& o) const;
};

AlgForm d(const AlgForm& f);
AlgForm wedge(const AlgForm& f, const AlgForm& g);
// pairs Element parts by the commutator [x, w] = xw - wx
AlgForm bracket_wedge(const AlgForm& a, const AlgForm& b);
AlgForm boundary(const AlgForm& f);

// pullback along var_images: source chart variable i becomes images[i] on the
// target chart
AlgForm pullback(const AlgForm& f, const Chart& target, const std::vector<RatFun>& images);

// the KZ 2-connection on Y4 in the (z1..z4) chart, ambient n = 3
std::pair<AlgForm, AlgForm> kz_connection();

// the birational chart map phi(z,u,v,w) = (w, zv+w, uv+w, v+w) and its inverse
std::vector<RatFun> phi_images();     // z1..z4 as polynomials in (z,u,v,w)
std::vector<RatFun> phi_inv_images(); // z,u,v,w as rational functions of z1..z4

AlgForm pullback_phi(const AlgForm& f);

// reference forms the pullback and restriction are compared against
AlgForm pulled_back_A_reference();
AlgForm pulled_back_B_reference();

// restriction to U' = {w=0, v=1, z=x, u=y}
AlgForm restrict_triangle(const AlgForm& f);
AlgForm restricted_A_reference();
AlgForm restricted_B_reference();

struct FakeFlatReport {
    // F = dA + A^A tested against +-dB and +-dB/2 (B carries factor-2
    // blocks, so the identity that holds on this data is 2F = dB)
    bool minus_zero = false;      // F - dB == 0
    bool plus_zero = false;       // F + dB == 0
    bool half_minus_zero = false; // F - dB/2 == 0
    bool half_plus_zero = false;  // F + dB/2 == 0
    bool pass() const { return minus_zero || plus_zero || half_minus_zero || half_plus_zero; }
    std::string convention() const;
};
FakeFlatReport fake_flatness(const AlgForm& A, const AlgForm& B);

struct TwoFlatReport {
    bool structure_ok = false;   // only the dz^du^dv wedge carries the bracket
    bool matches_reference = false; // M equals the eight reference blocks
    bool dB_zero = false;
    bool reduces_to_zero = false; // M is in the relation span
    bool free_nonzero = false;    // negative control: nonzero before reduction
    ElementT<RatFun> M;
};
TwoFlatReport two_flatness(const AlgForm& A, const AlgForm& B);

// the reference element M (eight blocks)
ElementT<RatFun> two_flat_M_reference();

std::string algform_str(const AlgForm& f);

} // namespace dk2
