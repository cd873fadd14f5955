#pragma once

#include "dk2/series.hpp"

namespace dk2 {

struct mods_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// degree-(-1) series with a declared contract d(body) = domain - codomain;
// extra_boundary carries a declared boundary for formally supplied parts
// (the effective boundary is d(body) + extra_boundary)
struct ModSeries {
    std::string name;
    Series body;
    Series domain;
    Series codomain;
    Series extra_boundary;

    ModSeries() = default;
    ModSeries(std::string nm, Series b, Series dom, Series cod)
        : name(std::move(nm)), body(std::move(b)), domain(std::move(dom)),
          codomain(std::move(cod)), extra_boundary(Series::zero(body.n, body.N)) {}
};

struct OrderVerdict {
    bool exact_zero = false;
    double resid = 0.0;
};

struct BoundaryReport {
    std::string name;
    std::vector<OrderVerdict> orders;
    bool all_exact = true;
    double max_resid = 0.0;
    bool pass(double tol) const { return max_resid <= tol; }
};

// max over lambda powers and monomials of the numeric value; splitting by
// lambda power first makes the verdict independent of any eps choice
double lambda_split_norm(const ElementT<Coeff>& e, double mzv_tol = 1e-10);

BoundaryReport verify_boundary(const ModSeries& m, double mzv_tol = 1e-10);

// congruence-type exchange  exp(cu u) exp(cv v) => exp(cv v) exp(cu u)
// with witness d(omega) = uv - vu (checked exactly)
ModSeries witnessed_exchange(const Coeff& cu, const ElementT<Coeff>& u, const Coeff& cv,
                             const ElementT<Coeff>& v, const ElementT<Coeff>& omega, int N);

// the exponential-splitting modifications
enum class BchKind {
    hex_split_12_3, // e^{i pi t_(12)3} => e^{i pi L} e^{-i pi t12}
    hex_merge_13,   // e^{i pi L} e^{i pi tbar13} => e^{i pi t13}
    eps_split_23_4, // eps^{L234} eps^{-t23} => eps^{t_(23)4}
    eps_split_1_23, // eps^{t23} eps^{-L123} => eps^{-t_1(23)}
    eps_merge_12_3, // eps^{L123} => eps^{t_(12)3} eps^{t12}
    eps_merge_2_34, // eps^{-L234} => eps^{-t34} eps^{-t_2(34)}
};
std::vector<BchKind> all_bch_kinds();
std::string to_string(BchKind k);
ModSeries bch_split(BchKind kind, int N);

// the modifications commuting an associator past an exponential
enum class PhiCommuteKind {
    hex_lambda,      // Phi(t12,t13) e^{i pi L} => e^{i pi L} Phi(t12,t13)
    pent_phi123,     // Phi123 eps^{-L123} => eps^{-L123} Phi123
    pent_phi234,     // eps^{L234} Phi234 => Phi234 eps^{L234}
    pent_phi1_23_4,  // eps^{2 t23} Phi_1(23)4 => Phi_1(23)4 eps^{2 t23}
    pent_phi_12_3_4, // eps^{-2 t12} Phi_(12)34 => Phi_(12)34 eps^{-2 t12}
    pent_phi12_34,   // Phi_12(34) eps^{2 t34} => eps^{2 t34} Phi_12(34)
};
std::vector<PhiCommuteKind> all_phi_commute_kinds();
std::string to_string(PhiCommuteKind k);
ModSeries phi_commute(PhiCommuteKind kind, int N);

// generic body: each compact-form monomial of Phi(X,Y) commuted past
// exp(c Z), with witnesses wX against X-letters and wY against Y-letters
Series phi_commute_series(const ElementT<Coeff>& X, const ElementT<Coeff>& Y,
                          const ElementT<Coeff>& Z, const Coeff& c,
                          const ElementT<Coeff>& wX, const ElementT<Coeff>& wY, int sign,
                          int N);

// Phi(t12,t13) => Phi(t12,tbar13) via the adjoint-form nested sum
ModSeries debar(int N);
// Phi(t23,tbar13) => Phi(t23,t13): debar times -1 under the (1<->3) permutation
ModSeries debar_reflected(int N);

// strand permutation applied to body, domain, codomain (and declared boundary)
ModSeries apply_strand_perm(const std::vector<int>& perm, const ModSeries& m,
                            const std::string& new_name);

// right pre-hexagonator
//   R : Phi(t12,t13) e^{i pi t_(12)3} Phi(t23,t12)
//         => e^{i pi t13} Phi(t23,t13) e^{i pi t23}
ModSeries hexagonator(int N);
// L := R_321
ModSeries hexagonator_left(int N);

// the reduced Breen element, endomorphic on 0
ModSeries breen_element(int N);

struct SpanResidue {
    int order = 0;
    bool exact_zero = false;
    double resid = 0.0;
};
// reduce each body coefficient modulo the relation + Peiffer span of its
// a-degree, then evaluate the residue numerically
std::vector<SpanResidue> body_span_residues(const ModSeries& m, double mzv_tol = 1e-10);

// ---------------------------------------------------------------------------
// pentagonator

struct PentagonAssembly {
    int N = 0;
    Series chain_body;  // all whiskered ingredient modifications, M0 excluded
    Series m0_pre, m0_post; // M0 enters as m0_pre * body(M0) * m0_post
    Series dom0, cod0;      // the declared contract of M0
    Series domain, codomain;
};
PentagonAssembly pentagon_assembly(int N);

// M0 declared formally: zero body, declared boundary dom0 - cod0
ModSeries pentagon_m0_formal(int N);
// M0 solved exactly from its declared boundary at hbar^2 (unique by the
// trivial kernel at n=3, d=0)
ModSeries pentagon_m0_solved(int N);
ElementT<Coeff> pentagon_m0_order2();

// assemble the pentagonator from a supplied M0 (formal, solved, or numeric)
ModSeries pentagonator(int N, const ModSeries& m0);

} // namespace dk2
