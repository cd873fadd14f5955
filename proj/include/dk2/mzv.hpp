#pragma once

#include "dk2/coeff.hpp"

namespace dk2 {

struct mzv_divergence_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Certified numeric value of zeta(idx): |result - zeta| <= tol.
// Memoized; safe to call concurrently.
double mzv_eval(const MZVIndex& idx, double tol = 1e-10);

// Value together with the certified error bound actually achieved.
std::pair<double, double> mzv_eval_with_bound(const MZVIndex& idx, double tol = 1e-10);

// Reference oracle: plain truncated nested summation with n1 <= cutoff,
// plus a rigorous upper bound on the discarded tail. Slowly convergent;
// test use only.
std::pair<double, double> mzv_direct_sum(const MZVIndex& idx, long cutoff);

} // namespace dk2
