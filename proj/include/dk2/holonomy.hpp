#pragma once

#include <array>
#include <functional>

#include "dk2/series.hpp"

namespace dk2 {

struct holonomy_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct QuadConfig {
    double tol = 1e-9;
    int max_depth = 16;
};

// smooth plane path r in [0,1] -> (x, y, dx/dr, dy/dr), image inside
// U' = {0 < x < y < 1}
struct PathSpec {
    std::string name;
    std::function<std::array<double, 4>(double)> eval;
};

struct PentagonPaths {
    double eps = 0;
    PathSpec cI, cII, cIII, cIV, cV;
    PathSpec cIII_rev; // c_III reversed
    PathSpec cII1;     // c_II^1
};

// validates eps in (0, 1/2); every pentagon path stays inside U' on that range
PentagonPaths pentagon_paths(double eps);

// truncated parallel transport W = 1 + int A + int int_{r1<r2} A(r2) A(r1)
// with respect to A|U', as a t-degree series (N = 2, ambient n = 3).
// err_estimate, when supplied, receives the summed accepted-panel defects.
NumSeries path_transport(const PathSpec& p, const QuadConfig& quad = {},
                         double* err_estimate = nullptr);

// 2-holonomy of the pentagon 2-paths; at t-degree 2 the sandwiching
// transports are 1 and the result is the plain double integral of B|U'
NumSeries surface_p1(double eps, const QuadConfig& quad = {}, double* err_estimate = nullptr);
NumSeries surface_p2(double eps, const QuadConfig& quad = {}, double* err_estimate = nullptr);

// W^P = W^{c_III} W^{P_I} + W^{P_II}
NumSeries pentagon_wp(double eps, const QuadConfig& quad = {}, double* err_estimate = nullptr);

struct GlobularityRow {
    double eps = 0;
    std::array<double, 3> resid{}; // per t-degree 0,1,2
    double max() const { return std::max({resid[0], resid[1], resid[2]}); }
};
std::vector<GlobularityRow> globularity_check(const std::vector<double>& eps,
                                              const QuadConfig& quad = {});

struct PentagonNumRow {
    double eps = 0;
    double resid = 0;   // max residual of d(W^P) against the dressed product difference
    double m0_diff = 0; // max |W^P|_2 - solved M0 at lambda = ln eps|
    bool auxiliary = false; // added internally to complete the geometric grid
};
struct PentagonNumReport {
    std::vector<PentagonNumRow> rows;
    double resid_extrapolated = 0;
    double m0_extrapolated = 0;
    bool decreasing = false;
    std::string csv() const;
};
PentagonNumReport pentagon_order2(const std::vector<double>& eps, const QuadConfig& quad = {});

// extrapolation in eps with the logarithmic model
// v(eps) = v_inf + eps (c0 [+ c1 ln eps + c2 ln^2 eps]); returns v_inf
double extrapolate_log(const std::vector<double>& eps, const std::vector<double>& vals);

} // namespace dk2
