#include "dk2/holonomy.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "dk2/mods.hpp"

namespace dk2 {

namespace {

constexpr int kN = 3; // four strands
using C = std::complex<double>;

// Gauss-Legendre nodes/weights on [-1,1], computed once by Newton iteration
struct GaussRule {
    std::vector<double> x, w;
    explicit GaussRule(int n) : x(n), w(n) {
        for (int i = 0; i < n; ++i) {
            double t = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = 0.0;
                for (int j = 0; j < n; ++j) {
                    double p2 = p1;
                    p1 = p0;
                    p0 = ((2.0 * j + 1.0) * t * p1 - j * p2) / (j + 1.0);
                }
                double dp = n * (t * p0 - p1) / (t * t - 1.0);
                double dt = p0 / dp;
                t -= dt;
                if (std::abs(dt) < 1e-15) break;
            }
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * t * p1 - j * p2) / (j + 1.0);
            }
            double dp = n * (t * p0 - p1) / (t * t - 1.0);
            x[i] = t;
            w[i] = 2.0 / ((1.0 - t * t) * dp * dp);
        }
    }
};

const GaussRule& g15() {
    static GaussRule r(15);
    return r;
}
const GaussRule& g7() {
    static GaussRule r(7);
    return r;
}

const std::array<AGen, 6> kGens = {agen(1, 2), agen(1, 3), agen(1, 4),
                                   agen(2, 3), agen(2, 4), agen(3, 4)};

// coefficients of A|U' contracted with (dx, dy); generator order as in kGens
std::array<double, 6> acoef(const std::array<double, 4>& p) {
    double x = p[0], y = p[1], dx = p[2], dy = p[3];
    if (!(x > 0 && x < y && y < 1))
        throw holonomy_error("path exits U' = {0 < x < y < 1}");
    return {dx / x, dy / y, 0.0, (dx - dy) / (x - y), dx / (x - 1.0), dy / (y - 1.0)};
}

// panel transport on [a,b] by nested Gauss
NumSeries panel_transport(const PathSpec& p, double a, double b) {
    const auto& G = g15();
    const int n = static_cast<int>(G.x.size());
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);

    std::vector<std::array<double, 6>> av(n);
    std::vector<double> rs(n);
    for (int i = 0; i < n; ++i) {
        rs[i] = mid + half * G.x[i];
        av[i] = acoef(p.eval(rs[i]));
    }
    std::array<double, 6> g1{};
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < 6; ++k) g1[k] += half * G.w[i] * av[i][k];

    // F(r_i) = int_a^{r_i} A by the inner rule, then G2 = int A(r) F(r) dr
    std::array<std::array<double, 6>, 15> F{};
    for (int i = 0; i < n; ++i) {
        const double m2 = 0.5 * (a + rs[i]), h2 = 0.5 * (rs[i] - a);
        for (int j = 0; j < n; ++j) {
            auto aj = acoef(p.eval(m2 + h2 * G.x[j]));
            for (int k = 0; k < 6; ++k) F[i][k] += h2 * G.w[j] * aj[k];
        }
    }
    std::array<double, 36> g2{};
    for (int i = 0; i < n; ++i)
        for (int ko = 0; ko < 6; ++ko) {
            if (av[i][ko] == 0.0) continue;
            for (int ki = 0; ki < 6; ++ki)
                g2[ko * 6 + ki] += half * G.w[i] * av[i][ko] * F[i][ki];
        }

    NumSeries W = NumSeries::one(kN, 2);
    for (int k = 0; k < 6; ++k)
        if (g1[k] != 0.0) W.c[1].add_deg0(AWord{{kGens[k]}}, C(g1[k]));
    for (int ko = 0; ko < 6; ++ko)
        for (int ki = 0; ki < 6; ++ki) {
            double v = g2[ko * 6 + ki];
            if (v != 0.0) W.c[2].add_deg0(aword_normalize({kGens[ko], kGens[ki]}, kN), C(v));
        }
    return W;
}

NumSeries adaptive_transport(const PathSpec& p, double a, double b, double tol, int depth,
                             bool& converged, double& est) {
    NumSeries whole = panel_transport(p, a, b);
    double m = 0.5 * (a + b);
    NumSeries split = series_mul(panel_transport(p, m, b), panel_transport(p, a, m));
    double err = max_abs(whole - split);
    if (err <= tol) {
        est += err;
        return split;
    }
    if (depth <= 0) {
        converged = false;
        est += err;
        return split;
    }
    return series_mul(adaptive_transport(p, m, b, 0.5 * tol, depth - 1, converged, est),
                      adaptive_transport(p, a, m, 0.5 * tol, depth - 1, converged, est));
}

// gens carried by B|U', in this order
const std::array<BGen, 4> kBGens = {bgen(BKind::ell, 1, 2, 3), bgen(BKind::r, 1, 2, 3),
                                    bgen(BKind::ell, 2, 3, 4), bgen(BKind::r, 2, 3, 4)};

std::array<double, 4> bcoef(double x, double y) {
    if (!(x > 0 && x < y && y < 1))
        throw holonomy_error("2-path exits U' = {0 < x < y < 1}");
    return {2.0 / (x * y), 2.0 / (y * (x - y)), 2.0 / ((1.0 - x) * (y - x)),
            2.0 / ((1.0 - x) * (y - 1.0))};
}

using Surface = std::function<std::array<double, 4>(double, double)>; // (s,u)

std::array<double, 4> cell_integral(const Surface& f, double s0, double s1, double u0,
                                    double u1) {
    const auto& G = g7();
    const int n = static_cast<int>(G.x.size());
    const double sm = 0.5 * (s0 + s1), sh = 0.5 * (s1 - s0);
    const double um = 0.5 * (u0 + u1), uh = 0.5 * (u1 - u0);
    std::array<double, 4> acc{};
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            auto v = f(sm + sh * G.x[i], um + uh * G.x[j]);
            double wt = sh * uh * G.w[i] * G.w[j];
            for (int k = 0; k < 4; ++k) acc[k] += wt * v[k];
        }
    return acc;
}

void adaptive_cell(const Surface& f, double s0, double s1, double u0, double u1, double tol,
                   int depth, std::array<double, 4>& out, bool& converged, double& est) {
    auto whole = cell_integral(f, s0, s1, u0, u1);
    double sm = 0.5 * (s0 + s1), um = 0.5 * (u0 + u1);
    std::array<std::array<double, 4>, 4> kids = {
        cell_integral(f, s0, sm, u0, um), cell_integral(f, s0, sm, um, u1),
        cell_integral(f, sm, s1, u0, um), cell_integral(f, sm, s1, um, u1)};
    std::array<double, 4> sum{};
    for (auto& k : kids)
        for (int t = 0; t < 4; ++t) sum[t] += k[t];
    double err = 0;
    for (int t = 0; t < 4; ++t) err = std::max(err, std::abs(whole[t] - sum[t]));
    if (err <= tol || depth <= 0) {
        if (err > tol) converged = false;
        est += err;
        for (int t = 0; t < 4; ++t) out[t] += sum[t];
        return;
    }
    adaptive_cell(f, s0, sm, u0, um, 0.25 * tol, depth - 1, out, converged, est);
    adaptive_cell(f, s0, sm, um, u1, 0.25 * tol, depth - 1, out, converged, est);
    adaptive_cell(f, sm, s1, u0, um, 0.25 * tol, depth - 1, out, converged, est);
    adaptive_cell(f, sm, s1, um, u1, 0.25 * tol, depth - 1, out, converged, est);
}

NumSeries surface_result(const std::array<double, 4>& vals) {
    NumSeries W = NumSeries::zero(kN, 2);
    for (int k = 0; k < 4; ++k)
        if (vals[k] != 0.0) W.c[2].add_degm1(BMon{{}, kBGens[k], {}}, C(vals[k]));
    return W;
}

std::array<double, 4> surface_integral(const Surface& f, const QuadConfig& quad,
                                       double* err_estimate) {
    std::array<double, 4> out{};
    const int grid = 4;
    const bool par = parallel_enabled();
    std::vector<std::array<double, 4>> partial(grid * grid, std::array<double, 4>{});
    std::vector<char> ok(grid * grid, 1);
    std::vector<double> ests(grid * grid, 0.0);
    std::exception_ptr err;
#pragma omp parallel for schedule(dynamic) if (par)
    for (int cell = 0; cell < grid * grid; ++cell) {
        try {
            int i = cell / grid, j = cell % grid;
            bool conv = true;
            adaptive_cell(f, i / double(grid), (i + 1) / double(grid), j / double(grid),
                          (j + 1) / double(grid), quad.tol / (grid * grid), quad.max_depth,
                          partial[static_cast<size_t>(cell)], conv,
                          ests[static_cast<size_t>(cell)]);
            ok[static_cast<size_t>(cell)] = conv ? 1 : 0;
        } catch (...) {
#pragma omp critical
            if (!err) err = std::current_exception();
        }
    }
    if (err) std::rethrow_exception(err);
    for (int cell = 0; cell < grid * grid; ++cell)
        if (!ok[static_cast<size_t>(cell)])
            throw holonomy_error("surface quadrature did not converge");
    for (auto& p : partial)
        for (int t = 0; t < 4; ++t) out[t] += p[t];
    if (err_estimate) {
        *err_estimate = 0.0;
        for (double e : ests) *err_estimate += e;
    }
    return out;
}

} // namespace

PentagonPaths pentagon_paths(double eps) {
    if (!(eps > 0.0 && eps < 0.5))
        throw holonomy_error("pentagon paths need eps in (0, 1/2)");
    const double e = eps, e2 = eps * eps;
    PentagonPaths P;
    P.eps = eps;
    P.cI = {"c_I", [e, e2](double r) {
                return std::array<double, 4>{(1 - r) * e2 + r * (e - e2), e, e - 2 * e2, 0.0};
            }};
    P.cII = {"c_II", [e, e2](double r) {
                 double x0 = e - e2, y0 = e, x1 = 1 - e, y1 = 1 - e + e2;
                 return std::array<double, 4>{(1 - r) * x0 + r * x1, (1 - r) * y0 + r * y1,
                                              x1 - x0, y1 - y0};
             }};
    P.cIII = {"c_III", [e, e2](double r) {
                  double y0 = 1 - e + e2, y1 = 1 - e2;
                  return std::array<double, 4>{1 - e, (1 - r) * y0 + r * y1, 0.0, y1 - y0};
              }};
    P.cIV = {"c_IV", [e, e2](double r) {
                 double y0 = e, y1 = 1 - e2;
                 return std::array<double, 4>{e2, (1 - r) * y0 + r * y1, 0.0, y1 - y0};
             }};
    P.cV = {"c_V", [e, e2](double r) {
                double x0 = e2, x1 = 1 - e;
                return std::array<double, 4>{(1 - r) * x0 + r * x1, 1 - e2, x1 - x0, 0.0};
            }};
    auto c3 = P.cIII.eval;
    P.cIII_rev = {"c_III_rev", [c3](double r) {
                      auto q = c3(1 - r);
                      return std::array<double, 4>{q[0], q[1], -q[2], -q[3]};
                  }};
    // c_II^1(r) = (1-r) c_I(0) + r c_III(1)
    P.cII1 = {"c_II^1", [e, e2](double r) {
                  double x0 = e2, y0 = e, x1 = 1 - e, y1 = 1 - e2;
                  return std::array<double, 4>{(1 - r) * x0 + r * x1, (1 - r) * y0 + r * y1,
                                               x1 - x0, y1 - y0};
              }};
    return P;
}

NumSeries path_transport(const PathSpec& p, const QuadConfig& quad, double* err_estimate) {
    // fixed initial panels evaluated independently, composed in order
    const int k = 8;
    const bool par = parallel_enabled();
    std::vector<NumSeries> panels(k);
    std::vector<char> ok(k, 1);
    std::vector<double> ests(k, 0.0);
    std::exception_ptr err;
#pragma omp parallel for schedule(dynamic) if (par)
    for (int i = 0; i < k; ++i) {
        try {
            bool conv = true;
            panels[i] = adaptive_transport(p, i / double(k), (i + 1) / double(k), quad.tol / k,
                                           quad.max_depth, conv, ests[i]);
            ok[i] = conv ? 1 : 0;
        } catch (...) {
#pragma omp critical
            if (!err) err = std::current_exception();
        }
    }
    if (err) std::rethrow_exception(err);
    for (int i = 0; i < k; ++i)
        if (!ok[i]) throw holonomy_error("path transport quadrature did not converge");
    NumSeries W = NumSeries::one(kN, 2);
    for (int i = 0; i < k; ++i) W = series_mul(panels[i], W);
    if (err_estimate) {
        *err_estimate = 0.0;
        for (double e : ests) *err_estimate += e;
    }
    return W;
}

NumSeries surface_p1(double eps, const QuadConfig& quad, double* err_estimate) {
    const double e = eps, e2 = eps * eps;
    // sweeping piece of P_I: r = (1-s)/2 + u/2, dr = du/2
    Surface f = [e, e2](double s, double u) {
        double r = 0.5 * (1 - s) + 0.5 * u;
        double xI = s * e2 + (1 - s) * (e - e2);
        double dxI = 2 * e2 - e;
        double yIII = (1 - s) * (1 - e + e2) + s * (1 - e2);
        double dyIII = e - 2 * e2;
        double a = 2 - 2 * r - s, b = 2 * r + s - 1;
        double x = a * xI + b * (1 - e);
        double y = a * e + b * yIII;
        double dxr = -2 * xI + 2 * (1 - e);
        double dxs = -xI + a * dxI + (1 - e);
        double dyr = -2 * e + 2 * yIII;
        double dys = -e + yIII + b * dyIII;
        double jac = dxs * dyr - dxr * dys;
        auto bc = bcoef(x, y);
        // dr = du/2, and the half that normalizes the factor-2 blocks
        // of B against the transports (same convention as fake flatness)
        for (auto& v : bc) v *= jac * 0.5 * 0.5;
        return bc;
    };
    return surface_result(surface_integral(f, quad, err_estimate));
}

NumSeries surface_p2(double eps, const QuadConfig& quad, double* err_estimate) {
    const double e = eps, e2 = eps * eps;
    // sweeping piece of P_II: r = s/2 + u s/2, dr = (s/2) du
    Surface f = [e, e2](double s, double u) {
        if (s == 0.0) return std::array<double, 4>{0, 0, 0, 0};
        double q = s * u; // the value of 2r - s at r = s/2 + u s/2
        double x = e2 + q * (1 - e - e2);
        double y = (1 - s) * e + s * (1 - e2);
        // partials in the (s, r) parametrization
        double dxr = 2 * (1 - e - e2);
        double dxs = -(1 - e - e2);
        double dyr = 0.0;
        double dys = 1 - e - e2;
        double jac = dxs * dyr - dxr * dys;
        auto bc = bcoef(x, y);
        // dr = (s/2) du, with the same half as in surface_p1
        for (auto& v : bc) v *= jac * 0.5 * s * 0.5;
        return bc;
    };
    return surface_result(surface_integral(f, quad, err_estimate));
}

NumSeries pentagon_wp(double eps, const QuadConfig& quad, double* err_estimate) {
    PentagonPaths P = pentagon_paths(eps);
    double e1 = 0, e2 = 0, e3 = 0;
    NumSeries w3 = path_transport(P.cIII, quad, &e1);
    NumSeries r = series_mul(w3, surface_p1(eps, quad, &e2)) + surface_p2(eps, quad, &e3);
    if (err_estimate) *err_estimate = e1 + e2 + e3;
    return r;
}

std::vector<GlobularityRow> globularity_check(const std::vector<double>& eps,
                                              const QuadConfig& quad) {
    std::vector<GlobularityRow> rows;
    for (double e : eps) {
        PentagonPaths P = pentagon_paths(e);
        NumSeries wI = path_transport(P.cI, quad), wII = path_transport(P.cII, quad);
        NumSeries wIII = path_transport(P.cIII, quad), wIV = path_transport(P.cIV, quad);
        NumSeries wV = path_transport(P.cV, quad);
        NumSeries wp = pentagon_wp(e, quad);
        NumSeries lhs = series_mul(wIII, series_mul(wII, wI));
        NumSeries rhs = series_mul(wV, wIV);
        NumSeries resid = boundary(wp) - (lhs - rhs);
        GlobularityRow row;
        row.eps = e;
        for (int k = 0; k <= 2; ++k) row.resid[static_cast<size_t>(k)] = max_abs(resid.c[k]);
        rows.push_back(row);
    }
    return rows;
}

double extrapolate_log(const std::vector<double>& eps, const std::vector<double>& vals) {
    const size_t m = eps.size();
    if (m == 0) return 0.0;
    if (m == 1) return vals[0];
    // columns: 1, eps*L, eps*L^2 and, with four or more points, eps
    size_t cols = std::min<size_t>(m, m >= 4 ? 4 : 3);
    std::vector<std::vector<double>> X(m, std::vector<double>(cols, 0.0));
    for (size_t i = 0; i < m; ++i) {
        double L = std::log(eps[i]);
        X[i][0] = 1.0;
        if (cols > 1) X[i][1] = eps[i] * L;
        if (cols > 2) X[i][2] = eps[i] * L * L;
        if (cols > 3) X[i][3] = eps[i];
    }
    std::vector<std::vector<double>> A(cols, std::vector<double>(cols + 1, 0.0));
    for (size_t a = 0; a < cols; ++a) {
        for (size_t b = 0; b < cols; ++b)
            for (size_t i = 0; i < m; ++i) A[a][b] += X[i][a] * X[i][b];
        for (size_t i = 0; i < m; ++i) A[a][cols] += X[i][a] * vals[i];
    }
    for (size_t c = 0; c < cols; ++c) {
        size_t piv = c;
        for (size_t r = c + 1; r < cols; ++r)
            if (std::abs(A[r][c]) > std::abs(A[piv][c])) piv = r;
        std::swap(A[c], A[piv]);
        if (A[c][c] == 0.0) continue;
        for (size_t r = 0; r < cols; ++r) {
            if (r == c) continue;
            double f = A[r][c] / A[c][c];
            for (size_t b = c; b <= cols; ++b) A[r][b] -= f * A[c][b];
        }
    }
    return A[0][0] == 0.0 ? 0.0 : A[0][cols] / A[0][0];
}

std::string PentagonNumReport::csv() const {
    std::ostringstream os;
    os << "eps,resid,m0_diff,auxiliary\n";
    os.precision(17);
    for (auto& r : rows)
        os << r.eps << "," << r.resid << "," << r.m0_diff << "," << (r.auxiliary ? 1 : 0)
           << "\n";
    return os.str();
}

PentagonNumReport pentagon_order2(const std::vector<double>& epslist, const QuadConfig& quad) {
    using E = ElementT<C>;
    const int n = kN;
    auto T = [&](int i, int j) { return E::agen_elem(n, i, j); };
    E t12 = T(1, 2), t13 = T(1, 3), t23 = T(2, 3), t24 = T(2, 4), t34 = T(3, 4);
    E t1_23 = t12 + t13, t23_4 = t24 + t34, t12_3 = t13 + t23, t2_34 = t23 + t24;
    const double z2 = std::numbers::pi * std::numbers::pi / 6.0;

    auto phin = [&](const E& x, const E& y) {
        NumSeries s = NumSeries::one(n, 2);
        s.c[2] = (mul(x, y) - mul(y, x)).scaled(C(-z2));
        return s;
    };

    ElementT<Coeff> m0_sym = pentagon_m0_order2();

    // the supplied grid, geometrically extended to at least four points so the
    // {1, eps, eps ln eps, eps ln^2 eps} model is identifiable
    std::vector<double> grid = epslist;
    std::sort(grid.begin(), grid.end(), std::greater<double>());
    while (grid.size() < 4 && !grid.empty()) grid.push_back(grid.back() / 2.0);

    PentagonNumReport rep;
    std::map<AWord, std::vector<double>> resid_traj;
    std::map<BGen, std::vector<double>> m0_traj;
    for (double e : grid) {
        double L = std::log(e);
        auto ee = [&](const E& x, double s) { return series_exp(x, C(s * L), 2); };
        NumSeries src = series_mul(
            series_mul(series_mul(ee(t34, 1), phin(t23, t34)),
                       series_mul(ee(t23, -1), ee(t23_4, 1))),
            series_mul(series_mul(phin(t1_23, t23_4), series_mul(ee(t1_23, -1), ee(t23, 1))),
                       series_mul(phin(t12, t23), ee(t12, -1))));
        NumSeries tgt = series_mul(
            series_mul(series_mul(ee(t2_34, 1), phin(t12, t2_34)),
                       series_mul(ee(t12, -2), ee(t34, 2))),
            series_mul(phin(t12_3, t34), ee(t12_3, -1)));

        NumSeries wp = pentagon_wp(e, quad);
        NumSeries resid = boundary(wp) - (src - tgt);
        ElementT<C> m0diff = wp.c[2] - to_numeric(m0_sym, e);

        PentagonNumRow row;
        row.eps = e;
        row.resid = max_abs(resid);
        row.m0_diff = max_abs(m0diff);
        row.auxiliary = std::find(epslist.begin(), epslist.end(), e) == epslist.end();
        rep.rows.push_back(row);

        // signed trajectories, zero-filled for monomials absent at this eps
        for (auto& [w, v] : resid.c[2].deg0) (void)resid_traj[w];
        for (auto& [b, v] : m0diff.degm1) (void)m0_traj[b.gen];
        for (auto& [w, vec] : resid_traj) {
            auto it = resid.c[2].deg0.find(w);
            vec.resize(rep.rows.size() - 1, 0.0);
            vec.push_back(it == resid.c[2].deg0.end() ? 0.0 : it->second.real());
        }
        for (auto& [g, vec] : m0_traj) {
            auto it = m0diff.degm1.find(BMon{{}, g, {}});
            vec.resize(rep.rows.size() - 1, 0.0);
            vec.push_back(it == m0diff.degm1.end() ? 0.0 : it->second.real());
        }
    }
    rep.resid_extrapolated = 0.0;
    rep.m0_extrapolated = 0.0;
    for (auto& [w, vec] : resid_traj)
        rep.resid_extrapolated =
            std::max(rep.resid_extrapolated, std::abs(extrapolate_log(grid, vec)));
    for (auto& [g, vec] : m0_traj)
        rep.m0_extrapolated =
            std::max(rep.m0_extrapolated, std::abs(extrapolate_log(grid, vec)));
    rep.decreasing = true;
    for (size_t i = 0; i + 1 < rep.rows.size(); ++i)
        rep.decreasing = rep.decreasing && rep.rows[i + 1].resid <= rep.rows[i].resid;
    return rep;
}

} // namespace dk2
