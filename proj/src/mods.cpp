#include "dk2/mods.hpp"

#include <functional>

#include "dk2/linalg.hpp"

namespace dk2 {

namespace {

using E = ElementT<Coeff>;

std::vector<E> epowers(const E& x, int N) {
    std::vector<E> t{E::one(x.n)};
    for (int k = 1; k <= N; ++k) t.push_back(mul(t.back(), x));
    return t;
}

E tgen(int n, int i, int j) { return E::agen_elem(n, i, j); }
E lgen(int n, int i, int j, int k) { return E::bgen_elem(n, BKind::ell, i, j, k); }
E rgen(int n, int i, int j, int k) { return E::bgen_elem(n, BKind::r, i, j, k); }

Coeff lam(long s = 1) { return Coeff::rational(Rational(s)) * Coeff::lneps(1); }
Coeff ipi(long s = 1) { return Coeff::rational(Rational(s)) * Coeff::ipi(1); }

Series exps(const E& x, const Coeff& scale, int N) { return series_exp(x, scale, N); }

Series prod(std::initializer_list<Series> fs) {
    auto it = fs.begin();
    Series r = *it++;
    for (; it != fs.end(); ++it) r = series_mul(r, *it);
    return r;
}

E prodElems(std::initializer_list<E> es) {
    auto it = es.begin();
    E r = *it++;
    for (; it != es.end(); ++it) r = mul(r, *it);
    return r;
}

int sum(const std::vector<int>& v) {
    int s = 0;
    for (int x : v) s += x;
    return s;
}

struct BoxIter {
    std::vector<int> bound;
    std::vector<int> j;
    bool done = false;
    explicit BoxIter(std::vector<int> b) : bound(std::move(b)), j(bound.size(), 0) {}
    bool next() {
        for (size_t i = 0; i < j.size(); ++i) {
            if (j[i] < bound[i]) {
                ++j[i];
                for (size_t t = 0; t < i; ++t) j[t] = 0;
                return true;
            }
        }
        done = true;
        return false;
    }
};

} // namespace

double lambda_split_norm(const ElementT<Coeff>& e, double mzv_tol) {
    double m = 0.0;
    auto scan = [&](const Coeff& c) {
        for (auto& [p, part] : c.split_lneps())
            m = std::max(m, std::abs(coeff_eval(part, std::nullopt, mzv_tol)));
    };
    for (auto& [w, c] : e.deg0) scan(c);
    for (auto& [b, c] : e.degm1) scan(c);
    return m;
}

BoundaryReport verify_boundary(const ModSeries& m, double mzv_tol) {
    Series resid = boundary(m.body) + m.extra_boundary - (m.domain - m.codomain);
    BoundaryReport rep;
    rep.name = m.name;
    for (int k = 0; k <= resid.N; ++k) {
        OrderVerdict v;
        v.exact_zero = resid.c[k].is_zero();
        v.resid = v.exact_zero ? 0.0 : lambda_split_norm(resid.c[k], mzv_tol);
        rep.all_exact = rep.all_exact && v.exact_zero;
        rep.max_resid = std::max(rep.max_resid, v.resid);
        rep.orders.push_back(v);
    }
    return rep;
}

ModSeries witnessed_exchange(const Coeff& cu, const E& u, const Coeff& cv, const E& v,
                             const E& omega, int N) {
    if (!u.pure_deg0() || !v.pure_deg0())
        throw mods_error("witnessed_exchange: u, v must be pure degree 0");
    if (boundary(omega) != mul(u, v) - mul(v, u))
        throw mods_error("witnessed_exchange: witness mismatch, d(omega) != [u,v]");
    const int n = u.n;
    Series body(n, N);
    auto up = epowers(u, N), vp = epowers(v, N);
    std::vector<Coeff> cup{Coeff::one()}, cvp{Coeff::one()};
    for (int k = 1; k <= N; ++k) {
        cup.push_back(cup.back() * cu);
        cvp.push_back(cvp.back() * cv);
    }
    for (int j = 1; j <= N; ++j)
        for (int k = 1; j + k <= N; ++k) {
            Coeff c = cup[j] * cvp[k] *
                      Coeff::rational(Rational(1) / Rational(factorial(j) * factorial(k)));
            E acc(n);
            for (int l = 1; l <= j; ++l)
                for (int mm = 1; mm <= k; ++mm)
                    acc += prodElems({vp[mm - 1], up[l - 1], omega, up[j - l], vp[k - mm]});
            body.c[j + k] += acc.scaled(c);
        }
    Series dom = series_mul(exps(u, cu, N), exps(v, cv, N));
    Series cod = series_mul(exps(v, cv, N), exps(u, cu, N));
    return ModSeries("witnessed_exchange", std::move(body), std::move(dom), std::move(cod));
}

std::vector<BchKind> all_bch_kinds() {
    return {BchKind::hex_split_12_3, BchKind::hex_merge_13, BchKind::eps_split_23_4,
            BchKind::eps_split_1_23, BchKind::eps_merge_12_3, BchKind::eps_merge_2_34};
}

std::string to_string(BchKind k) {
    switch (k) {
        case BchKind::hex_split_12_3: return "hex_split_12_3";
        case BchKind::hex_merge_13: return "hex_merge_13";
        case BchKind::eps_split_23_4: return "eps_split_23_4";
        case BchKind::eps_split_1_23: return "eps_split_1_23";
        case BchKind::eps_merge_12_3: return "eps_merge_12_3";
        default: return "eps_merge_2_34";
    }
}

ModSeries bch_split(BchKind kind, int N) {
    // shared shape: sum_{k>=2} scale^k/k! sum_{l,m,n} C(k-l,m) sgn(k,l,m)
    //                 O1^{l-1} O2^n w O3^{k-l-m-n-1} O4^m
    int n = 0;
    E O1(0), O2(0), O3(0), O4(0), w(0);
    Coeff scale;
    std::function<int(int, int, int)> sgn;
    Series dom, cod;
    switch (kind) {
        case BchKind::hex_split_12_3: {
            n = 2;
            E t12 = tgen(n, 1, 2), t13 = tgen(n, 1, 3), t23 = tgen(n, 2, 3);
            E L = t12 + t13 + t23, t123c = t13 + t23;
            O1 = t123c;
            O2 = O3 = L;
            O4 = t12;
            w = lgen(n, 1, 2, 3);
            scale = ipi();
            sgn = [](int, int, int m) { return (m % 2 == 0) ? -1 : 1; }; // (-1)^{m+1}
            dom = exps(t123c, ipi(), N);
            cod = series_mul(exps(L, ipi(), N), exps(t12, ipi(-1), N));
            break;
        }
        case BchKind::hex_merge_13: {
            n = 2;
            E t12 = tgen(n, 1, 2), t13 = tgen(n, 1, 3), t23 = tgen(n, 2, 3);
            E L = t12 + t13 + t23, tb = t13 - L;
            O1 = t13;
            O2 = O3 = L;
            O4 = tb;
            w = lgen(n, 1, 2, 3) + rgen(n, 1, 2, 3);
            scale = ipi();
            sgn = [](int, int, int) { return 1; };
            dom = series_mul(exps(L, ipi(), N), exps(tb, ipi(), N));
            cod = exps(t13, ipi(), N);
            break;
        }
        case BchKind::eps_split_23_4: {
            n = 3;
            E t23 = tgen(n, 2, 3), t234c = tgen(n, 2, 4) + tgen(n, 3, 4);
            E L = t23 + t234c;
            O1 = t234c;
            O2 = O3 = L;
            O4 = t23;
            w = lgen(n, 2, 3, 4);
            scale = lam();
            sgn = [](int, int, int m) { return (m % 2 == 0) ? 1 : -1; }; // (-1)^m
            dom = series_mul(exps(L, lam(), N), exps(t23, lam(-1), N));
            cod = exps(t234c, lam(), N);
            break;
        }
        case BchKind::eps_split_1_23: {
            n = 3;
            E t23 = tgen(n, 2, 3), t1c23 = tgen(n, 1, 2) + tgen(n, 1, 3);
            E L = t23 + t1c23;
            O1 = t1c23;
            O2 = O3 = t23;
            O4 = L;
            w = rgen(n, 1, 2, 3);
            scale = lam();
            sgn = [](int, int l, int m) { return ((l + m) % 2 == 0) ? 1 : -1; }; // (-1)^{l+m}
            dom = series_mul(exps(t23, lam(), N), exps(L, lam(-1), N));
            cod = exps(t1c23, lam(-1), N);
            break;
        }
        case BchKind::eps_merge_12_3: {
            n = 3;
            E t12 = tgen(n, 1, 2), t123c = tgen(n, 1, 3) + tgen(n, 2, 3);
            E L = t12 + t123c;
            O1 = L;
            O2 = O3 = t123c;
            O4 = t12;
            w = lgen(n, 1, 2, 3);
            scale = lam();
            sgn = [](int, int, int) { return 1; };
            dom = exps(L, lam(), N);
            cod = series_mul(exps(t123c, lam(), N), exps(t12, lam(), N));
            break;
        }
        case BchKind::eps_merge_2_34: {
            n = 3;
            E t34 = tgen(n, 3, 4), t234c = tgen(n, 2, 3) + tgen(n, 2, 4);
            E L = t34 + t234c;
            O1 = L;
            O2 = O3 = t34;
            O4 = t234c;
            w = rgen(n, 2, 3, 4);
            scale = lam();
            sgn = [](int k, int, int) { return (k % 2 == 0) ? -1 : 1; }; // (-1)^{k-1}
            dom = exps(L, lam(-1), N);
            cod = series_mul(exps(t34, lam(-1), N), exps(t234c, lam(-1), N));
            break;
        }
    }
    Series body(n, N);
    auto p1 = epowers(O1, N), p2 = epowers(O2, N), p3 = epowers(O3, N), p4 = epowers(O4, N);
    std::vector<Coeff> sp{Coeff::one()};
    for (int k = 1; k <= N; ++k) sp.push_back(sp.back() * scale);
    for (int k = 2; k <= N; ++k) {
        Coeff ck = sp[k] * Coeff::rational(Rational(1) / Rational(factorial(k)));
        E acc(n);
        for (int l = 1; l <= k - 1; ++l)
            for (int m = 0; m <= k - l - 1; ++m)
                for (int nn = 0; nn <= k - l - m - 1; ++nn) {
                    Rational b(binomial(k - l, m) * sgn(k, l, m));
                    E term = prodElems({p1[l - 1], p2[nn], w, p3[k - l - m - nn - 1], p4[m]});
                    acc += term.scaled(Coeff::rational(b));
                }
        body.c[k] += acc.scaled(ck);
    }
    return ModSeries(to_string(kind), std::move(body), std::move(dom), std::move(cod));
}

std::vector<PhiCommuteKind> all_phi_commute_kinds() {
    return {PhiCommuteKind::hex_lambda,      PhiCommuteKind::pent_phi123,
            PhiCommuteKind::pent_phi234,     PhiCommuteKind::pent_phi1_23_4,
            PhiCommuteKind::pent_phi_12_3_4, PhiCommuteKind::pent_phi12_34};
}

std::string to_string(PhiCommuteKind k) {
    switch (k) {
        case PhiCommuteKind::hex_lambda: return "hex_lambda";
        case PhiCommuteKind::pent_phi123: return "pent_phi123";
        case PhiCommuteKind::pent_phi234: return "pent_phi234";
        case PhiCommuteKind::pent_phi1_23_4: return "pent_phi1_23_4";
        case PhiCommuteKind::pent_phi_12_3_4: return "pent_phi_12_3_4";
        default: return "pent_phi12_34";
    }
}

namespace {

Series phi_commute_body(const E& X, const E& Y, const E& Z, const Coeff& c, const E& wX,
                        const E& wY, int sign, int N) {
    const int n = X.n;
    Series body(n, N);
    auto xp = epowers(X, N), yp = epowers(Y, N), zp = epowers(Z, N);
    std::vector<Coeff> cp{Coeff::one()};
    for (int k = 1; k <= N; ++k) cp.push_back(cp.back() * c);

    for (auto& [p, q] : phi_tuples(N)) {
        const int len = static_cast<int>(p.size());
        const int ap = sum(p), aq = sum(q);
        if (ap + aq + 1 > N) continue;
        BoxIter jit(p);
        while (!jit.done) {
            const auto j = jit.j;
            BoxIter kit(q);
            while (!kit.done) {
                const auto k = kit.j;
                Coeff zc = zeta_coeff_full(p, q, j, k);
                auto jl = [&](int l) {
                    return l == 0 ? 0 : (l == len + 1 ? ap - sum(j) : j[l - 1]);
                };
                auto kl = [&](int l) {
                    return l == 0 ? aq - sum(k) : (l == len + 1 ? 0 : k[l - 1]);
                };
                for (int l = 0; l <= len + 1; ++l) {
                    if (jl(l) == 0 && kl(l) == 0) continue;
                    E pre = E::one(n), post = E::one(n);
                    for (int r = 0; r < l; ++r) pre = mul(pre, mul(xp[jl(r)], yp[kl(r)]));
                    for (int r = l + 1; r <= len + 1; ++r)
                        post = mul(post, mul(xp[jl(r)], yp[kl(r)]));
                    E ins(n);
                    for (int r = 1; r <= jl(l); ++r)
                        ins += prodElems({xp[r - 1], wX, xp[jl(l) - r], yp[kl(l)]});
                    for (int r = 1; r <= kl(l); ++r)
                        ins += prodElems({xp[jl(l)], yp[r - 1], wY, yp[kl(l) - r]});
                    if (ins.is_zero()) continue;
                    E mid = mul(mul(pre, ins), post);
                    for (int m = 1; ap + aq + m <= N; ++m) {
                        Coeff cm =
                            cp[m] * Coeff::rational(Rational(sign) / Rational(factorial(m)));
                        E acc(n);
                        for (int nn = 1; nn <= m; ++nn)
                            acc += prodElems({zp[nn - 1], mid, zp[m - nn]});
                        body.c[ap + aq + m] += acc.scaled(cm * zc);
                    }
                }
                if (!kit.next()) break;
            }
            if (!jit.next()) break;
        }
    }
    return body;
}

} // namespace

Series phi_commute_series(const E& X, const E& Y, const E& Z, const Coeff& c, const E& wX,
                          const E& wY, int sign, int N) {
    return phi_commute_body(X, Y, Z, c, wX, wY, sign, N);
}

ModSeries phi_commute(PhiCommuteKind kind, int N) {
    switch (kind) {
        case PhiCommuteKind::hex_lambda: {
            int n = 2;
            E t12 = tgen(n, 1, 2), t13 = tgen(n, 1, 3), t23 = tgen(n, 2, 3);
            E L = t12 + t13 + t23;
            E wY = -(lgen(n, 1, 2, 3) + rgen(n, 1, 2, 3));
            Series body = phi_commute_body(t12, t13, L, ipi(), lgen(n, 1, 2, 3), wY, 1, N);
            Series phi = drinfeld_phi(t12, t13, N);
            Series el = exps(L, ipi(), N);
            return ModSeries(to_string(kind), std::move(body), series_mul(phi, el),
                             series_mul(el, phi));
        }
        case PhiCommuteKind::pent_phi123: {
            int n = 3;
            E t12 = tgen(n, 1, 2), t23 = tgen(n, 2, 3);
            E L = t12 + t23 + tgen(n, 1, 3);
            Series body = phi_commute_body(t12, t23, L, lam(-1), lgen(n, 1, 2, 3),
                                           rgen(n, 1, 2, 3), 1, N);
            Series phi = drinfeld_phi(t12, t23, N);
            Series el = exps(L, lam(-1), N);
            return ModSeries(to_string(kind), std::move(body), series_mul(phi, el),
                             series_mul(el, phi));
        }
        case PhiCommuteKind::pent_phi234: {
            int n = 3;
            E t23 = tgen(n, 2, 3), t34 = tgen(n, 3, 4);
            E L = t23 + t34 + tgen(n, 2, 4);
            Series body = phi_commute_body(t23, t34, L, lam(), lgen(n, 2, 3, 4),
                                           rgen(n, 2, 3, 4), -1, N);
            Series phi = drinfeld_phi(t23, t34, N);
            Series el = exps(L, lam(), N);
            return ModSeries(to_string(kind), std::move(body), series_mul(el, phi),
                             series_mul(phi, el));
        }
        case PhiCommuteKind::pent_phi1_23_4: {
            int n = 3;
            E X = tgen(n, 1, 2) + tgen(n, 1, 3), Y = tgen(n, 2, 4) + tgen(n, 3, 4);
            E Z = tgen(n, 2, 3);
            Series body =
                phi_commute_body(X, Y, Z, lam(2), rgen(n, 1, 2, 3), lgen(n, 2, 3, 4), 1, N);
            Series phi = drinfeld_phi(X, Y, N);
            Series ez = exps(Z, lam(2), N);
            return ModSeries(to_string(kind), std::move(body), series_mul(ez, phi),
                             series_mul(phi, ez));
        }
        case PhiCommuteKind::pent_phi_12_3_4: {
            int n = 3;
            E X = tgen(n, 1, 3) + tgen(n, 2, 3), Y = tgen(n, 3, 4);
            E Z = tgen(n, 1, 2);
            Series body =
                phi_commute_body(X, Y, Z, lam(-2), lgen(n, 1, 2, 3), E::zero(n), 1, N);
            Series phi = drinfeld_phi(X, Y, N);
            Series ez = exps(Z, lam(-2), N);
            return ModSeries(to_string(kind), std::move(body), series_mul(ez, phi),
                             series_mul(phi, ez));
        }
        default: { // pent_phi12_34
            int n = 3;
            E X = tgen(n, 1, 2), Y = tgen(n, 2, 3) + tgen(n, 2, 4);
            E Z = tgen(n, 3, 4);
            Series body =
                phi_commute_body(X, Y, Z, lam(2), E::zero(n), rgen(n, 2, 3, 4), -1, N);
            Series phi = drinfeld_phi(X, Y, N);
            Series ez = exps(Z, lam(2), N);
            return ModSeries(to_string(PhiCommuteKind::pent_phi12_34), std::move(body),
                             series_mul(phi, ez), series_mul(ez, phi));
        }
    }
}

ModSeries debar(int N) {
    const int n = 2;
    E t12 = tgen(n, 1, 2), t13 = tgen(n, 1, 3), t23 = tgen(n, 2, 3);
    E L = t12 + t13 + t23, tb = t13 - L;
    E lw = lgen(n, 1, 2, 3), lrw = lgen(n, 1, 2, 3) + rgen(n, 1, 2, 3);
    auto t12p = epowers(t12, N), tbp = epowers(tb, N);
    Series body(n, N);

    auto ad13 = [&](E v, int q) {
        for (int i = 0; i < q; ++i) v = mul(t13, v) - mul(v, t13);
        return v;
    };

    for (auto& [p, q] : phi_tuples(N)) {
        const int len = static_cast<int>(p.size());
        const int ap = sum(p), aq = sum(q);
        const int order = ap + aq;
        BoxIter jit(p);
        while (!jit.done) {
            const auto j = jit.j; // j_1..j_len
            Coeff zc = zeta_coeff(p, q, j);
            for (int l = 1; l <= len; ++l) {
                E middle(n); // sum over m of ad^{q_l-m-1}(BIG_m)
                for (int m = 0; m <= q[l - 1] - 1; ++m) {
                    // k_1..k_{l-1} range over 0..q_i, k_l over 0..m
                    std::vector<int> kb(q.begin(), q.begin() + l);
                    kb[l - 1] = m;
                    BoxIter kit(kb);
                    E big(n);
                    while (!kit.done) {
                        const auto& k = kit.j;
                        Rational coef = 1;
                        for (int i = 0; i < l - 1; ++i) {
                            coef *= Rational(binomial(q[i], k[i]));
                            if (k[i] % 2 == 1) coef = -coef;
                        }
                        coef *= Rational(binomial(m, k[l - 1]));
                        if (k[l - 1] % 2 == 1) coef = -coef;
                        int k0 = m - k[l - 1];
                        for (int i = 0; i < l - 1; ++i) k0 += q[i] - k[i];
                        auto jat = [&](int idx) { return idx == 0 ? 0 : j[idx - 1]; };
                        auto kat = [&](int idx) { return idx == 0 ? k0 : k[idx - 1]; };
                        E inner(n);
                        for (int nn = 0; nn <= l; ++nn) {
                            E pre = E::one(n), post = E::one(n);
                            for (int r = 0; r < nn; ++r)
                                pre = mul(pre, mul(t12p[jat(r)], tbp[kat(r)]));
                            for (int r = nn + 1; r <= l; ++r)
                                post = mul(post, mul(t12p[jat(r)], tbp[kat(r)]));
                            E bracket(n);
                            for (int r = 1; r <= kat(nn); ++r)
                                bracket += prodElems(
                                    {t12p[jat(nn)], tbp[r - 1], lrw, tbp[kat(nn) - r]});
                            for (int r = 1; r <= jat(nn); ++r)
                                bracket -= prodElems(
                                    {t12p[r - 1], lw, t12p[jat(nn) - r], tbp[kat(nn)]});
                            if (bracket.is_zero()) continue;
                            inner += mul(mul(pre, bracket), post);
                        }
                        big += inner.scaled(Coeff::rational(coef));
                        if (!kit.next()) break;
                    }
                    middle += ad13(big, q[l - 1] - m - 1);
                }
                // prefix operators ad^{q_i} r^{j_i} for i = l+1..len, innermost first
                E core = middle;
                for (int lev = l + 1; lev <= len; ++lev) {
                    core = mul(core, t12p[j[lev - 1]]);
                    core = ad13(core, q[lev - 1]);
                }
                core = mul(core, t12p[ap - sum(j)]);
                body.c[order] += core.scaled(zc);
            }
            if (!jit.next()) break;
        }
    }
    Series dom = drinfeld_phi(t12, t13, N);
    Series cod = drinfeld_phi(t12, tb, N);
    return ModSeries("debar", std::move(body), std::move(dom), std::move(cod));
}

ModSeries apply_strand_perm(const std::vector<int>& perm, const ModSeries& m,
                            const std::string& new_name) {
    StrandMap sm = StrandMap::permutation(m.body.n, perm);
    ModSeries r;
    r.name = new_name;
    r.body = apply_strand_map(sm, m.body);
    r.domain = apply_strand_map(sm, m.domain);
    r.codomain = apply_strand_map(sm, m.codomain);
    r.extra_boundary = apply_strand_map(sm, m.extra_boundary);
    return r;
}

ModSeries debar_reflected(int N) {
    ModSeries d = apply_strand_perm({3, 2, 1}, debar(N), "debar_reflected");
    // multiply by -1 and swap the ends (the reverse modification)
    d.body = -d.body;
    d.extra_boundary = -d.extra_boundary;
    std::swap(d.domain, d.codomain);
    return d;
}

ModSeries hexagonator(int N) {
    const int n = 2;
    E t12 = tgen(n, 1, 2), t13 = tgen(n, 1, 3), t23 = tgen(n, 2, 3);
    E L = t12 + t13 + t23, tb = t13 - L, t123c = t13 + t23;

    ModSeries m1 = bch_split(BchKind::hex_split_12_3, N);
    ModSeries m2 = phi_commute(PhiCommuteKind::hex_lambda, N);
    ModSeries m3 = debar(N);
    ModSeries m4 = debar_reflected(N);
    ModSeries m5 = bch_split(BchKind::hex_merge_13, N);

    Series phi_12_13 = drinfeld_phi(t12, t13, N);
    Series phi_23_12 = drinfeld_phi(t23, t12, N);
    Series phi_23_13 = drinfeld_phi(t23, t13, N);
    Series eL = exps(L, ipi(), N);
    Series e12m = exps(t12, ipi(-1), N);
    Series e23 = exps(t23, ipi(), N);
    Series ebar = exps(tb, ipi(), N);

    Series body = series_mul(series_mul(phi_12_13, m1.body) + series_mul(m2.body, e12m) +
                                 prod({eL, m3.body, e12m}),
                             phi_23_12) +
                  prod({eL, ebar, m4.body, e23}) + prod({m5.body, phi_23_13, e23});

    Series dom = prod({phi_12_13, exps(t123c, ipi(), N), phi_23_12});
    Series cod = prod({exps(t13, ipi(), N), phi_23_13, e23});
    return ModSeries("hexagonator_R", std::move(body), std::move(dom), std::move(cod));
}

ModSeries hexagonator_left(int N) {
    return apply_strand_perm({3, 2, 1}, hexagonator(N), "hexagonator_L");
}

ModSeries breen_element(int N) {
    const int n = 2;
    E t12 = tgen(n, 1, 2), t13 = tgen(n, 1, 3), t23 = tgen(n, 2, 3);
    E t123c = t13 + t23; // t_(12)3
    E t1c23 = t12 + t13; // t_1(23)

    ModSeries c12 = witnessed_exchange(ipi(), t12, ipi(), t123c, lgen(n, 1, 2, 3), N);
    ModSeries c23 = witnessed_exchange(ipi(), t23, ipi(), t1c23, rgen(n, 1, 2, 3), N);
    ModSeries R = hexagonator(N);
    ModSeries R213 = apply_strand_perm({2, 1, 3}, R, "R213");
    ModSeries R321 = apply_strand_perm({3, 2, 1}, R, "R321");
    ModSeries R231 = apply_strand_perm({2, 3, 1}, R, "R231");

    auto phi = [&](const E& x, const E& y) { return drinfeld_phi(x, y, N); };
    auto eip = [&](const E& x) { return exps(x, ipi(), N); };

    Series body =
        c12.body +
        series_mul(phi(t23, t12),
                   prod({R213.body, phi(t12, t13), eip(t12)}) -
                       prod({eip(t23), phi(t13, t23), R321.body}) +
                       series_mul(c23.body, phi(t12, t23))) +
        series_mul(prod({R231.body, phi(t23, t13), eip(t23)}) -
                       prod({eip(t12), phi(t13, t12), R.body}),
                   phi(t12, t23));

    return ModSeries("breen", std::move(body), Series::zero(n, N), Series::zero(n, N));
}

std::vector<SpanResidue> body_span_residues(const ModSeries& m, double mzv_tol) {
    std::vector<SpanResidue> out;
    const int n = m.body.n;
    for (int k = 0; k <= m.body.N; ++k) {
        SpanResidue r;
        r.order = k;
        const auto& e = m.body.c[k];
        if (e.is_zero()) {
            r.exact_zero = true;
            out.push_back(r);
            continue;
        }
        if (!e.deg0.empty()) throw mods_error("body_span_residues: body must be pure degm1");
        int d = k - 2;
        for (auto& [b, c] : e.degm1)
            if (b.adeg() != d) throw mods_error("body_span_residues: inhomogeneous body order");
        auto basis = graded_bmons(n, d);
        Echelon span = quotient_span(n, d, basis);
        std::map<BMon, size_t> index;
        for (size_t i = 0; i < basis.size(); ++i) index[basis[i]] = i;
        std::map<CoeffMonomial, QVec> comps;
        for (auto& [b, c] : e.degm1)
            for (auto& [mono, rat] : c.terms) {
                auto it = comps.find(mono);
                if (it == comps.end())
                    it = comps.emplace(mono, QVec(basis.size(), Rational(0))).first;
                it->second[index.at(b)] = rat;
            }
        ElementT<Coeff> residue(n);
        for (auto& [mono, vec] : comps) {
            QVec red = span_reduce(span, vec);
            for (size_t i = 0; i < red.size(); ++i)
                if (red[i] != 0) residue.add_degm1(basis[i], Coeff::monomial(mono, red[i]));
        }
        r.exact_zero = residue.is_zero();
        r.resid = r.exact_zero ? 0.0 : lambda_split_norm(residue, mzv_tol);
        out.push_back(r);
    }
    return out;
}

// ---------------------------------------------------------------------------
// pentagonator

PentagonAssembly pentagon_assembly(int N) {
    const int n = 3;
    E t12 = tgen(n, 1, 2), t13 = tgen(n, 1, 3), t23 = tgen(n, 2, 3);
    E t24 = tgen(n, 2, 4), t34 = tgen(n, 3, 4);
    E t1_23 = t12 + t13, t23_4 = t24 + t34, t12_3 = t13 + t23, t2_34 = t23 + t24;
    E L123 = t12 + t13 + t23, L234 = t23 + t24 + t34;

    auto eps = [&](const E& x, long s) { return exps(x, lam(s), N); };
    auto phi = [&](const E& x, const E& y) { return drinfeld_phi(x, y, N); };

    Series phi234 = phi(t23, t34), phi123 = phi(t12, t23);
    Series phi1_23_4 = phi(t1_23, t23_4);
    Series phi12_34 = phi(t12, t2_34), phi_12_34 = phi(t12_3, t34);

    // congruence swaps
    ModSeries Ta = witnessed_exchange(lam(), t23_4, lam(-1), t23, -lgen(n, 2, 3, 4), N);
    ModSeries Tb = witnessed_exchange(lam(), t23, lam(-1), t1_23, rgen(n, 1, 2, 3), N);
    ModSeries Tj = witnessed_exchange(lam(-1), t34, lam(), t2_34, rgen(n, 2, 3, 4), N);
    ModSeries Tk = witnessed_exchange(lam(-1), t12, lam(-1), t12_3, lgen(n, 1, 2, 3), N);
    // exponential splits and merges
    ModSeries Tc = bch_split(BchKind::eps_split_23_4, N);
    ModSeries Td = bch_split(BchKind::eps_split_1_23, N);
    ModSeries Tl = bch_split(BchKind::eps_merge_2_34, N);
    ModSeries Tm = bch_split(BchKind::eps_merge_12_3, N);
    // associator commutations
    ModSeries Te = phi_commute(PhiCommuteKind::pent_phi234, N);
    ModSeries Tf = phi_commute(PhiCommuteKind::pent_phi1_23_4, N);
    ModSeries Tg = phi_commute(PhiCommuteKind::pent_phi123, N);
    ModSeries Th = phi_commute(PhiCommuteKind::pent_phi_12_3_4, N);
    ModSeries Ti = phi_commute(PhiCommuteKind::pent_phi12_34, N);

    PentagonAssembly A;
    A.N = N;

    // M1..M3 whiskers, inside the later conjugation by eps^{-L234} .. eps^{L123}
    Series pre_m3 =
        prod({phi234,
              series_mul(Ta.body, prod({phi1_23_4, eps(t23, 1), eps(t1_23, -1)})) +
                  series_mul(prod({eps(t23, -1), eps(t23_4, 1), phi1_23_4}), Tb.body) +
                  series_mul(Tc.body,
                             prod({eps(t23, -1), phi1_23_4, eps(t23, 1), eps(t1_23, -1)})) +
                  series_mul(prod({eps(L234, 1), eps(t23, -2), phi1_23_4, eps(t23, 1)}),
                             Td.body),
              phi123}) +
        prod({eps(L234, 1), phi234, phi1_23_4, Tg.body}) +
        series_mul(series_mul(Te.body, phi1_23_4) +
                       prod({phi234, eps(L234, 1), eps(t23, -2), Tf.body}),
                   series_mul(eps(L123, -1), phi123));

    A.m0_pre = eps(L234, -1);
    A.m0_post = eps(L123, 1);

    Series chain = prod({A.m0_pre, pre_m3, A.m0_post});

    // M5 whiskers
    Series pre5 = prod({eps(L234, -1), eps(t34, -1), eps(t2_34, 1)});
    Series suf5 = prod({eps(t12_3, -1), eps(t12, 1), eps(L123, 1)});
    chain += series_mul(
        series_mul(pre5, series_mul(prod({phi12_34, eps(t34, 2)}), Th.body) +
                             series_mul(Ti.body, series_mul(phi_12_34, eps(t12, -2)))),
        suf5);

    // M6 whiskers (with the eps^{t12} factor the telescoping requires)
    chain += prod({eps(L234, -1), Tj.body, eps(t34, 2), phi12_34, phi_12_34, eps(t12, -2),
                   eps(t12_3, -1), eps(t12, 1), eps(L123, 1)});
    chain += prod({eps(L234, -1), eps(t2_34, 1), eps(t34, 1), phi12_34, phi_12_34,
                   eps(t12, -1), Tk.body, eps(t12, 1), eps(L123, 1)});

    // final merges (no duplicated eps^{-L234} prefix)
    chain += prod({Tl.body, eps(t2_34, 1), eps(t34, 1), phi12_34, phi_12_34, eps(t12, -1),
                   eps(t12_3, -1), eps(L123, 1)});
    chain += prod({phi12_34, phi_12_34, eps(t12, -1), eps(t12_3, -1), Tm.body});

    A.chain_body = std::move(chain);

    A.dom0 = prod({phi234, eps(t23, -1), eps(t23_4, 1), phi1_23_4, eps(t1_23, -1), eps(t23, 1),
                   phi123});
    A.cod0 = prod({eps(t34, -1), eps(t2_34, 1), phi12_34, eps(t12, -2), eps(t34, 2), phi_12_34,
                   eps(t12_3, -1), eps(t12, 1)});

    A.domain = prod({phi234, phi1_23_4, phi123});
    A.codomain = series_mul(phi12_34, phi_12_34);
    return A;
}

ModSeries pentagon_m0_formal(int N) {
    PentagonAssembly A = pentagon_assembly(N);
    ModSeries m0("m0_formal", Series::zero(3, N), A.dom0, A.cod0);
    m0.extra_boundary = A.dom0 - A.cod0;
    return m0;
}

ElementT<Coeff> pentagon_m0_order2() {
    PentagonAssembly A = pentagon_assembly(2);
    Series diff = A.dom0 - A.cod0;
    if (!diff.c[0].is_zero() || !diff.c[1].is_zero())
        throw mods_error("pentagon m0: declared boundary does not start at hbar^2");
    const int n = 3;
    auto gens = all_bgens(n);
    auto words = graded_awords(n, 2);
    std::map<AWord, size_t> windex;
    for (size_t i = 0; i < words.size(); ++i) windex[words[i]] = i;
    QMatrix M(words.size(), gens.size());
    for (size_t c = 0; c < gens.size(); ++c) {
        ElementT<Rational> g =
            ElementT<Rational>::bgen_elem(n, gens[c].kind, gens[c].i, gens[c].j, gens[c].k);
        for (auto& [w, coef] : boundary(g).deg0) M.a[windex.at(w)][c] = coef;
    }
    std::map<CoeffMonomial, QVec> rhs;
    for (auto& [w, c] : diff.c[2].deg0)
        for (auto& [mono, rat] : c.terms) {
            auto it = rhs.find(mono);
            if (it == rhs.end()) it = rhs.emplace(mono, QVec(words.size(), Rational(0))).first;
            it->second[windex.at(w)] = rat;
        }
    ElementT<Coeff> solved(n);
    for (auto& [mono, b] : rhs) {
        QMatrix aug(M.rows, M.cols + 1);
        for (size_t i = 0; i < M.rows; ++i) {
            aug.a[i] = M.a[i];
            aug.a[i].push_back(b[i]);
        }
        Echelon e = echelonize(std::move(aug));
        QVec x(M.cols, Rational(0));
        for (size_t i = 0; i < e.rank; ++i) {
            if (e.pivot_col[i] == M.cols)
                throw mods_error("pentagon m0: declared boundary not in the image of d "
                                 "(hbar^2-level discrepancy)");
            x[e.pivot_col[i]] = e.rref.a[i][M.cols];
        }
        for (size_t c = 0; c < gens.size(); ++c)
            if (x[c] != 0) solved.add_degm1(BMon{{}, gens[c], {}}, Coeff::monomial(mono, x[c]));
    }
    return solved;
}

ModSeries pentagon_m0_solved(int N) {
    if (N > 2) throw mods_error("pentagon m0 (solved) supports N <= 2");
    PentagonAssembly A = pentagon_assembly(N);
    ModSeries m0("m0_solved", Series::zero(3, N), A.dom0, A.cod0);
    if (N >= 2) m0.body.c[2] = pentagon_m0_order2();
    return m0;
}

ModSeries pentagonator(int N, const ModSeries& m0) {
    PentagonAssembly A = pentagon_assembly(N);
    if (!(m0.domain == A.dom0) || !(m0.codomain == A.cod0))
        throw mods_error("pentagonator: supplied m0 has the wrong contract");
    ModSeries pi("pentagonator", A.chain_body + prod({A.m0_pre, m0.body, A.m0_post}), A.domain,
                 A.codomain);
    pi.extra_boundary = prod({A.m0_pre, m0.extra_boundary, A.m0_post});
    return pi;
}

} // namespace dk2
