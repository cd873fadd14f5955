#pragma once

#include "dk2/algebra.hpp"

namespace dk2 {

// hbar-truncated formal power series over Elements; c[m] is the hbar^m
// coefficient, 0 <= m <= N
template <class K>
struct SeriesT {
    int N = 0;
    int n = 0;
    std::vector<ElementT<K>> c;

    SeriesT() = default;
    SeriesT(int ambient, int order) : N(order), n(ambient) {
        c.assign(static_cast<size_t>(order) + 1, ElementT<K>(ambient));
    }
    static SeriesT zero(int n, int N) { return SeriesT(n, N); }
    static SeriesT one(int n, int N) {
        SeriesT s(n, N);
        s.c[0] = ElementT<K>::one(n);
        return s;
    }
    static SeriesT from_element(const ElementT<K>& e, int order_of_e, int N) {
        SeriesT s(e.n, N);
        if (order_of_e <= N) s.c[static_cast<size_t>(order_of_e)] = e;
        return s;
    }

    bool is_zero() const {
        for (auto& e : c)
            if (!e.is_zero()) return false;
        return true;
    }
    SeriesT& operator+=(const SeriesT& o) {
        if (N != o.N || n != o.n) throw dkalg_error("series mismatch in +=");
        for (int m = 0; m <= N; ++m) c[m] += o.c[m];
        return *this;
    }
    SeriesT operator+(const SeriesT& o) const {
        SeriesT r = *this;
        r += o;
        return r;
    }
    SeriesT operator-() const {
        SeriesT r = *this;
        for (auto& e : r.c) e = -e;
        return r;
    }
    SeriesT operator-(const SeriesT& o) const { return *this + (-o); }
    SeriesT& operator-=(const SeriesT& o) {
        *this += -o;
        return *this;
    }
    bool operator==(const SeriesT& o) const { return N == o.N && n == o.n && c == o.c; }
};

bool parallel_enabled();
void set_parallel(bool on);

// Cauchy product; coefficients at distinct orders computed independently
template <class K>
SeriesT<K> series_mul(const SeriesT<K>& x, const SeriesT<K>& y) {
    if (x.N != y.N || x.n != y.n) throw dkalg_error("series mismatch in series_mul");
    SeriesT<K> r(x.n, x.N);
    const bool par = parallel_enabled();
#pragma omp parallel for schedule(dynamic) if (par)
    for (int m = 0; m <= x.N; ++m) {
        ElementT<K> acc(x.n);
        for (int i = 0; i <= m; ++i) acc += mul(x.c[i], y.c[m - i]);
        r.c[m] = std::move(acc);
    }
    return r;
}

template <class K>
SeriesT<K> series_mul(const SeriesT<K>& x, const SeriesT<K>& y, const SeriesT<K>& z) {
    return series_mul(series_mul(x, y), z);
}

// exp(scale * hbar * x) for degree-0 x: sum scale^m x^m / m!
template <class K>
SeriesT<K> series_exp(const ElementT<K>& x, const K& scale, int N) {
    if (!x.pure_deg0()) throw dkalg_error("series_exp: element must be pure degree 0");
    SeriesT<K> r(x.n, N);
    ElementT<K> pw = ElementT<K>::one(x.n);
    K sc = Ring<K>::from_int(1);
    for (int m = 0; m <= N; ++m) {
        r.c[m] = pw.scaled(K(sc * Ring<K>::from_rational(Rational(1) / Rational(factorial(m)))));
        if (m < N) {
            pw = mul(pw, x);
            sc = K(sc * scale);
        }
    }
    return r;
}

template <class K>
SeriesT<K> boundary(const SeriesT<K>& s) {
    SeriesT<K> r(s.n, s.N);
    for (int m = 0; m <= s.N; ++m) r.c[m] = boundary(s.c[m]);
    return r;
}

template <class K>
SeriesT<K> apply_strand_map(const StrandMap& sm, const SeriesT<K>& s) {
    SeriesT<K> r(sm.dst_n, s.N);
    for (int m = 0; m <= s.N; ++m) r.c[m] = cabling(sm, s.c[m]);
    return r;
}

using Series = SeriesT<Coeff>;
using NumSeries = SeriesT<std::complex<double>>;

inline NumSeries to_numeric(const Series& s, std::optional<double> eps, double mzv_tol = 1e-10) {
    NumSeries r(s.n, s.N);
    for (int m = 0; m <= s.N; ++m) r.c[m] = to_numeric(s.c[m], eps, mzv_tol);
    return r;
}

inline double max_abs(const NumSeries& s) {
    double m = 0.0;
    for (auto& e : s.c) m = std::max(m, max_abs(e));
    return m;
}

enum class PhiVariant { direct, compactA, compactB };

PhiVariant phi_variant_from_string(const std::string& s);
std::string to_string(PhiVariant v);

// Drinfeld's KZ associator series on degree-0 elements x, y, truncated at
// hbar^N; the three variants are independent implementations of equivalent
// closed forms and agree term by term.
Series drinfeld_phi(const ElementT<Coeff>& x, const ElementT<Coeff>& y, int N,
                    PhiVariant variant = PhiVariant::direct);

// tuple pairs (p, q) with equal length, positive entries, |p|+|q| <= N,
// ordered lexicographically on (|p|+|q|, length, p, q)
std::vector<std::pair<std::vector<int>, std::vector<int>>> phi_tuples(int N);

// max absolute coefficient of LHS - RHS of the functional identity
//   Phi(A,-A-B) e^{-i pi hbar A} Phi(B,A)
//     = e^{-i pi hbar (A+B)} Phi(B,-A-B) e^{i pi hbar B}
// on two free letters, evaluated numerically through order N
double brw_residual(int N, double mzv_tol = 1e-10);

// per-order dump, keys h^0 .. h^N
std::string series_str(const Series& s);

} // namespace dk2
