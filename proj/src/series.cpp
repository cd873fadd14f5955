#include "dk2/series.hpp"

#include <atomic>
#include <sstream>

namespace dk2 {

namespace {
std::atomic<bool> g_parallel{true};
}

bool parallel_enabled() { return g_parallel.load(std::memory_order_relaxed); }
void set_parallel(bool on) { g_parallel.store(on, std::memory_order_relaxed); }

PhiVariant phi_variant_from_string(const std::string& s) {
    if (s == "direct") return PhiVariant::direct;
    if (s == "compactA") return PhiVariant::compactA;
    if (s == "compactB") return PhiVariant::compactB;
    throw dkalg_error("unknown phi variant: " + s);
}

std::string to_string(PhiVariant v) {
    switch (v) {
        case PhiVariant::direct: return "direct";
        case PhiVariant::compactA: return "compactA";
        default: return "compactB";
    }
}

namespace {

void compositions(int total, int parts, std::vector<int>& cur,
                  std::vector<std::vector<int>>& out) {
    if (parts == 1) {
        if (total >= 1) {
            cur.push_back(total);
            out.push_back(cur);
            cur.pop_back();
        }
        return;
    }
    for (int first = 1; first + (parts - 1) <= total; ++first) {
        cur.push_back(first);
        compositions(total - first, parts - 1, cur, out);
        cur.pop_back();
    }
}

std::vector<std::vector<int>> compositions_of(int total, int parts) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    if (parts >= 1 && total >= parts) compositions(total, parts, cur, out);
    return out;
}

// iterate all 0 <= j <= bound componentwise
struct BoxIter {
    const std::vector<int>& bound;
    std::vector<int> j;
    bool done = false;
    explicit BoxIter(const std::vector<int>& b) : bound(b), j(b.size(), 0) {}
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

int sum(const std::vector<int>& v) {
    int s = 0;
    for (int x : v) s += x;
    return s;
}

using E = ElementT<Coeff>;

std::vector<E> powers(const E& x, int N) {
    std::vector<E> t;
    t.push_back(E::one(x.n));
    for (int k = 1; k <= N; ++k) t.push_back(mul(t.back(), x));
    return t;
}

} // namespace

std::vector<std::pair<std::vector<int>, std::vector<int>>> phi_tuples(int N) {
    std::vector<std::pair<std::vector<int>, std::vector<int>>> out;
    for (int w = 2; w <= N; ++w)
        for (int len = 1; 2 * len <= w; ++len)
            for (int sp = len; sp <= w - len; ++sp)
                for (auto& p : compositions_of(sp, len))
                    for (auto& q : compositions_of(w - sp, len)) out.emplace_back(p, q);
    return out;
}

Series drinfeld_phi(const E& x, const E& y, int N, PhiVariant variant) {
    if (!x.pure_deg0() || !y.pure_deg0())
        throw dkalg_error("drinfeld_phi: arguments must be pure degree 0");
    if (x.n != y.n) throw dkalg_error("drinfeld_phi: ambient mismatch");
    const int n = x.n;
    Series s = Series::one(n, N);
    if (N < 2) return s;

    std::vector<E> xp = powers(x, N), yp = powers(y, N);
    auto tuples = phi_tuples(N);

    std::vector<E> partial(tuples.size(), E(n));
    const bool par = parallel_enabled();
#pragma omp parallel for schedule(dynamic) if (par)
    for (long ti = 0; ti < static_cast<long>(tuples.size()); ++ti) {
        const auto& [p, q] = tuples[static_cast<size_t>(ti)];
        const int len = static_cast<int>(p.size());
        const int ap = sum(p), aq = sum(q);
        E acc(n);
        if (variant == PhiVariant::compactB) {
            // sum_j zeta_j^{p,q} (ad_B^{q_len} r_A^{j_len} ... ad_B^{q_1} r_A^{j_1})(1) A^{|p|-|j|}
            BoxIter jit(p);
            while (!jit.done) {
                const auto& j = jit.j;
                E v = E::one(n);
                for (int l = 0; l < len; ++l) {
                    v = mul(v, xp[j[l]]); // r_A^{j_l}
                    for (int t = 0; t < q[l]; ++t) v = mul(y, v) - mul(v, y); // ad_B^{q_l}
                }
                acc += mul(v, xp[ap - sum(j)]).scaled(zeta_coeff(p, q, j));
                if (!jit.next()) break;
            }
        } else {
            BoxIter jit(p);
            while (!jit.done) {
                const auto& j = jit.j;
                BoxIter kit(q);
                while (!kit.done) {
                    const auto& k = kit.j;
                    E word(n);
                    if (variant == PhiVariant::direct) {
                        // B^{|q|-|k|} A^{j_1} B^{k_1} ... A^{j_len} B^{k_len} A^{|p|-|j|}
                        word = yp[aq - sum(k)];
                        for (int l = 0; l < len; ++l) word = mul(mul(word, xp[j[l]]), yp[k[l]]);
                        word = mul(word, xp[ap - sum(j)]);
                    } else {
                        // prod_{l=0}^{len+1} A^{j_l} B^{k_l}, compact index conventions
                        word = E::one(n);
                        for (int l = 0; l <= len + 1; ++l) {
                            int jl = (l == 0) ? 0 : (l == len + 1 ? ap - sum(j) : j[l - 1]);
                            int kl = (l == 0) ? aq - sum(k) : (l == len + 1 ? 0 : k[l - 1]);
                            word = mul(mul(word, xp[jl]), yp[kl]);
                        }
                    }
                    acc += word.scaled(zeta_coeff_full(p, q, j, k));
                    if (!kit.next()) break;
                }
                if (!jit.next()) break;
            }
        }
        partial[static_cast<size_t>(ti)] = std::move(acc);
    }
    for (size_t ti = 0; ti < tuples.size(); ++ti) {
        int w = sum(tuples[ti].first) + sum(tuples[ti].second);
        s.c[w] += partial[ti];
    }
    return s;
}

double brw_residual(int N, double mzv_tol) {
    const int n = 2;
    E A = E::agen_elem(n, 1, 2), B = E::agen_elem(n, 2, 3);
    Coeff ipi = Coeff::ipi(1);
    Series lhs = series_mul(drinfeld_phi(A, -A - B, N), series_exp(A, -ipi, N),
                            drinfeld_phi(B, A, N));
    Series rhs = series_mul(series_exp(A + B, -ipi, N), drinfeld_phi(B, -A - B, N),
                            series_exp(B, ipi, N));
    return max_abs(to_numeric(lhs - rhs, std::nullopt, mzv_tol));
}

std::string series_str(const Series& s) {
    std::ostringstream os;
    for (int m = 0; m <= s.N; ++m) os << "h^" << m << ": " << element_str(s.c[m]) << "\n";
    return os.str();
}

} // namespace dk2
