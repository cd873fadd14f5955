#include "dk2/mzv.hpp"

#include <cassert>
#include <cmath>
#include <map>
#include <mutex>
#include <vector>

namespace dk2 {

namespace {

// iterated-integral word of the index: each entry s contributes 0^{s-1} 1
std::vector<int> index_word(const MZVIndex& idx) {
    std::vector<int> w;
    for (int s : idx.entries) {
        for (int i = 0; i < s - 1; ++i) w.push_back(0);
        w.push_back(1);
    }
    return w;
}

// composition (a1,...,ad) read back from a word ending in 1
std::vector<int> word_blocks(const std::vector<int>& w) {
    std::vector<int> a;
    int zeros = 0;
    for (int c : w) {
        if (c == 0) {
            ++zeros;
        } else {
            a.push_back(zeros + 1);
            zeros = 0;
        }
    }
    assert(zeros == 0);
    return a;
}

struct PieceVal {
    double value;
    double bound;
};

// Li_{a1,...,ad}(1/2) = sum_{n1>...>nd>=1} 2^{-n1} / prod n_i^{a_i},
// truncated at n1 <= M with tail <= 4 * 2^{-(M+1)} (M+1)^{d-1}
// (integral/ratio bound; the summand decays by a factor <= 3/4 per step
// once n >= 4d, which M >= 64 guarantees for weights at desk scale).
PieceVal polylog_half(const std::vector<int>& a, double tol) {
    if (a.empty()) return {1.0, 0.0};
    const int d = static_cast<int>(a.size());
    auto tail = [&](long m) {
        return 4.0 * std::pow(0.5, static_cast<double>(m + 1)) *
               std::pow(static_cast<double>(m + 1), static_cast<double>(d - 1));
    };
    long M = 64;
    while (tail(M) > tol && M < (1L << 14)) M *= 2;

    // inner[m] = J_t(m), built from the innermost block outward
    std::vector<double> inner(static_cast<size_t>(M) + 1, 1.0);
    for (int t = d - 1; t >= 1; --t) {
        std::vector<double> next(static_cast<size_t>(M) + 1, 0.0);
        double acc = 0.0;
        for (long v = 1; v <= M; ++v) {
            acc += std::pow(static_cast<double>(v), -static_cast<double>(a[t])) *
                   inner[static_cast<size_t>(v - 1)];
            next[static_cast<size_t>(v)] = acc;
        }
        inner = std::move(next);
    }
    double value = 0.0;
    double x = 1.0;
    for (long n = 1; n <= M; ++n) {
        x *= 0.5;
        value += x * std::pow(static_cast<double>(n), -static_cast<double>(a[0])) *
                 inner[static_cast<size_t>(n - 1)];
    }
    return {value, tail(M) + 5e-15};
}

PieceVal eval_word_piece(const std::vector<int>& w, double tol) {
    if (w.empty()) return {1.0, 0.0};
    return polylog_half(word_blocks(w), tol);
}

// Hoelder convolution at 1/2: the [1/2,1] half of the iterated integral
// becomes a [0,1/2] integral of the reversed, letter-flipped word.
PieceVal mzv_compute(const MZVIndex& idx, double tol) {
    const std::vector<int> w = index_word(idx);
    const int n = static_cast<int>(w.size());
    const double piece_tol = tol / (4.0 * (n + 1));
    double value = 0.0, bound = 0.0;
    for (int j = 0; j <= n; ++j) {
        std::vector<int> suffix(w.begin() + j, w.end());
        std::vector<int> prefix_dual;
        prefix_dual.reserve(j);
        for (int i = j - 1; i >= 0; --i) prefix_dual.push_back(1 - w[i]);
        PieceVal A = eval_word_piece(suffix, piece_tol);
        PieceVal B = eval_word_piece(prefix_dual, piece_tol);
        value += A.value * B.value;
        bound += A.bound * std::abs(B.value) + B.bound * std::abs(A.value) + A.bound * B.bound;
    }
    bound += 1e-15 * (n + 2);
    return {value, bound};
}

std::mutex memo_mutex;
std::map<MZVIndex, PieceVal> memo;

} // namespace

std::pair<double, double> mzv_eval_with_bound(const MZVIndex& idx, double tol) {
    if (!idx.admissible())
        throw mzv_divergence_error("mzv_eval: index is not admissible (needs s1 >= 2)");
    if (!(tol > 0)) throw coeff_error("mzv_eval: tol must be positive");
    if (tol < 1e-13)
        throw coeff_error("mzv_eval: tol below double-precision certification floor");
    {
        std::lock_guard<std::mutex> lock(memo_mutex);
        auto it = memo.find(idx);
        if (it != memo.end() && it->second.bound <= tol)
            return {it->second.value, it->second.bound};
    }
    // always computed at 1e-13 so the cached value is call-order independent
    PieceVal v = mzv_compute(idx, std::min(tol, 1e-13));
    {
        std::lock_guard<std::mutex> lock(memo_mutex);
        memo[idx] = v;
    }
    return {v.value, v.bound};
}

double mzv_eval(const MZVIndex& idx, double tol) {
    return mzv_eval_with_bound(idx, tol).first;
}

std::pair<double, double> mzv_direct_sum(const MZVIndex& idx, long cutoff) {
    if (!idx.admissible())
        throw mzv_divergence_error("mzv_direct_sum: index is not admissible");
    assert(cutoff >= 64);
    const auto& s = idx.entries;
    const int k = static_cast<int>(s.size());

    std::vector<double> inner(static_cast<size_t>(cutoff) + 1, 1.0);
    for (int t = k - 1; t >= 1; --t) {
        std::vector<double> next(static_cast<size_t>(cutoff) + 1, 0.0);
        double acc = 0.0;
        for (long v = 1; v <= cutoff; ++v) {
            acc += std::pow(static_cast<double>(v), -static_cast<double>(s[t])) *
                   inner[static_cast<size_t>(v - 1)];
            next[static_cast<size_t>(v)] = acc;
        }
        inner = std::move(next);
    }
    double value = 0.0;
    for (long n = 1; n <= cutoff; ++n)
        value += std::pow(static_cast<double>(n), -static_cast<double>(s[0])) *
                 inner[static_cast<size_t>(n - 1)];

    // tail <= P * int_M^infty x^{-s1} (1+ln x)^j dx  with the inner depth-j
    // harmonic factors bounded by (1+ln x)^j and the rest by zeta upper bounds
    int jlog = 0;
    double P = 1.0;
    for (int i = 1; i < k; ++i) {
        if (s[i] == 1)
            ++jlog;
        else
            P *= 1.0 + std::pow(2.0, -s[i]) + std::pow(2.0, 1.0 - s[i]) / (s[i] - 1);
    }
    const double M = static_cast<double>(cutoff);
    const double s1 = static_cast<double>(s[0]);
    double integral = std::pow(M, 1.0 - s1) / (s1 - 1.0); // I_0
    for (int t = 1; t <= jlog; ++t)
        integral = std::pow(M, 1.0 - s1) * std::pow(1.0 + std::log(M), t) / (s1 - 1.0) +
                   t / (s1 - 1.0) * integral;
    return {value, P * integral};
}

} // namespace dk2
