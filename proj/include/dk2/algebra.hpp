#pragma once

#include <algorithm>
#include <cassert>
#include <complex>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "dk2/coeff.hpp"

namespace dk2 {

struct dkalg_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct overflow_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// generators

// degree-0 generator a_{ij}, stored with i < j (t is symmetric)
struct AGen {
    int i = 0, j = 0;
    auto operator<=>(const AGen&) const = default;
};

inline AGen agen(int i, int j) {
    if (i == j) throw dkalg_error("agen: indices must be distinct");
    if (i > j) std::swap(i, j);
    if (i < 1) throw dkalg_error("agen: indices must be >= 1");
    return AGen{i, j};
}

enum class BKind { ell, r };

// degree-(-1) generator l_{ijk} / r_{ijk}, strictly increasing indices
struct BGen {
    int i = 0, j = 0, k = 0;
    BKind kind = BKind::ell;
    auto operator<=>(const BGen&) const = default;

    bool touches(const AGen& a) const {
        return a.i == i || a.i == j || a.i == k || a.j == i || a.j == j || a.j == k;
    }
};

inline BGen bgen(BKind kind, int i, int j, int k) {
    if (!(1 <= i && i < j && j < k)) throw dkalg_error("bgen: need 1 <= i < j < k");
    return BGen{i, j, k, kind};
}

inline bool disjoint(const AGen& a, const AGen& b) {
    return a.i != b.i && a.i != b.j && a.j != b.i && a.j != b.j;
}

// ---------------------------------------------------------------------------
// trace normal form
//
// Words are normalized to the lexicographically least representative of their
// commutation class: disjoint-index a-letters commute (relation family (ii)),
// and an a-letter disjoint from a b-generator's triple commutes across it
// (family (iii)).  The b-generator ranks below every a-letter, so movable
// a-letters end up on its right.

struct AWord {
    std::vector<AGen> letters;
    auto operator<=>(const AWord&) const = default;
    int size() const { return static_cast<int>(letters.size()); }
    bool empty() const { return letters.empty(); }
};

struct BMon {
    AWord left;
    BGen gen;
    AWord right;
    auto operator<=>(const BMon&) const = default;
    int adeg() const { return left.size() + right.size(); }
};

namespace detail {

struct TraceLetter {
    bool is_b = false;
    AGen a{};
    BGen b{};
};

inline bool letters_commute(const TraceLetter& x, const TraceLetter& y) {
    if (x.is_b && y.is_b) return false;
    if (x.is_b) return !x.b.touches(y.a);
    if (y.is_b) return !y.b.touches(x.a);
    return disjoint(x.a, y.a);
}

// b ranks first, then a-letters in lex order
inline bool letter_less(const TraceLetter& x, const TraceLetter& y) {
    if (x.is_b != y.is_b) return x.is_b;
    if (x.is_b) return x.b < y.b;
    return x.a < y.a;
}

inline std::vector<TraceLetter> trace_normalize(std::vector<TraceLetter> in) {
    std::vector<TraceLetter> out;
    out.reserve(in.size());
    while (!in.empty()) {
        size_t best = in.size();
        for (size_t p = 0; p < in.size(); ++p) {
            bool initial = true;
            for (size_t q = 0; q < p && initial; ++q)
                initial = letters_commute(in[q], in[p]);
            if (initial && (best == in.size() || letter_less(in[p], in[best]))) best = p;
        }
        out.push_back(in[best]);
        in.erase(in.begin() + static_cast<long>(best));
    }
    return out;
}

} // namespace detail

inline void check_index_range(int idx, int n, const char* what) {
    if (idx < 1 || idx > n + 1) throw dkalg_error(std::string(what) + ": strand index out of range");
}

inline AWord aword_normalize(std::vector<AGen> seq, int n) {
    std::vector<detail::TraceLetter> ls;
    ls.reserve(seq.size());
    for (auto& a : seq) {
        check_index_range(a.i, n, "aword_normalize");
        check_index_range(a.j, n, "aword_normalize");
        ls.push_back({false, a, {}});
    }
    ls = detail::trace_normalize(std::move(ls));
    AWord w;
    for (auto& l : ls) w.letters.push_back(l.a);
    return w;
}

inline BMon bmon_normalize(std::vector<AGen> left, const BGen& g, std::vector<AGen> right, int n) {
    check_index_range(g.k, n, "bmon_normalize");
    std::vector<detail::TraceLetter> ls;
    for (auto& a : left) {
        check_index_range(a.j, n, "bmon_normalize");
        ls.push_back({false, a, {}});
    }
    ls.push_back({true, {}, g});
    for (auto& a : right) {
        check_index_range(a.j, n, "bmon_normalize");
        ls.push_back({false, a, {}});
    }
    ls = detail::trace_normalize(std::move(ls));
    BMon m;
    m.gen = g;
    bool seen_b = false;
    for (auto& l : ls) {
        if (l.is_b)
            seen_b = true;
        else if (seen_b)
            m.right.letters.push_back(l.a);
        else
            m.left.letters.push_back(l.a);
    }
    return m;
}

inline int weight(const AWord& w) { return w.size(); }
inline int weight(const BMon& m) { return m.adeg() + 2; }

// ---------------------------------------------------------------------------
// coefficient-ring glue

template <class K>
struct Ring;

template <>
struct Ring<Rational> {
    static Rational from_int(long v) { return Rational(v); }
    static Rational from_rational(const Rational& r) { return r; }
    static bool is_zero(const Rational& r) { return r == 0; }
};

template <>
struct Ring<Coeff> {
    static Coeff from_int(long v) { return Coeff::from_int(v); }
    static Coeff from_rational(const Rational& r) { return Coeff::rational(r); }
    static bool is_zero(const Coeff& c) { return c.is_zero(); }
};

template <>
struct Ring<std::complex<double>> {
    static std::complex<double> from_int(long v) { return {static_cast<double>(v), 0.0}; }
    static std::complex<double> from_rational(const Rational& r) { return {to_double(r), 0.0}; }
    static bool is_zero(const std::complex<double>& z) {
        return z.real() == 0.0 && z.imag() == 0.0;
    }
};

// ---------------------------------------------------------------------------
// elements

// degree-graded element of the n-th Drinfeld-Kohno 2-algebra (free model)
template <class K>
struct ElementT {
    int n = 0;
    std::map<AWord, K> deg0;
    std::map<BMon, K> degm1;

    ElementT() = default;
    explicit ElementT(int ambient) : n(ambient) {}

    static ElementT zero(int n) { return ElementT(n); }
    static ElementT one(int n) {
        ElementT e(n);
        e.deg0[AWord{}] = Ring<K>::from_int(1);
        return e;
    }
    static ElementT agen_elem(int n, int i, int j) {
        ElementT e(n);
        AGen a = agen(i, j);
        check_index_range(a.j, n, "agen_elem");
        e.deg0[AWord{{a}}] = Ring<K>::from_int(1);
        return e;
    }
    static ElementT bgen_elem(int n, BKind kind, int i, int j, int k) {
        ElementT e(n);
        BGen g = bgen(kind, i, j, k);
        check_index_range(g.k, n, "bgen_elem");
        e.degm1[BMon{{}, g, {}}] = Ring<K>::from_int(1);
        return e;
    }

    bool is_zero() const { return deg0.empty() && degm1.empty(); }
    bool pure_deg0() const { return degm1.empty(); }
    bool pure_degm1() const { return deg0.empty(); }

    void add_deg0(const AWord& w, const K& c) {
        if (Ring<K>::is_zero(c)) return;
        auto it = deg0.find(w);
        if (it == deg0.end()) {
            deg0.emplace(w, c);
        } else {
            it->second += c;
            if (Ring<K>::is_zero(it->second)) deg0.erase(it);
        }
    }
    void add_degm1(const BMon& m, const K& c) {
        if (Ring<K>::is_zero(c)) return;
        auto it = degm1.find(m);
        if (it == degm1.end()) {
            degm1.emplace(m, c);
        } else {
            it->second += c;
            if (Ring<K>::is_zero(it->second)) degm1.erase(it);
        }
    }

    ElementT& operator+=(const ElementT& o) {
        if (n != o.n) throw dkalg_error("ambient mismatch in +=");
        for (auto& [w, c] : o.deg0) add_deg0(w, c);
        for (auto& [m, c] : o.degm1) add_degm1(m, c);
        return *this;
    }
    ElementT operator+(const ElementT& o) const {
        ElementT r = *this;
        r += o;
        return r;
    }
    ElementT operator-() const {
        ElementT r(n);
        for (auto& [w, c] : deg0) r.deg0.emplace(w, K(-c));
        for (auto& [m, c] : degm1) r.degm1.emplace(m, K(-c));
        return r;
    }
    ElementT operator-(const ElementT& o) const { return *this + (-o); }
    ElementT& operator-=(const ElementT& o) {
        *this += -o;
        return *this;
    }
    ElementT scaled(const K& k) const {
        ElementT r(n);
        for (auto& [w, c] : deg0) r.add_deg0(w, K(c * k));
        for (auto& [m, c] : degm1) r.add_degm1(m, K(c * k));
        return r;
    }
    bool operator==(const ElementT& o) const {
        return n == o.n && deg0 == o.deg0 && degm1 == o.degm1;
    }
};

template <class K>
ElementT<K> boundary(const ElementT<K>& x);

namespace detail {

// word expansion of the boundary of a b-generator, with +-1 signs
inline std::vector<std::pair<std::vector<AGen>, int>> bgen_boundary_words(const BGen& g) {
    AGen aij = agen(g.i, g.j), aik = agen(g.i, g.k), ajk = agen(g.j, g.k);
    if (g.kind == BKind::ell) {
        // d l_ijk = [a_ij, a_ik + a_jk]
        return {{{aij, aik}, 1}, {{aij, ajk}, 1}, {{aik, aij}, -1}, {{ajk, aij}, -1}};
    }
    // d r_ijk = [a_jk, a_ij + a_ik]
    return {{{ajk, aij}, 1}, {{ajk, aik}, 1}, {{aij, ajk}, -1}, {{aik, ajk}, -1}};
}

} // namespace detail

template <class K>
ElementT<K> mul(const ElementT<K>& x, const ElementT<K>& y) {
    if (x.n != y.n) throw dkalg_error("ambient mismatch in mul");
    const int n = x.n;
    ElementT<K> r(n);
    for (auto& [w1, c1] : x.deg0)
        for (auto& [w2, c2] : y.deg0) {
            std::vector<AGen> seq = w1.letters;
            seq.insert(seq.end(), w2.letters.begin(), w2.letters.end());
            r.add_deg0(aword_normalize(std::move(seq), n), K(c1 * c2));
        }
    for (auto& [w1, c1] : x.deg0)
        for (auto& [m2, c2] : y.degm1) {
            std::vector<AGen> left = w1.letters;
            left.insert(left.end(), m2.left.letters.begin(), m2.left.letters.end());
            r.add_degm1(bmon_normalize(std::move(left), m2.gen, m2.right.letters, n), K(c1 * c2));
        }
    for (auto& [m1, c1] : x.degm1)
        for (auto& [w2, c2] : y.deg0) {
            std::vector<AGen> right = m1.right.letters;
            right.insert(right.end(), w2.letters.begin(), w2.letters.end());
            r.add_degm1(bmon_normalize(m1.left.letters, m1.gen, std::move(right), n), K(c1 * c2));
        }
    // Peiffer: b' b := d(b') b
    for (auto& [m1, c1] : x.degm1)
        for (auto& [m2, c2] : y.degm1) {
            for (auto& [dw, sign] : detail::bgen_boundary_words(m1.gen)) {
                std::vector<AGen> left = m1.left.letters;
                left.insert(left.end(), dw.begin(), dw.end());
                left.insert(left.end(), m1.right.letters.begin(), m1.right.letters.end());
                left.insert(left.end(), m2.left.letters.begin(), m2.left.letters.end());
                K c = c1 * c2;
                if (sign < 0) c = K(-c);
                r.add_degm1(bmon_normalize(std::move(left), m2.gen, m2.right.letters, n), c);
            }
        }
    return r;
}

template <class K>
ElementT<K> boundary(const ElementT<K>& x) {
    ElementT<K> r(x.n);
    for (auto& [m, c] : x.degm1) {
        for (auto& [dw, sign] : detail::bgen_boundary_words(m.gen)) {
            std::vector<AGen> seq = m.left.letters;
            seq.insert(seq.end(), dw.begin(), dw.end());
            seq.insert(seq.end(), m.right.letters.begin(), m.right.letters.end());
            K c2 = c;
            if (sign < 0) c2 = K(-c2);
            r.add_deg0(aword_normalize(std::move(seq), x.n), c2);
        }
    }
    return r;
}

// ---------------------------------------------------------------------------
// total-symmetry table for permuted relators
//
// L_{xyz} with sorted triple (i,j,k): the unordered pair slot {x,y} decides.
//   last = k  ->  +l_ijk          (L = L_213)
//   last = i  ->  +r_ijk          (L_231 = L_321)
//   last = j  ->  -(l_ijk+r_ijk)  (L_132 = L_312, forced by d-matching)
// R_{xyz}: the head slot x decides: first = i -> +r, first = k -> +l,
// first = j -> -(l+r).

struct RelatorTerm {
    int sign;
    BGen gen;
};

inline std::vector<RelatorTerm> perm_relator_terms(BKind kind, int x, int y, int z) {
    if (x == y || y == z || x == z) throw dkalg_error("perm_relator: repeated indices");
    int i = std::min({x, y, z});
    int k = std::max({x, y, z});
    int j = x + y + z - i - k;
    int pivot = (kind == BKind::ell) ? z : x;
    if (kind == BKind::ell ? (pivot == k) : (pivot == i))
        return {{1, bgen(kind, i, j, k)}};
    if (kind == BKind::ell ? (pivot == i) : (pivot == k))
        return {{1, bgen(kind == BKind::ell ? BKind::r : BKind::ell, i, j, k)}};
    return {{-1, bgen(BKind::ell, i, j, k)}, {-1, bgen(BKind::r, i, j, k)}};
}

template <class K>
ElementT<K> perm_relator(int n, BKind kind, int x, int y, int z) {
    ElementT<K> e(n);
    for (auto& t : perm_relator_terms(kind, x, y, z)) {
        check_index_range(t.gen.k, n, "perm_relator");
        e.add_degm1(BMon{{}, t.gen, {}}, Ring<K>::from_int(t.sign));
    }
    return e;
}

// ---------------------------------------------------------------------------
// strand maps (cabling and permutation)

struct StrandMap {
    int src_n = 0, dst_n = 0;
    std::vector<std::vector<int>> img; // img[s-1]: sorted target strands of s

    static StrandMap identity(int n) {
        StrandMap m;
        m.src_n = m.dst_n = n;
        for (int s = 1; s <= n + 1; ++s) m.img.push_back({s});
        return m;
    }
    // perm[s-1] = image strand of s; must be a permutation of 1..n+1
    static StrandMap permutation(int n, const std::vector<int>& perm) {
        if (static_cast<int>(perm.size()) != n + 1)
            throw dkalg_error("StrandMap::permutation: wrong size");
        StrandMap m;
        m.src_n = m.dst_n = n;
        for (int v : perm) m.img.push_back({v});
        m.validate();
        return m;
    }
    static StrandMap cabling_map(int src_n, int dst_n, std::vector<std::vector<int>> img) {
        StrandMap m;
        m.src_n = src_n;
        m.dst_n = dst_n;
        m.img = std::move(img);
        m.validate();
        return m;
    }

    void validate() const {
        if (static_cast<int>(img.size()) != src_n + 1)
            throw dkalg_error("StrandMap: need one image set per source strand");
        std::set<int> seen;
        for (auto& s : img) {
            if (s.empty()) throw dkalg_error("StrandMap: empty image set");
            for (int v : s) {
                if (v < 1 || v > dst_n + 1) throw dkalg_error("StrandMap: target out of range");
                if (!seen.insert(v).second) throw dkalg_error("StrandMap: image sets not disjoint");
            }
        }
    }
};

template <class K>
ElementT<K> cabling(const StrandMap& m, const ElementT<K>& x) {
    if (x.n != m.src_n) throw dkalg_error("cabling: ambient mismatch");
    const int dn = m.dst_n;
    auto cab_agen = [&](const AGen& a) {
        ElementT<K> e(dn);
        for (int p : m.img[a.i - 1])
            for (int q : m.img[a.j - 1]) e += ElementT<K>::agen_elem(dn, p, q);
        return e;
    };
    auto cab_bgen = [&](const BGen& g) {
        ElementT<K> e(dn);
        for (int p : m.img[g.i - 1])
            for (int q : m.img[g.j - 1])
                for (int s : m.img[g.k - 1]) e += perm_relator<K>(dn, g.kind, p, q, s);
        return e;
    };
    auto cab_word = [&](const AWord& w) {
        ElementT<K> e = ElementT<K>::one(dn);
        for (auto& a : w.letters) e = mul(e, cab_agen(a));
        return e;
    };
    ElementT<K> r(dn);
    for (auto& [w, c] : x.deg0) r += cab_word(w).scaled(c);
    for (auto& [mm, c] : x.degm1) {
        ElementT<K> e = mul(mul(cab_word(mm.left), cab_bgen(mm.gen)), cab_word(mm.right));
        r += e.scaled(c);
    }
    return r;
}

// ---------------------------------------------------------------------------
// relation family (i)

template <class K>
ElementT<K> commutator(const ElementT<K>& a, const ElementT<K>& b) {
    return mul(a, b) - mul(b, a);
}

// the six degree-(-1) relations per 4-subset i<j<k<l
template <class K>
std::vector<ElementT<K>> relation_set(int n) {
    if (n < 1) throw dkalg_error("relation_set: need n >= 1");
    using E = ElementT<K>;
    std::vector<E> out;
    auto A = [&](int i, int j) { return E::agen_elem(n, i, j); };
    auto L = [&](int i, int j, int k) { return E::bgen_elem(n, BKind::ell, i, j, k); };
    auto R = [&](int i, int j, int k) { return E::bgen_elem(n, BKind::r, i, j, k); };
    for (int i = 1; i <= n + 1; ++i)
        for (int j = i + 1; j <= n + 1; ++j)
            for (int k = j + 1; k <= n + 1; ++k)
                for (int l = k + 1; l <= n + 1; ++l) {
                    out.push_back(commutator(A(i, l) + A(j, l) + A(k, l), R(i, j, k)) -
                                  commutator(A(i, j) + A(i, k), L(j, k, l)) +
                                  commutator(A(j, k), L(i, j, l) + L(i, k, l)));
                    out.push_back(commutator(A(i, j) + A(i, k) + A(i, l), R(j, k, l)) +
                                  commutator(A(k, l), R(i, j, k) + R(i, j, l)) -
                                  commutator(A(j, k) + A(j, l), R(i, k, l)));
                    out.push_back(commutator(A(i, l) + A(j, l) + A(k, l), L(i, j, k)) +
                                  commutator(A(i, j), L(i, k, l) + L(j, k, l)) -
                                  commutator(A(i, k) + A(j, k), L(i, j, l)));
                    out.push_back(commutator(A(i, j) + A(i, k) + A(i, l), L(j, k, l)) +
                                  commutator(A(j, k), R(i, j, l) + R(i, k, l)) -
                                  commutator(A(j, l) + A(k, l), R(i, j, k)));
                    out.push_back(commutator(A(i, j), R(i, k, l) + R(j, k, l)) -
                                  commutator(A(k, l), L(i, j, k) + L(i, j, l)));
                    out.push_back(commutator(A(i, k), R(i, j, l) - L(j, k, l) - R(j, k, l)) +
                                  commutator(A(j, l), L(i, j, k) + R(i, j, k) - L(i, k, l)));
                }
    return out;
}

// ---------------------------------------------------------------------------
// graded bases

inline std::vector<AGen> all_agens(int n) {
    std::vector<AGen> v;
    for (int i = 1; i <= n + 1; ++i)
        for (int j = i + 1; j <= n + 1; ++j) v.push_back(AGen{i, j});
    return v;
}

inline std::vector<BGen> all_bgens(int n) {
    std::vector<BGen> v;
    for (int i = 1; i <= n + 1; ++i)
        for (int j = i + 1; j <= n + 1; ++j)
            for (int k = j + 1; k <= n + 1; ++k) {
                v.push_back(BGen{i, j, k, BKind::ell});
                v.push_back(BGen{i, j, k, BKind::r});
            }
    return v;
}

// all trace-normal-form words of length d, in increasing map order
std::vector<AWord> graded_awords(int n, int d, size_t cap = 2000000);

// all normal-form b-monomials with |left|+|right| = d
std::vector<BMon> graded_bmons(int n, int d, size_t cap = 2000000);

// ---------------------------------------------------------------------------
// numeric conversion and norms

inline ElementT<std::complex<double>> to_numeric(const ElementT<Coeff>& x,
                                                 std::optional<double> eps,
                                                 double mzv_tol = 1e-10) {
    ElementT<std::complex<double>> r(x.n);
    for (auto& [w, c] : x.deg0) r.add_deg0(w, coeff_eval(c, eps, mzv_tol));
    for (auto& [m, c] : x.degm1) r.add_degm1(m, coeff_eval(c, eps, mzv_tol));
    return r;
}

inline double max_abs(const ElementT<std::complex<double>>& x) {
    double m = 0.0;
    for (auto& [w, c] : x.deg0) m = std::max(m, std::abs(c));
    for (auto& [b, c] : x.degm1) m = std::max(m, std::abs(c));
    return m;
}

// ---------------------------------------------------------------------------
// text form

std::string aword_str(const AWord& w);
std::string bmon_str(const BMon& m);
std::string bgen_str(const BGen& g);

std::string element_str(const ElementT<Coeff>& e);
std::string element_str(const ElementT<Rational>& e);
std::string element_str(const ElementT<std::complex<double>>& e);

ElementT<Coeff> element_parse(const std::string& s, int n);

} // namespace dk2
