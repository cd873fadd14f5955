#include "dk2/linalg.hpp"

#include <cassert>
#include <sstream>

namespace dk2 {

namespace {

std::vector<Int> clear_row(const QVec& row) {
    Int l = 1;
    for (auto& r : row)
        if (r != 0) l = lcm(l, Int(denominator(r)));
    std::vector<Int> out(row.size());
    for (size_t j = 0; j < row.size(); ++j)
        out[j] = Int(numerator(row[j])) * (l / Int(denominator(row[j])));
    return out;
}

} // namespace

Echelon echelonize(QMatrix m, bool parallel) {
    const size_t rows = m.rows, cols = m.cols;
    std::vector<std::vector<Int>> M(rows);
    for (size_t i = 0; i < rows; ++i) M[i] = clear_row(m.a[i]);

    // fraction-free forward elimination (Bareiss)
    Int prev = 1;
    size_t r = 0;
    std::vector<size_t> pivot_col;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        size_t sel = rows;
        for (size_t i = r; i < rows; ++i)
            if (M[i][c] != 0) {
                sel = i;
                break;
            }
        if (sel == rows) continue;
        std::swap(M[sel], M[r]);
        const std::vector<Int>& pr = M[r];
        const Int piv = pr[c];
#pragma omp parallel for schedule(dynamic) if (parallel)
        for (long i = static_cast<long>(r) + 1; i < static_cast<long>(rows); ++i) {
            auto& row = M[static_cast<size_t>(i)];
            if (row[c] == 0) {
                for (size_t j = 0; j < cols; ++j) row[j] = row[j] * piv / prev;
                continue;
            }
            const Int f = row[c];
            for (size_t j = 0; j < cols; ++j) row[j] = (row[j] * piv - f * pr[j]) / prev;
            row[c] = 0;
        }
        prev = piv;
        pivot_col.push_back(c);
        ++r;
    }

    // rational back substitution to RREF
    Echelon e;
    e.rank = r;
    e.pivot_col = pivot_col;
    e.rref = QMatrix(r, cols);
    for (size_t i = 0; i < r; ++i) {
        Rational piv(M[i][pivot_col[i]]);
        for (size_t j = 0; j < cols; ++j) e.rref.a[i][j] = Rational(M[i][j]) / piv;
    }
    for (size_t i = r; i-- > 0;) {
        for (size_t k = 0; k < i; ++k) {
            Rational f = e.rref.a[k][pivot_col[i]];
            if (f == 0) continue;
            for (size_t j = 0; j < cols; ++j) e.rref.a[k][j] -= f * e.rref.a[i][j];
        }
    }
    return e;
}

std::vector<QVec> kernel_basis(const QMatrix& m, bool parallel) {
    Echelon e = echelonize(m, parallel);
    std::vector<bool> is_pivot(m.cols, false);
    for (size_t c : e.pivot_col) is_pivot[c] = true;
    std::vector<QVec> out;
    for (size_t f = 0; f < m.cols; ++f) {
        if (is_pivot[f]) continue;
        QVec x(m.cols, Rational(0));
        x[f] = 1;
        for (size_t i = 0; i < e.rank; ++i) x[e.pivot_col[i]] = -e.rref.a[i][f];
        out.push_back(std::move(x));
    }
    return out;
}

size_t rank(const QMatrix& m, bool parallel) { return echelonize(std::move(m), parallel).rank; }

QVec span_reduce(const Echelon& rows, QVec v) {
    for (size_t i = 0; i < rows.rank; ++i) {
        Rational f = v[rows.pivot_col[i]];
        if (f == 0) continue;
        for (size_t j = 0; j < rows.rref.cols; ++j) v[j] -= f * rows.rref.a[i][j];
    }
    return v;
}

bool in_span(const Echelon& rows, const QVec& v) {
    QVec r = span_reduce(rows, v);
    for (auto& x : r)
        if (x != 0) return false;
    return true;
}

std::vector<ElementT<Rational>> relation_span_elements(int n, int d, size_t cap) {
    using E = ElementT<Rational>;
    std::vector<E> out;
    if (d < 1) return out;
    auto rels = relation_set<Rational>(n);
    if (rels.empty()) return out;
    for (int d1 = 0; d1 + 1 <= d; ++d1) {
        auto lefts = graded_awords(n, d1, cap);
        auto rights = graded_awords(n, d - 1 - d1, cap);
        for (auto& w1 : lefts)
            for (auto& rho : rels)
                for (auto& w2 : rights) {
                    E e1(n), e2(n);
                    e1.add_deg0(w1, Rational(1));
                    e2.add_deg0(w2, Rational(1));
                    out.push_back(mul(mul(e1, rho), e2));
                    if (out.size() > cap) throw overflow_error("relation span exceeds cap");
                }
    }
    return out;
}

std::vector<ElementT<Rational>> peiffer_span_elements(int n, int d, size_t cap) {
    using E = ElementT<Rational>;
    std::vector<E> out;
    if (d < 2) return out;
    auto gens = all_bgens(n);
    for (int dx = 0; dx <= d - 2; ++dx)
        for (int dy = 0; dx + dy <= d - 2; ++dy) {
            int dz = d - 2 - dx - dy;
            auto xs = graded_awords(n, dx, cap);
            auto ys = graded_awords(n, dy, cap);
            auto zs = graded_awords(n, dz, cap);
            for (auto& x : xs)
                for (auto& y : ys)
                    for (auto& z : zs)
                        for (auto& gp : gens)
                            for (auto& g : gens) {
                                E X(n), Y(n), Z(n);
                                X.add_deg0(x, Rational(1));
                                Y.add_deg0(y, Rational(1));
                                Z.add_deg0(z, Rational(1));
                                E Gp = E::bgen_elem(n, gp.kind, gp.i, gp.j, gp.k);
                                E G = E::bgen_elem(n, g.kind, g.i, g.j, g.k);
                                // [x dg' y | g | z] - [x | g' | y dg z]
                                E e1 = mul(mul(mul(mul(X, boundary(Gp)), Y), G), Z);
                                E e2 = mul(mul(mul(mul(X, Gp), Y), boundary(G)), Z);
                                out.push_back(e1 - e2);
                                if (out.size() > cap)
                                    throw overflow_error("Peiffer span exceeds cap");
                            }
        }
    return out;
}

QVec bmon_coords(const ElementT<Rational>& e, const std::vector<BMon>& basis) {
    std::map<BMon, size_t> index;
    for (size_t i = 0; i < basis.size(); ++i) index[basis[i]] = i;
    QVec v(basis.size(), Rational(0));
    if (!e.deg0.empty()) throw dkalg_error("bmon_coords: element has a deg0 part");
    for (auto& [m, c] : e.degm1) {
        auto it = index.find(m);
        if (it == index.end()) throw dkalg_error("bmon_coords: monomial outside basis");
        v[it->second] = c;
    }
    return v;
}

ElementT<Rational> coords_to_element(int n, const QVec& v, const std::vector<BMon>& basis) {
    ElementT<Rational> e(n);
    for (size_t i = 0; i < basis.size(); ++i) e.add_degm1(basis[i], v[i]);
    return e;
}

Echelon quotient_span(int n, int d, const std::vector<BMon>& basis, size_t cap) {
    auto rel = relation_span_elements(n, d, cap);
    auto pei = peiffer_span_elements(n, d, cap);
    QMatrix m(rel.size() + pei.size(), basis.size());
    size_t r = 0;
    for (auto& e : rel) m.a[r++] = bmon_coords(e, basis);
    for (auto& e : pei) m.a[r++] = bmon_coords(e, basis);
    return echelonize(std::move(m));
}

std::string basis_fingerprint(const std::vector<BMon>& bmons, const std::vector<AWord>& awords) {
    uint64_t h = 1469598103934665603ull;
    auto feed = [&h](const std::string& s) {
        for (unsigned char c : s) {
            h ^= c;
            h *= 1099511628211ull;
        }
    };
    for (auto& b : bmons) feed(bmon_str(b));
    for (auto& w : awords) feed(aword_str(w));
    std::ostringstream os;
    os << std::hex << h;
    return os.str();
}

KernelReport kernel_of_boundary(int n, int d, size_t cap, bool parallel) {
    KernelReport rep;
    rep.n = n;
    rep.degree = d;
    std::vector<BMon> bmons = graded_bmons(n, d, cap);
    std::vector<AWord> awords = graded_awords(n, d + 2, cap);
    rep.bmon_basis_size = bmons.size();
    rep.aword_basis_size = awords.size();
    rep.basis_fingerprint = basis_fingerprint(bmons, awords);
    if (bmons.size() * awords.size() > cap * 64)
        throw overflow_error("kernel_of_boundary: matrix exceeds cap");

    std::map<AWord, size_t> windex;
    for (size_t i = 0; i < awords.size(); ++i) windex[awords[i]] = i;

    QMatrix m(awords.size(), bmons.size());
    for (size_t c = 0; c < bmons.size(); ++c) {
        ElementT<Rational> e(n);
        e.add_degm1(bmons[c], Rational(1));
        for (auto& [w, coef] : boundary(e).deg0) m.a[windex.at(w)][c] = coef;
    }

    std::vector<QVec> raw = kernel_basis(m, parallel);
    rep.raw_kernel_dim = raw.size();

    Echelon span = quotient_span(n, d, bmons, cap);
    rep.span_rank = span.rank;
    rep.kernel_dim = raw.size() - span.rank;

    // quotient-kernel representatives: reduce the raw kernel against the span
    QMatrix reduced(raw.size(), bmons.size());
    for (size_t i = 0; i < raw.size(); ++i) reduced.a[i] = span_reduce(span, raw[i]);
    Echelon reps = echelonize(std::move(reduced), parallel);
    assert(reps.rank == rep.kernel_dim);
    for (size_t i = 0; i < reps.rank; ++i)
        rep.representatives.push_back(coords_to_element(n, reps.rref.a[i], bmons));
    return rep;
}

} // namespace dk2
