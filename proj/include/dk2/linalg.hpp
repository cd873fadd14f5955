#pragma once

#include <optional>
#include <vector>

#include "dk2/algebra.hpp"

namespace dk2 {

using QVec = std::vector<Rational>;

// dense exact matrix, row major
struct QMatrix {
    size_t rows = 0, cols = 0;
    std::vector<QVec> a;

    QMatrix() = default;
    QMatrix(size_t r, size_t c) : rows(r), cols(c), a(r, QVec(c, Rational(0))) {}
};

// fraction-free (Bareiss) elimination on integer-cleared rows; deterministic
// pivoting (first nonzero column in fixed row order). Bit-identical across
// thread counts.
struct Echelon {
    QMatrix rref;                  // reduced rows, unit pivots
    std::vector<size_t> pivot_col; // one per nonzero row
    size_t rank = 0;
};

Echelon echelonize(QMatrix m, bool parallel = true);

// kernel basis of m (column vectors x with m x = 0), deterministic order
std::vector<QVec> kernel_basis(const QMatrix& m, bool parallel = true);

size_t rank(const QMatrix& m, bool parallel = true);

// reduce v against the echelonized row space; result has zeros in pivot cols
QVec span_reduce(const Echelon& rows, QVec v);

bool in_span(const Echelon& rows, const QVec& v);

// ---------------------------------------------------------------------------
// graded kernel of the differential

// Peiffer-exchange relations [x dg' y | g | z] - [x | g' | y dg z] with
// |x|+|y|+|z| = d-2; together with the a-multiples of the six-term relations
// they span the kernel directions that the BMon presentation over-counts.
std::vector<ElementT<Rational>> peiffer_span_elements(int n, int d, size_t cap = 2000000);

// left/right a-word multiples of relation_set(n) landing in a-degree d
std::vector<ElementT<Rational>> relation_span_elements(int n, int d, size_t cap = 2000000);

struct KernelReport {
    int n = 0;
    int degree = 0;
    size_t bmon_basis_size = 0;
    size_t aword_basis_size = 0;
    size_t raw_kernel_dim = 0;   // kernel of d on the BMon span
    size_t span_rank = 0;        // rank of relation + Peiffer span
    size_t kernel_dim = 0;       // raw_kernel_dim - span_rank
    std::vector<ElementT<Rational>> representatives; // nonzero quotient classes
    std::string basis_fingerprint;
};

KernelReport kernel_of_boundary(int n, int d, size_t cap = 2000000, bool parallel = true);

// coordinate helpers
QVec bmon_coords(const ElementT<Rational>& e, const std::vector<BMon>& basis);
ElementT<Rational> coords_to_element(int n, const QVec& v, const std::vector<BMon>& basis);

// echelonized span of the quotient relations in a fixed BMon basis
Echelon quotient_span(int n, int d, const std::vector<BMon>& basis, size_t cap = 2000000);

// FNV-1a over the serialized basis, for report fingerprints
std::string basis_fingerprint(const std::vector<BMon>& bmons, const std::vector<AWord>& awords);

} // namespace dk2
