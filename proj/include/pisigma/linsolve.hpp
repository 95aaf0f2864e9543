#pragma once
// Exact linear algebra over the constant field K and solution-space bases.

#include <cstddef>
#include <vector>

#include "pisigma/field.hpp"

namespace pisigma {

using Vec = std::vector<Elem>;
using Mat = std::vector<Vec>;

// One basis vector (c_1..c_n, g) of a solution space.
struct SolRow {
    Vec c;
    Elem g;
};

// Basis of a K-vector space of pairs (c, g) with c in K^n.
struct SolutionBasis {
    std::size_t n = 0;
    std::vector<SolRow> rows;

    bool empty() const { return rows.empty(); }
    std::size_t dim() const { return rows.size(); }
};

// Kernel of M (ncols columns) by fraction-free elimination with primitive
// rows; pivots are divided out at the end. The pivot is the
// leftmost nonzero column, taking the first row that has it. Each kernel
// vector has one free variable set to 1; vectors come in descending order of
// their free column.
Mat nullspace(Mat M, std::size_t ncols);

// All d in K^n with sum d_i v_i = 0, where K is the field of levels <= base.
// Clears t-denominators level by level and compares coefficients.
Mat constant_kernel(const Vec& v, int base);

// Rows of the coefficient system behind constant_kernel.
Mat coefficient_rows(const Vec& v, int base);

// Span-preserving: afterwards at most the first row has c_1 != 0.
SolutionBasis first_row_reduce(SolutionBasis b);

// True iff the two bases span the same space (exact rank test).
bool same_span(const SolutionBasis& a, const SolutionBasis& b, int base);

}  // namespace pisigma
