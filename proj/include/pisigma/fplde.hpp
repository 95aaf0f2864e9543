#pragma once
// Solution spaces of first-order parameterized linear difference equations
//   a1*sigma(q) + a0*q = c_1 f_1 + ... + c_n f_n,  c in K^n,
// by denominator bounding, degree bounding and degree reduction.

#include "pisigma/context.hpp"
#include "pisigma/linsolve.hpp"

namespace pisigma {

// sigma = id on K: (a0 + a1) q = sum c_i f_i. Columns (c_1..c_n, q).
SolutionBasis base_case_solve(const Elem& a0, const Elem& a1, const Vec& f, int base);

// Basis of V(a, f, F_level), F_level the field of levels <= level.
SolutionBasis solve_fplde(Context& ctx, const Elem& a0, const Elem& a1, const Vec& f, int level);

// Basis of V(a, f, A[t]_m), t = t_level, with a and f polynomial in t.
SolutionBasis degree_reduction_fplde(Context& ctx, int m, const Elem& a0, const Elem& a1, const Vec& f,
                                     int level);

// a1*sigma(g) + a0*g == sum c_i f_i for every row.
bool verify_fplde(const Tower& T, const Elem& a0, const Elem& a1, const Vec& f, const SolutionBasis& b);

}  // namespace pisigma
