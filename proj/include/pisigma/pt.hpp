#pragma once
// Parameterized telescoping sigma(g) - g = c_1 f_1 + ... + c_n f_n: the
// rational part is solved first, then the combined polynomial part by
// degree reduction.
//
// early_abort: the caller only needs a solution with c_1 != 0. Intermediate
// bases are kept first-row reduced and the search stops (returning an empty
// basis) as soon as no such solution can exist.

#include "pisigma/context.hpp"
#include "pisigma/linsolve.hpp"

namespace pisigma {

SolutionBasis solve_pt(Context& ctx, const Vec& f, int level, bool early_abort = false);

// Basis of V(f, A[t]_m) for f polynomial in t = t_level of degree <= m.
SolutionBasis degree_reduction_rat(Context& ctx, int m, const Vec& f, int level, bool early_abort = false);

// Pre: the tower above from_level is a polynomial Sigma* extension and f is
// polynomial in those generators. No denominator bounds are computed.
SolutionBasis solve_pt_poly(Context& ctx, const Vec& f, int from_level, int level);

bool verify_pt(const Tower& T, const Vec& f, const SolutionBasis& b);

}  // namespace pisigma
