#pragma once
// Universal denominators and degree bounds for a1*sigma(q) + a0*q = sum c_i f_i.
//
// Complete at the rational base (Abramov's dispersion chain, classical
// leading-coefficient analysis). Above it, Sigma* levels get a complete
// degree bound via the second-coefficient lifting condition and a windowed
// denominator scan; Pi levels get a valuation bound plus windowed scans.
// Every windowed result that could be incomplete raises ctx.flag().

#include <vector>

#include "pisigma/context.hpp"
#include "pisigma/linsolve.hpp"

namespace pisigma {

enum class DenProvenance { Trivial, AbramovDispersion, PiPower, Windowed };

struct DenominatorBound {
    Poly d;  // monic, in t_level
    DenProvenance provenance = DenProvenance::Trivial;
    bool complete = true;
};

// All j >= 0 with deg gcd(sigma^j(p), q) > 0 at the rational base, read off
// the nonnegative integer roots of Res_t(p(t+j), q(t)).
std::vector<long> dispersion(const Poly& p, const Poly& q, const Tower& tower);

// Resultant of two polynomials in the same variable over a field.
Elem resultant(const Poly& p, const Poly& q);

// Pre: a0*a1 != 0, all entries at or below level.
DenominatorBound denominator_bound(Context& ctx, const Elem& a0, const Elem& a1, const Vec& f, int level);

// Pre: a0, a1, f polynomial in t_level, (a0, a1) != 0.
int degree_bound_fplde(Context& ctx, const Elem& a0, const Elem& a1, const Vec& f, int level);

// Telescoping shape: max deg + 1 on Sigma* levels, max deg on Pi levels.
int degree_bound_pt(const Context& ctx, const Vec& f, int level);

}  // namespace pisigma
