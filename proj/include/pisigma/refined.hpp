#pragma once
// First-entry telescoping (a solution with c_1 != 0, if one exists) and
// reduced special solutions sigma(g) - g + psi = sum c_i f_i with c_1 != 0
// and psi = 0 or psi in the smallest possible subfield.

#include <optional>

#include "pisigma/context.hpp"
#include "pisigma/linsolve.hpp"

namespace pisigma {

struct SpecialSolution {
    Elem psi;
    Vec c;
    Elem g;
    int psi_level = 0;  // split level of psi relative to K
};

// At most one row, with c_1 != 0.
std::optional<SolRow> first_entry_pt(Context& ctx, const Vec& f, int level);
std::optional<SolRow> degree_reduction_first_entry(Context& ctx, int m, const Vec& f, int level);

SpecialSolution reduced_pt(Context& ctx, const Vec& f, int level);
std::optional<SpecialSolution> degree_reduction_reduced(Context& ctx, int m, const Vec& f, int level);

bool verify_special(const Tower& T, const Vec& f, const SpecialSolution& s);

}  // namespace pisigma
