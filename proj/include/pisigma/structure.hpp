#pragma once
// Building Sigma* extensions, detecting and removing non-reduced Sigma*
// generators, and telescoping in reduced towers through a single
// first-entry call over the ground field.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pisigma/context.hpp"
#include "pisigma/linsolve.hpp"

namespace pisigma {

struct ExtensionResult {
    bool telescoped = false;
    Elem g;          // sigma(g) - g = f when telescoped
    Tower tower;     // extended tower otherwise
    int level = 0;   // level of the new generator
    bool verified = true;  // false when a windowed bound was involved
};

// Either a telescoper of f in the current tower or the tower extended by t
// with sigma(t) = t + f.
ExtensionResult try_sigma_star_extension(Context& ctx, const Elem& f, const std::string& name);

// Generator at level is Sigma*; false iff its beta can be written as
// sigma(g) - g + psi with psi in a strictly smaller subfield.
bool is_reduced_extension(Context& ctx, int level);

// Field isomorphism old tower -> new tower sending t_L to t_L + shift[L].
struct ReductionMap {
    Tower tower;              // the reduced tower
    std::vector<Elem> shift;  // indexed by level; zero for untouched levels
    std::vector<int> replaced;

    Elem apply(const Elem& f) const;
    // (old generator name, image text in the new tower)
    std::vector<std::pair<std::string, std::string>> describe(const Tower& old) const;
};

ReductionMap transform_to_reduced(const Tower& tower, Options opt = {});

// Solves sigma(g) - g = f for f at level <= ground in a tower that is
// reduced above ground: g = (w - sum c_j t_j)/c from one first-entry call on
// (f, beta_j) over the ground field, t_j ranging over the Sigma* generators
// with beta_j in the ground field.
std::optional<Elem> structural_telescope(Context& ctx, const Elem& f, int ground);

}  // namespace pisigma
