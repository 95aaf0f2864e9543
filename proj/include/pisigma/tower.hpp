#pragma once
// Difference-field towers K(t_1)...(t_e) with K = Q(params).
//
// Levels 1..s are constant parameters (sigma = id). Levels s+1..s+e are
// difference generators: Pi with sigma(t) = alpha*t, or Sigma* with
// sigma(t) = t + beta, alpha and beta taken from lower levels. Level s+1 is
// conventionally the rational variable x with sigma(x) = x + 1.
//
// A Tower is immutable; with_* members return an extended copy.

#include <optional>
#include <string>
#include <vector>

#include "pisigma/field.hpp"

namespace pisigma {

enum class GenKind { Param, Pi, Sigma };

struct Generator {
    std::string name;
    GenKind kind = GenKind::Param;
    Elem alpha = Elem(1);
    Elem beta = Elem(0);
};

// Per-level affine substitution t_L -> a[L]*t_L + b[L], applied recursively
// to coefficients. Levels <= fixed are left untouched.
struct LevelMap {
    int fixed = 0;
    std::vector<Elem> a, b;  // indexed by level, entry 0 unused
    Elem apply(const Elem& f) const;
    Poly apply(const Poly& p) const;
};

class Tower {
public:
    Tower() = default;
    explicit Tower(const std::vector<std::string>& params);

    Tower with_pi(const std::string& name, const Elem& alpha) const;
    Tower with_sigma(const std::string& name, const Elem& beta) const;
    // Same generator list with level L redefined (used by the reduction map).
    Tower with_generator(int level, const Generator& g) const;

    int base() const { return nparams_; }   // levels <= base() form K
    int top() const { return static_cast<int>(gens_.size()); }
    int depth() const { return top() - base(); }
    const Generator& generator(int level) const { return gens_.at(level - 1); }
    Elem gen(int level) const { return Elem::gen(level); }
    std::optional<int> level_of(const std::string& name) const;

    bool is_pi(int level) const { return level > base() && generator(level).kind == GenKind::Pi; }
    bool is_sigma(int level) const { return level > base() && generator(level).kind == GenKind::Sigma; }
    // sigma(t_L) = t_L + 1 with L = base()+1.
    bool is_rational_base(int level) const;

    // sigma^n(f) for any integer n.
    Elem sigma(const Elem& f, long n = 1) const;
    const LevelMap& forward() const { return fwd_; }
    const LevelMap& backward() const { return bwd_; }

    // Level of f relative to K: 0 iff f in K, i iff f lies in K(t_1..t_i)
    // but not in K(t_1..t_{i-1}).
    int split_level(const Elem& f) const { return std::max(0, f.level() - base()); }

    // Every generator above level from is Sigma* with a polynomial beta.
    bool is_polynomial_sigma_tower(int from) const;

    // Names indexed by level; entry 0 is empty.
    std::vector<std::string> level_names() const;
    std::string str(const Elem& f) const { return to_string(f, level_names()); }

private:
    int nparams_ = 0;
    std::vector<Generator> gens_;
    LevelMap fwd_, bwd_;

    void push(const Generator& g);
};

}  // namespace pisigma
