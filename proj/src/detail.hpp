#pragma once
// Helpers shared by the solver translation units.

#include <stdexcept>

#include "pisigma/context.hpp"
#include "pisigma/linsolve.hpp"

namespace pisigma::detail {

inline Elem tpow(int level, int m) { return Elem::gen(level).pow(m); }

// Polynomial in t_L viewed as a Poly; throws if e has a t_L-denominator.
inline Poly as_poly(const Elem& e, int level) {
    if (!e.is_poly(level)) throw std::logic_error("expected a polynomial in the working generator");
    return e.num(level);
}

inline int maxdeg(const Vec& f, int level) {
    int d = -1;
    for (const auto& x : f) d = std::max(d, x.deg(level));
    return d;
}

inline bool all_zero(const Vec& f) {
    for (const auto& x : f)
        if (!x.is_zero()) return false;
    return true;
}

inline Vec coeffs(const Vec& f, int level, int i) {
    Vec r;
    r.reserve(f.size());
    for (const auto& x : f) r.push_back(x.coeff(level, i));
    return r;
}

// Rows (d, h) of inner act on outer rows (C_k, g_k): result rows are
// (d*C, sum_k d_k g_k * mult + h).
inline SolutionBasis compose(const SolutionBasis& outer, const SolutionBasis& inner, const Elem& mult) {
    SolutionBasis out;
    out.n = outer.n;
    for (const auto& r : inner.rows) {
        SolRow row{Vec(outer.n, Elem(0)), Elem(0)};
        Elem acc(0);
        for (std::size_t k = 0; k < outer.rows.size(); ++k) {
            if (r.c[k].is_zero()) continue;
            for (std::size_t i = 0; i < outer.n; ++i)
                if (!outer.rows[k].c[i].is_zero()) row.c[i] += r.c[k] * outer.rows[k].c[i];
            if (!outer.rows[k].g.is_zero()) acc += r.c[k] * outer.rows[k].g;
        }
        row.g = acc * mult + r.g;
        out.rows.push_back(std::move(row));
    }
    return out;
}

// C*f for the coefficient rows of a basis.
inline Vec combine(const SolutionBasis& b, const Vec& f) {
    Vec r;
    for (const auto& row : b.rows) {
        Elem s(0);
        for (std::size_t i = 0; i < f.size(); ++i)
            if (!row.c[i].is_zero() && !f[i].is_zero()) s += row.c[i] * f[i];
        r.push_back(s);
    }
    return r;
}

inline SolutionBasis identity_basis(std::size_t n) {
    SolutionBasis b;
    b.n = n;
    for (std::size_t i = 0; i < n; ++i) {
        SolRow r{Vec(n, Elem(0)), Elem(0)};
        r.c[i] = Elem(1);
        b.rows.push_back(std::move(r));
    }
    return b;
}

inline SolutionBasis homogeneous_only(std::size_t n, const Elem& g) {
    SolutionBasis b;
    b.n = n;
    b.rows.push_back(SolRow{Vec(n, Elem(0)), g});
    return b;
}

}  // namespace pisigma::detail
