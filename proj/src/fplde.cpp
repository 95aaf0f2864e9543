#include "pisigma/fplde.hpp"

#include <stdexcept>

#include "detail.hpp"
#include "pisigma/bounds.hpp"

namespace pisigma {

using namespace detail;

namespace {

SolutionBasis from_kernel(const Mat& ker, std::size_t n, const std::vector<Elem>& gparts) {
    // Kernel vectors (c_1..c_n, x_0..x_k) mapped to rows (c, sum x_j gparts_j).
    SolutionBasis b;
    b.n = n;
    for (const auto& v : ker) {
        SolRow r{Vec(v.begin(), v.begin() + n), Elem(0)};
        for (std::size_t j = 0; j < gparts.size(); ++j)
            if (!v[n + j].is_zero()) r.g += v[n + j] * gparts[j];
        b.rows.push_back(std::move(r));
    }
    return b;
}

void maybe_check(Context& ctx, const Elem& a0, const Elem& a1, const Vec& f, const SolutionBasis& b) {
    if (ctx.options().check && !verify_fplde(ctx.tower(), a0, a1, f, b))
        throw std::logic_error("internal: FPLDE certificate check failed");
}

// Rational base (sigma(x) = x + 1): one linear system in q_0..q_m, c.
SolutionBasis rational_direct(Context& ctx, int m, const Elem& a0, const Elem& a1, const Vec& f, int L) {
    const Tower& T = ctx.tower();
    std::size_t n = f.size();
    Vec cols;
    for (const auto& x : f) cols.push_back(-x);
    std::vector<Elem> gparts;
    Elem x = Elem::gen(L), sx = T.sigma(x), xp(1), sxp(1);
    for (int j = 0; j <= m; ++j) {
        cols.push_back(a1 * sxp + a0 * xp);
        gparts.push_back(xp);
        xp *= x;
        sxp *= sx;
    }
    return from_kernel(constant_kernel(cols, T.base()), n, gparts);
}

}  // namespace

SolutionBasis base_case_solve(const Elem& a0, const Elem& a1, const Vec& f, int base) {
    Vec cols;
    for (const auto& x : f) cols.push_back(-x);
    cols.push_back(a0 + a1);
    return from_kernel(constant_kernel(cols, base), f.size(), {Elem(1)});
}

SolutionBasis solve_fplde(Context& ctx, const Elem& a0, const Elem& a1, const Vec& f, int L) {
    const Tower& T = ctx.tower();
    if (a0.is_zero() && a1.is_zero()) throw std::invalid_argument("solve_fplde: a = (0, 0)");
    const std::size_t n = f.size();
    SolutionBasis out;
    out.n = n;
    if (a1.is_zero() || a0.is_zero()) {
        // q is determined by c; the homogeneous equation has only q = 0.
        for (std::size_t i = 0; i < n; ++i) {
            SolRow r{Vec(n, Elem(0)), Elem(0)};
            r.c[i] = Elem(1);
            r.g = a1.is_zero() ? f[i] / a0 : T.sigma(f[i] / a1, -1);
            out.rows.push_back(std::move(r));
        }
        return out;
    }
    if (L <= T.base()) return base_case_solve(a0, a1, f, T.base());

    DenominatorBound db = denominator_bound(ctx, a0, a1, f, L);
    Elem d = Elem::from_poly(db.d);
    Elem b0 = a0 / d, b1 = a1 / T.sigma(d);
    Vec all{b0, b1};
    all.insert(all.end(), f.begin(), f.end());
    Elem D = Elem::from_poly(common_denominator(all, L));
    Elem p0 = b0 * D, p1 = b1 * D;
    Vec fp;
    for (const auto& x : f) fp.push_back(x * D);
    // Drop the common polynomial factor of a' and f'.
    Poly G = gcd(as_poly(p0, L), as_poly(p1, L));
    for (const auto& x : fp)
        if (G.deg() > 0 && !x.is_zero()) G = gcd(G, as_poly(x, L));
    if (G.deg() > 0) {
        Elem Ge = Elem::from_poly(G);
        p0 /= Ge;
        p1 /= Ge;
        for (auto& x : fp) x /= Ge;
    }

    int m = degree_bound_fplde(ctx, p0, p1, fp, L);
    SolutionBasis b = (ctx.options().rational_fast_path && T.is_rational_base(L) && T.base() == 0)
                          ? rational_direct(ctx, m, p0, p1, fp, L)
                          : degree_reduction_fplde(ctx, m, p0, p1, fp, L);
    for (auto& r : b.rows) r.g /= d;
    b.n = n;
    maybe_check(ctx, a0, a1, f, b);
    return b;
}

SolutionBasis degree_reduction_fplde(Context& ctx, int m, const Elem& a0, const Elem& a1, const Vec& f, int L) {
    const Tower& T = ctx.tower();
    const std::size_t n = f.size();
    const int l = std::max(a0.deg(L), a1.deg(L));

    // Coefficients above t^(m+l) cannot be matched: restrict c to kill them.
    int md = maxdeg(f, L);
    if (md > m + l) {
        SolutionBasis high;
        high.n = n;
        Mat rows;
        for (int j = m + l + 1; j <= md; ++j) {
            Mat r = coefficient_rows(coeffs(f, L, j), T.base());
            rows.insert(rows.end(), r.begin(), r.end());
        }
        Mat ker = nullspace(rows, n);
        for (auto& v : ker) high.rows.push_back(SolRow{v, Elem(0)});
        if (high.empty()) return high;
        SolutionBasis inner = degree_reduction_fplde(ctx, m, a0, a1, combine(high, f), L);
        return compose(high, inner, Elem(1));
    }

    if (m < 0) {
        SolutionBasis b;
        b.n = n;
        for (auto& v : constant_kernel(f, T.base())) b.rows.push_back(SolRow{v, Elem(0)});
        return b;
    }
    if (m == 0 && l == 0) return solve_fplde(ctx, a0, a1, f, L - 1);

    const Elem alpha_m = T.is_pi(L) ? T.generator(L).alpha.pow(m) : Elem(1);
    Elem at0 = a0.coeff(L, l), at1 = alpha_m * a1.coeff(L, l);
    SolutionBasis lead = solve_fplde(ctx, at0, at1, coeffs(f, L, m + l), L - 1);
    const Elem tm = tpow(L, m);

    if (lead.empty()) {
        SolutionBasis h = degree_reduction_fplde(ctx, m - 1, a0, a1, {}, L);
        SolutionBasis b;
        b.n = n;
        if (!h.empty()) b.rows.push_back(SolRow{Vec(n, Elem(0)), h.rows[0].g});
        return b;
    }

    Vec phi = combine(lead, f);
    for (std::size_t k = 0; k < lead.rows.size(); ++k) {
        Elem gt = lead.rows[k].g * tm;
        if (!gt.is_zero()) phi[k] -= a1 * T.sigma(gt) + a0 * gt;
    }
    SolutionBasis rest = degree_reduction_fplde(ctx, m - 1, a0, a1, phi, L);
    if (rest.empty()) return rest;
    SolutionBasis out = compose(lead, rest, tm);
    out.n = n;
    return out;
}

bool verify_fplde(const Tower& T, const Elem& a0, const Elem& a1, const Vec& f, const SolutionBasis& b) {
    for (const auto& r : b.rows) {
        if (r.c.size() != f.size()) return false;
        Elem rhs(0);
        for (std::size_t i = 0; i < f.size(); ++i) rhs += r.c[i] * f[i];
        if (a1 * T.sigma(r.g) + a0 * r.g != rhs) return false;
    }
    return true;
}

}  // namespace pisigma
