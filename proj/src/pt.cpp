#include "pisigma/pt.hpp"

#include <stdexcept>

#include "detail.hpp"
#include "pisigma/bounds.hpp"
#include "pisigma/fplde.hpp"

namespace pisigma {

using namespace detail;

namespace {

bool no_first_entry(const SolutionBasis& b) { return b.empty() || b.rows[0].c[0].is_zero(); }

SolutionBasis empty_basis(std::size_t n) {
    SolutionBasis b;
    b.n = n;
    return b;
}

// Basis of V(r, proper fractions in t_L).
SolutionBasis rational_part(Context& ctx, const Vec& r, int L) {
    const Tower& T = ctx.tower();
    if (all_zero(r)) return identity_basis(r.size());
    DenominatorBound db = denominator_bound(ctx, Elem(-1), Elem(1), r, L);
    Elem d = Elem::from_poly(db.d);
    Elem b0 = Elem(-1) / d, b1 = Elem(1) / T.sigma(d);
    Vec all{b0, b1};
    all.insert(all.end(), r.begin(), r.end());
    Elem D = Elem::from_poly(common_denominator(all, L));
    Vec rp;
    for (const auto& x : r) rp.push_back(x * D);
    SolutionBasis b = degree_reduction_fplde(ctx, db.d.deg() - 1, b0 * D, b1 * D, rp, L);
    for (auto& row : b.rows) row.g /= d;
    b.n = r.size();
    return b;
}

SolutionBasis poly_reduction(Context& ctx, int m, const Vec& f, int from, int L);

}  // namespace

SolutionBasis solve_pt(Context& ctx, const Vec& f, int L, bool early) {
    const Tower& T = ctx.tower();
    const std::size_t n = f.size();
    if (L <= T.base()) {
        SolutionBasis b = base_case_solve(Elem(-1), Elem(1), f, T.base());
        if (early) {
            b = first_row_reduce(b);
            if (no_first_entry(b)) return empty_basis(n);
        }
        return b;
    }
    Vec r, p;
    for (const auto& x : f) {
        SplitFraction s = split_fraction(x, L);
        r.push_back(s.proper);
        p.push_back(s.poly);
    }
    SolutionBasis b1 = rational_part(ctx, r, L);
    if (early) {
        b1 = first_row_reduce(b1);
        if (no_first_entry(b1)) return empty_basis(n);
    }
    if (b1.empty()) return homogeneous_only(n, Elem(1));

    Vec fp = combine(b1, p);
    int m = degree_bound_pt(ctx, fp, L);
    // Constants solve the homogeneous equation; keep degree 0 reachable.
    if (m < 0) m = 0;
    SolutionBasis b2 = degree_reduction_rat(ctx, m, fp, L, early);
    if (early && no_first_entry(b2)) return empty_basis(n);
    SolutionBasis out = compose(b1, b2, Elem(1));
    out.n = n;
    if (ctx.options().check && !verify_pt(T, f, out)) throw std::logic_error("internal: PT certificate check failed");
    return out;
}

SolutionBasis degree_reduction_rat(Context& ctx, int m, const Vec& f, int L, bool early) {
    const Tower& T = ctx.tower();
    const std::size_t n = f.size();
    if (maxdeg(f, L) > m) throw std::invalid_argument("degree_reduction_rat: degree exceeds bound");
    if (m < 0) {
        SolutionBasis b = empty_basis(n);
        for (auto& v : constant_kernel(f, T.base())) b.rows.push_back(SolRow{v, Elem(0)});
        if (early) {
            b = first_row_reduce(b);
            if (no_first_entry(b)) return empty_basis(n);
        }
        return b;
    }
    if (m == 0) return solve_pt(ctx, f, L - 1, early);

    Vec ft = coeffs(f, L, m);
    SolutionBasis lead = T.is_pi(L) ? solve_fplde(ctx, Elem(-1), T.generator(L).alpha.pow(m), ft, L - 1)
                                    : solve_pt(ctx, ft, L - 1, early);
    if (early) {
        lead = first_row_reduce(lead);
        if (no_first_entry(lead)) return empty_basis(n);
    }
    if (lead.empty()) return homogeneous_only(n, Elem(1));

    const Elem tm = tpow(L, m);
    Vec phi = combine(lead, f);
    for (std::size_t k = 0; k < lead.rows.size(); ++k) {
        Elem gt = lead.rows[k].g * tm;
        if (!gt.is_zero()) phi[k] -= T.sigma(gt) - gt;
    }
    SolutionBasis rest = degree_reduction_rat(ctx, m - 1, phi, L, early);
    if (early && no_first_entry(rest)) return empty_basis(n);
    SolutionBasis out = compose(lead, rest, tm);
    out.n = n;
    return out;
}

SolutionBasis solve_pt_poly(Context& ctx, const Vec& f, int from, int L) {
    const Tower& T = ctx.tower();
    if (!T.is_polynomial_sigma_tower(from)) throw std::invalid_argument("solve_pt_poly: not a polynomial Sigma* tower");
    if (L <= std::max(from, T.base())) return solve_pt(ctx, f, L);
    for (const auto& x : f)
        if (!x.is_poly(L)) throw std::invalid_argument("solve_pt_poly: input is not polynomial");
    return poly_reduction(ctx, maxdeg(f, L) + 1, f, from, L);
}

namespace {

SolutionBasis poly_reduction(Context& ctx, int m, const Vec& f, int from, int L) {
    const Tower& T = ctx.tower();
    if (m == 0) return solve_pt_poly(ctx, f, from, L - 1);
    SolutionBasis lead = solve_pt_poly(ctx, coeffs(f, L, m), from, L - 1);
    const Elem tm = tpow(L, m);
    Vec phi = combine(lead, f);
    for (std::size_t k = 0; k < lead.rows.size(); ++k) {
        Elem gt = lead.rows[k].g * tm;
        if (!gt.is_zero()) phi[k] -= T.sigma(gt) - gt;
    }
    SolutionBasis out = compose(lead, poly_reduction(ctx, m - 1, phi, from, L), tm);
    out.n = f.size();
    return out;
}

}  // namespace

bool verify_pt(const Tower& T, const Vec& f, const SolutionBasis& b) {
    return verify_fplde(T, Elem(-1), Elem(1), f, b);
}

}  // namespace pisigma
