#include "pisigma/refined.hpp"

#include <stdexcept>

#include "detail.hpp"
#include "pisigma/bounds.hpp"
#include "pisigma/fplde.hpp"
#include "pisigma/pt.hpp"

namespace pisigma {

using namespace detail;

namespace {

SolRow unit_first(std::size_t n) {
    SolRow r{Vec(n, Elem(0)), Elem(0)};
    r.c[0] = Elem(1);
    return r;
}

bool usable(const SolutionBasis& b) { return !b.empty() && !b.rows[0].c[0].is_zero(); }

// Rational part basis for the split at level L, first-row reduced.
struct Split {
    SolutionBasis b1;
    Vec fp;  // C * polynomial part
};

std::optional<Split> split_stage(Context& ctx, const Vec& f, int L) {
    Vec r, p;
    for (const auto& x : f) {
        SplitFraction s = split_fraction(x, L);
        r.push_back(s.proper);
        p.push_back(s.poly);
    }
    // Rational part as in solve_pt: V(r) over proper fractions.
    SolutionBasis b1;
    if (all_zero(r)) {
        b1 = identity_basis(f.size());
    } else {
        const Tower& T = ctx.tower();
        DenominatorBound db = denominator_bound(ctx, Elem(-1), Elem(1), r, L);
        Elem d = Elem::from_poly(db.d);
        Elem a0 = Elem(-1) / d, a1 = Elem(1) / T.sigma(d);
        Vec all{a0, a1};
        all.insert(all.end(), r.begin(), r.end());
        Elem D = Elem::from_poly(common_denominator(all, L));
        Vec rp;
        for (const auto& x : r) rp.push_back(x * D);
        b1 = degree_reduction_fplde(ctx, db.d.deg() - 1, a0 * D, a1 * D, rp, L);
        for (auto& row : b1.rows) row.g /= d;
        b1.n = f.size();
    }
    b1 = first_row_reduce(b1);
    if (!usable(b1)) return std::nullopt;
    return Split{b1, combine(b1, p)};
}

// The leading subproblem of the degree reduction, first-row reduced.
SolutionBasis lead_basis(Context& ctx, int m, const Vec& ft, int L) {
    const Tower& T = ctx.tower();
    SolutionBasis b = T.is_pi(L) ? solve_fplde(ctx, Elem(-1), T.generator(L).alpha.pow(m), ft, L - 1)
                                 : solve_pt(ctx, ft, L - 1, ctx.options().early_abort);
    return first_row_reduce(b);
}

Vec phi_of(const Tower& T, const SolutionBasis& lead, const Vec& f, const Elem& tm) {
    Vec phi = combine(lead, f);
    for (std::size_t k = 0; k < lead.rows.size(); ++k) {
        Elem gt = lead.rows[k].g * tm;
        if (!gt.is_zero()) phi[k] -= T.sigma(gt) - gt;
    }
    return phi;
}

// Single row d acting on a basis: (d*C, sum d_k g_k * mult + h).
SolRow lift(const SolutionBasis& outer, const Vec& d, const Elem& h, const Elem& mult) {
    SolutionBasis inner;
    inner.n = d.size();
    inner.rows.push_back(SolRow{d, h});
    return compose(outer, inner, mult).rows[0];
}

}  // namespace

std::optional<SolRow> first_entry_pt(Context& ctx, const Vec& f, int L) {
    const Tower& T = ctx.tower();
    const std::size_t n = f.size();
    if (n == 0) throw std::invalid_argument("first_entry_pt: empty input");
    if (f[0].is_zero()) return unit_first(n);
    if (L <= T.base()) {
        SolutionBasis b = first_row_reduce(base_case_solve(Elem(-1), Elem(1), f, T.base()));
        if (!usable(b)) return std::nullopt;
        return b.rows[0];
    }
    auto sp = split_stage(ctx, f, L);
    if (!sp) return std::nullopt;
    int m = degree_bound_pt(ctx, sp->fp, L);
    auto row = degree_reduction_first_entry(ctx, m, sp->fp, L);
    if (!row) return std::nullopt;
    SolRow out = lift(sp->b1, row->c, row->g, Elem(1));
    if (ctx.options().check) {
        SolutionBasis chk{n, {out}};
        if (!verify_pt(T, f, chk)) throw std::logic_error("internal: first-entry certificate check failed");
    }
    return out;
}

std::optional<SolRow> degree_reduction_first_entry(Context& ctx, int m, const Vec& f, int L) {
    const std::size_t n = f.size();
    if (f[0].is_zero()) return unit_first(n);  // also covers m = -1
    if (m <= 0) return first_entry_pt(ctx, f, L - 1);
    SolutionBasis lead = lead_basis(ctx, m, coeffs(f, L, m), L);
    if (!usable(lead)) return std::nullopt;
    const Elem tm = tpow(L, m);
    auto rest = degree_reduction_first_entry(ctx, m - 1, phi_of(ctx.tower(), lead, f, tm), L);
    if (!rest) return std::nullopt;
    return lift(lead, rest->c, rest->g, tm);
}

SpecialSolution reduced_pt(Context& ctx, const Vec& f, int L) {
    const Tower& T = ctx.tower();
    const std::size_t n = f.size();
    if (n == 0) throw std::invalid_argument("reduced_pt: empty input");
    auto fallback = [&] {
        SolRow u = unit_first(n);
        return SpecialSolution{f[0], u.c, Elem(0), T.split_level(f[0])};
    };
    if (f[0].is_zero()) return SpecialSolution{Elem(0), unit_first(n).c, Elem(0), 0};
    if (L <= T.base()) {
        auto fe = first_entry_pt(ctx, f, L);
        if (!fe) return fallback();
        return SpecialSolution{Elem(0), fe->c, fe->g, 0};
    }
    auto sp = split_stage(ctx, f, L);
    if (!sp) return fallback();
    int m = degree_bound_pt(ctx, sp->fp, L);
    auto s = degree_reduction_reduced(ctx, m, sp->fp, L);
    if (!s) return fallback();
    SolRow row = lift(sp->b1, s->c, s->g, Elem(1));
    SpecialSolution out{s->psi, row.c, row.g, s->psi_level};
    if (ctx.options().check && !verify_special(T, f, out))
        throw std::logic_error("internal: special solution check failed");
    return out;
}

std::optional<SpecialSolution> degree_reduction_reduced(Context& ctx, int m, const Vec& f, int L) {
    const std::size_t n = f.size();
    if (f[0].is_zero()) return SpecialSolution{Elem(0), unit_first(n).c, Elem(0), 0};
    if (m <= 0) return reduced_pt(ctx, f, L - 1);
    SolutionBasis lead = lead_basis(ctx, m, coeffs(f, L, m), L);
    if (!usable(lead)) return std::nullopt;
    const Elem tm = tpow(L, m);
    auto rest = degree_reduction_reduced(ctx, m - 1, phi_of(ctx.tower(), lead, f, tm), L);
    if (!rest) return std::nullopt;
    SolRow row = lift(lead, rest->c, rest->g, tm);
    return SpecialSolution{rest->psi, row.c, row.g, rest->psi_level};
}

bool verify_special(const Tower& T, const Vec& f, const SpecialSolution& s) {
    if (s.c.size() != f.size() || s.c.empty() || s.c[0].is_zero()) return false;
    Elem rhs(0);
    for (std::size_t i = 0; i < f.size(); ++i) rhs += s.c[i] * f[i];
    return T.sigma(s.g) - s.g + s.psi == rhs;
}

}  // namespace pisigma
