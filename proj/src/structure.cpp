#include "pisigma/structure.hpp"

#include <stdexcept>

#include "pisigma/refined.hpp"

namespace pisigma {

ExtensionResult try_sigma_star_extension(Context& ctx, const Elem& f, const std::string& name) {
    const Tower& T = ctx.tower();
    bool before = ctx.bound_limited();
    auto fe = first_entry_pt(ctx, {f}, T.top());
    ExtensionResult r;
    r.verified = before || !ctx.bound_limited();
    if (fe) {
        r.telescoped = true;
        r.g = fe->g / fe->c[0];
        r.tower = T;
        r.level = 0;
        return r;
    }
    r.tower = T.with_sigma(name, f);
    r.level = r.tower.top();
    return r;
}

bool is_reduced_extension(Context& ctx, int L) {
    const Tower& T = ctx.tower();
    if (!T.is_sigma(L)) throw std::invalid_argument("is_reduced_extension: generator is not Sigma*");
    const Elem& beta = T.generator(L).beta;
    if (beta.level() <= T.base()) return true;
    SpecialSolution s = reduced_pt(ctx, {beta}, beta.level());
    return s.psi_level >= T.split_level(beta);
}

Elem ReductionMap::apply(const Elem& f) const {
    LevelMap M;
    M.fixed = tower.base();
    M.a.assign(shift.size(), Elem(1));
    M.b = shift;
    return M.apply(f);
}

std::vector<std::pair<std::string, std::string>> ReductionMap::describe(const Tower& old) const {
    std::vector<std::pair<std::string, std::string>> out;
    for (int L : replaced) out.emplace_back(old.generator(L).name, tower.str(Elem::gen(L) + shift[L]));
    return out;
}

namespace {
std::string fresh_name(const Tower& T) {
    for (int i = 1;; ++i) {
        std::string s = i == 1 ? "s" : "s" + std::to_string(i);
        if (!T.level_of(s)) return s;
    }
}
}  // namespace

ReductionMap transform_to_reduced(const Tower& old, Options opt) {
    ReductionMap R;
    R.tower = old;
    R.shift.assign(old.top() + 1, Elem(0));
    for (int L = old.base() + 1; L <= old.top(); ++L) {
        // Re-express the generator through the map fixed so far (levels < L).
        Generator g = old.generator(L);
        g.alpha = R.apply(g.alpha);
        g.beta = R.apply(g.beta);
        R.tower = R.tower.with_generator(L, g);
        if (g.kind != GenKind::Sigma) continue;
        for (int round = 0; round < 8; ++round) {
            Context ctx(R.tower, opt);
            const Elem beta = R.tower.generator(L).beta;
            if (beta.level() <= R.tower.base()) break;
            SpecialSolution s = reduced_pt(ctx, {beta}, beta.level());
            if (s.psi_level >= R.tower.split_level(beta)) break;
            // beta = sigma(G) - G + psi/c with G = g/c: t -> s + G.
            Elem G = s.g / s.c[0];
            R.shift[L] += G;
            Generator ng{fresh_name(R.tower), GenKind::Sigma, Elem(1), s.psi / s.c[0]};
            R.tower = R.tower.with_generator(L, ng);
            if (R.replaced.empty() || R.replaced.back() != L) R.replaced.push_back(L);
        }
    }
    return R;
}

std::optional<Elem> structural_telescope(Context& ctx, const Elem& f, int ground) {
    const Tower& T = ctx.tower();
    if (f.level() > ground) throw std::invalid_argument("structural_telescope: f above the ground field");
    Vec v{f};
    std::vector<int> S;
    for (int L = std::max(ground, T.base()) + 1; L <= T.top(); ++L) {
        if (T.is_sigma(L) && T.generator(L).beta.level() <= ground) {
            S.push_back(L);
            v.push_back(T.generator(L).beta);
        }
    }
    auto fe = first_entry_pt(ctx, v, ground);
    if (!fe) return std::nullopt;
    Elem g = fe->g;
    for (std::size_t j = 0; j < S.size(); ++j) g -= fe->c[j + 1] * Elem::gen(S[j]);
    return g / fe->c[0];
}

}  // namespace pisigma
