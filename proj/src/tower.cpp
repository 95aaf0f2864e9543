#include "pisigma/tower.hpp"

#include <stdexcept>

namespace pisigma {

Poly LevelMap::apply(const Poly& p) const {
    int L = p.var;
    if (L <= fixed || p.is_zero()) return p;
    Poly lin(L, {b[L], a[L]});
    Poly r = Poly::constant(L, apply(p.c.back()));
    for (int i = p.deg() - 1; i >= 0; --i) r = r * lin + Poly::constant(L, apply(p.c[i]));
    return r;
}

Elem LevelMap::apply(const Elem& f) const {
    int L = f.level();
    if (L <= fixed) return f;
    // An automorphism keeps num and den coprime.
    return Elem::coprime_fraction(apply(f.num(L)), apply(f.den(L)));
}

Tower::Tower(const std::vector<std::string>& params) {
    for (const auto& p : params) push(Generator{p, GenKind::Param, Elem(1), Elem(0)});
}

void Tower::push(const Generator& g) {
    if (g.kind == GenKind::Param) {
        if (depth() > 0) throw std::invalid_argument("parameters must precede difference generators");
        ++nparams_;
    } else if (g.alpha.level() > top() || g.beta.level() > top()) {
        throw std::invalid_argument("generator coefficients must lie in the tower below it");
    }
    if (g.kind == GenKind::Pi && g.alpha.is_zero()) throw std::invalid_argument("Pi generator with alpha = 0");
    gens_.push_back(g);
    int L = top();
    fwd_.fixed = bwd_.fixed = nparams_;
    fwd_.a.resize(L + 1, Elem(1));
    fwd_.b.resize(L + 1, Elem(0));
    bwd_.a.resize(L + 1, Elem(1));
    bwd_.b.resize(L + 1, Elem(0));
    if (g.kind == GenKind::Param) return;
    if (g.kind == GenKind::Pi) {
        fwd_.a[L] = g.alpha;
        bwd_.a[L] = bwd_.apply(g.alpha).inv();
    } else {
        fwd_.b[L] = g.beta;
        bwd_.b[L] = -bwd_.apply(g.beta);
    }
}

Tower Tower::with_pi(const std::string& name, const Elem& alpha) const {
    Tower t = *this;
    t.push(Generator{name, GenKind::Pi, alpha, Elem(0)});
    return t;
}

Tower Tower::with_sigma(const std::string& name, const Elem& beta) const {
    Tower t = *this;
    t.push(Generator{name, GenKind::Sigma, Elem(1), beta});
    return t;
}

Tower Tower::with_generator(int level, const Generator& g) const {
    Tower t;
    for (int L = 1; L <= top(); ++L) t.push(L == level ? g : generator(L));
    return t;
}

std::optional<int> Tower::level_of(const std::string& name) const {
    for (int L = 1; L <= top(); ++L)
        if (generator(L).name == name) return L;
    return std::nullopt;
}

std::vector<std::string> Tower::level_names() const {
    std::vector<std::string> n{""};
    for (const auto& g : gens_) n.push_back(g.name);
    return n;
}

bool Tower::is_rational_base(int level) const {
    return level == base() + 1 && level <= top() && generator(level).kind == GenKind::Sigma &&
           generator(level).beta.is_one();
}

Elem Tower::sigma(const Elem& f, long n) const {
    Elem r = f;
    for (long i = 0; i < n; ++i) r = fwd_.apply(r);
    for (long i = 0; i > n; --i) r = bwd_.apply(r);
    return r;
}

namespace {
// f is a polynomial in all levels above from, with coefficients at level <= from.
bool is_poly_above(const Elem& f, int from) {
    int L = f.level();
    if (L <= from) return true;
    if (!f.is_poly(L)) return false;
    for (const auto& c : f.num(L).c)
        if (!is_poly_above(c, from)) return false;
    return true;
}
}  // namespace

bool Tower::is_polynomial_sigma_tower(int from) const {
    from = std::max(from, base());
    for (int L = from + 1; L <= top(); ++L)
        if (generator(L).kind != GenKind::Sigma || !is_poly_above(generator(L).beta, from)) return false;
    return true;
}

}  // namespace pisigma
