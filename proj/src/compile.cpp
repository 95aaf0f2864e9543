#include "pisigma/compile.hpp"

#include <algorithm>
#include <functional>
#include <optional>

#include "pisigma/structure.hpp"

namespace pisigma {

// Canonical prims with exponents, the original atoms they came from, and
// the rational factor q with  prod(atoms) = q * prod(prims).
struct Compiler::Mono {
    std::map<std::string, long> prims;
    std::vector<std::pair<ExprP, long>> atoms;
    Elem q = Elem(1);
};

struct Compiler::Term {
    Mono m;
    Elem coeff;
};

namespace {

using Mono = Compiler::Mono;
using Term = Compiler::Term;
using Form = Compiler::Form;

// u = k_coef * index + sum par_i * p_i + c
struct Affine {
    mpq_class k = 0;
    std::map<std::string, mpq_class> par;
    mpq_class c = 0;

    bool closed() const { return k == 0 && par.empty(); }
};

Affine scale(Affine a, const mpq_class& s) {
    a.k *= s;
    a.c *= s;
    for (auto it = a.par.begin(); it != a.par.end();) {
        it->second *= s;
        it = it->second == 0 ? a.par.erase(it) : std::next(it);
    }
    return a;
}

Affine plus(Affine a, const Affine& b) {
    a.k += b.k;
    a.c += b.c;
    for (const auto& [n, v] : b.par) {
        a.par[n] += v;
        if (a.par[n] == 0) a.par.erase(n);
    }
    return a;
}

bool is_integer(const mpq_class& q) { return q.get_den() == 1; }

long to_long(const mpq_class& q, const std::string& what) {
    if (!is_integer(q) || !q.get_num().fits_slong_p()) throw CompileError(what + " must be an integer");
    return q.get_num().get_si();
}

std::optional<mpq_class> closed_value(const ExprP& e) {
    if (!free_symbols(e).empty()) return std::nullopt;
    return evaluate(e, {});
}

std::optional<Affine> affine(const ExprP& e, const std::string& index) {
    if (auto v = closed_value(e)) return Affine{0, {}, *v};
    switch (e->op) {
        case Op::Sym: {
            Affine a;
            if (e->name == index) a.k = 1;
            else a.par[e->name] = 1;
            return a;
        }
        case Op::Neg: {
            auto a = affine(e->a[0], index);
            if (!a) return std::nullopt;
            return scale(*a, -1);
        }
        case Op::Add:
        case Op::Sub: {
            auto a = affine(e->a[0], index), b = affine(e->a[1], index);
            if (!a || !b) return std::nullopt;
            return plus(*a, e->op == Op::Add ? *b : scale(*b, -1));
        }
        case Op::Mul: {
            auto a = affine(e->a[0], index), b = affine(e->a[1], index);
            if (!a || !b) return std::nullopt;
            if (a->closed()) return scale(*b, a->c);
            if (b->closed()) return scale(*a, b->c);
            return std::nullopt;
        }
        case Op::Div: {
            auto a = affine(e->a[0], index), b = affine(e->a[1], index);
            if (!a || !b || !b->closed() || b->c == 0) return std::nullopt;
            return scale(*a, 1 / b->c);
        }
        default: return std::nullopt;
    }
}

bool contains_sum(const ExprP& e) {
    if (e->op == Op::Sum || e->op == Op::Harm) return true;
    for (const auto& x : e->a)
        if (contains_sum(x)) return true;
    return false;
}

std::string par_key(const Affine& a) {
    std::string s;
    for (const auto& [n, v] : a.par) s += n + ":" + v.get_str() + ";";
    return s;
}

mpq_class floor_q(const mpq_class& q) {
    mpz_class f;
    mpz_fdiv_q(f.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
    return mpq_class(f);
}

// (u0 + n)! / u0! as a rational element.
Elem shift_quotient(const Elem& u0, long n) {
    Elem r(1);
    if (n >= 0)
        for (long j = 1; j <= n; ++j) r *= u0 + Elem(j);
    else
        for (long j = 0; j < -n; ++j) r /= u0 - Elem(j);
    return r;
}

std::string mono_key(const Mono& m) {
    std::string s;
    for (const auto& [k, e] : m.prims) s += k + "^" + std::to_string(e) + "|";
    return s;
}

Mono mono_mul(const Mono& a, const Mono& b) {
    Mono r = a;
    for (const auto& [k, e] : b.prims) {
        long& x = r.prims[k];
        x += e;
        if (x == 0) r.prims.erase(k);
    }
    for (const auto& [atom, e] : b.atoms) {
        auto it = std::find_if(r.atoms.begin(), r.atoms.end(), [&](const auto& p) { return same(p.first, atom); });
        if (it == r.atoms.end()) r.atoms.emplace_back(atom, e);
        else if ((it->second += e) == 0) r.atoms.erase(it);
    }
    r.q = a.q * b.q;
    return r;
}

Mono mono_inv(const Mono& a) {
    Mono r = a;
    for (auto& [k, e] : r.prims) e = -e;
    for (auto& [atom, e] : r.atoms) e = -e;
    r.q = a.q.inv();
    return r;
}

// Merges terms sharing a canonical prim product; drops zeros.
Form normalize(const Form& f) {
    Form out;
    std::map<std::string, std::size_t> pos;
    for (const auto& t : f) {
        if (t.coeff.is_zero()) continue;
        std::string key = mono_key(t.m);
        auto it = pos.find(key);
        if (it == pos.end()) {
            pos[key] = out.size();
            out.push_back(t);
        } else {
            Term& u = out[it->second];
            u.coeff += t.coeff * t.m.q / u.m.q;
        }
    }
    Form res;
    for (auto& t : out)
        if (!t.coeff.is_zero()) res.push_back(std::move(t));
    return res;
}

Form constant(const Elem& c) {
    if (c.is_zero()) return {};
    return {Term{Mono{}, c}};
}

Form add(const Form& a, const Form& b) {
    Form r = a;
    r.insert(r.end(), b.begin(), b.end());
    return normalize(r);
}

Form negate(Form a) {
    for (auto& t : a) t.coeff = -t.coeff;
    return a;
}

Form mul(const Form& a, const Form& b) {
    Form r;
    for (const auto& x : a)
        for (const auto& y : b) r.push_back(Term{mono_mul(x.m, y.m), x.coeff * y.coeff});
    return normalize(r);
}

Form inverse(const Form& a) {
    if (a.empty()) throw CompileError("division by zero");
    if (a.size() != 1) throw CompileError("unsupported: division by a sum of distinct product terms");
    return {Term{mono_inv(a[0].m), a[0].coeff.inv()}};
}

Form form_pow(const Form& a, long n) {
    if (n < 0) return form_pow(inverse(a), -n);
    Form r = constant(Elem(1)), b = a;
    while (n > 0) {
        if (n & 1) r = mul(r, b);
        b = mul(b, b);
        n >>= 1;
    }
    return r;
}

}  // namespace

Compiler::Compiler(std::string index, std::vector<std::string> params, Options opt)
    : index_(std::move(index)), params_(std::move(params)), opt_(opt), tower_(params_) {
    if (std::find(params_.begin(), params_.end(), index_) != params_.end())
        throw CompileError("index '" + index_ + "' is also a parameter");
    tower_ = tower_.with_sigma(index_, Elem(1));
    meaning_.push_back(nullptr);
    for (const auto& p : params_) meaning_.push_back(ex::sym(p));
    meaning_.push_back(ex::sym(index_));
    reserved_ = params_;
    reserved_.push_back(index_);
}

void Compiler::reserve(const ExprP& e) {
    if (e->op == Op::Sym || e->op == Op::Sum || e->op == Op::Prod) reserved_.push_back(e->name);
    for (const auto& x : e->a) reserve(x);
}

std::string Compiler::fresh(const std::string& stem) const {
    for (int i = 1;; ++i) {
        std::string s = i == 1 ? stem : stem + std::to_string(i);
        if (std::find(reserved_.begin(), reserved_.end(), s) == reserved_.end() && !tower_.level_of(s)) return s;
    }
}

void Compiler::add_generator(const Generator& g, ExprP meaning) {
    tower_ = g.kind == GenKind::Pi ? tower_.with_pi(g.name, g.alpha) : tower_.with_sigma(g.name, g.beta);
    meaning_.push_back(std::move(meaning));
}

void Compiler::note_flags(const Context& ctx) {
    for (const auto& s : ctx.limits())
        if (std::find(flags_.begin(), flags_.end(), s) == flags_.end()) flags_.push_back(s);
}

Elem Compiler::compile(const ExprP& e) {
    reserve(e);
    if (!frozen_) {
        // Scouting pass with every sum replaced by 1: creates the Pi
        // generators first so that products sit below sums in the tower.
        defer_ = true;
        try {
            to_elem(form(e));
        } catch (const std::exception&) {
            // The real pass reports genuine errors.
        }
        defer_ = false;
    }
    return to_elem(form(e));
}

Form Compiler::factorial(const ExprP& atom, const ExprP& arg, long exponent) {
    auto u = affine(arg, index_);
    if (!u) throw CompileError("unsupported: factorial of a non-affine argument " + print(arg));
    if (!is_integer(u->k)) throw CompileError("unsupported: factorial with non-integer index coefficient");
    long a = to_long(u->k, "index coefficient");
    Mono m;
    if (a == 0 && u->par.empty()) {
        long n = to_long(u->c, "factorial argument");
        if (n < 0) throw CompileError("factorial of a negative integer");
        return form_pow(constant(Elem(evaluate(ex::fact(ex::num(n)), {}))), exponent);
    }
    mpq_class n = floor_q(u->c), frac = u->c - n;
    Affine b0 = *u;
    b0.c = frac;
    std::string key = "F|" + std::to_string(a) + "|" + par_key(b0) + "|" + frac.get_str();
    Elem u0 = Elem(frac) + Elem(mpq_class(a)) * Elem::gen(index_level());
    for (const auto& [p, v] : b0.par) u0 += Elem(v) * Elem::gen(*tower_.level_of(p));
    if (!ratio_.count(key)) ratio_[key] = shift_quotient(u0, a);
    m.prims[key] = exponent;
    m.q = shift_quotient(u0, n.get_num().get_si()).pow(exponent);
    if (atom) m.atoms.emplace_back(atom, exponent);
    return {Term{m, Elem(1)}};
}

Form Compiler::power(const ExprP& atom, const mpq_class& c, const ExprP& exponent) {
    auto u = affine(exponent, index_);
    if (!u) throw CompileError("unsupported: non-affine exponent " + print(exponent));
    if (c == 0) throw CompileError("unsupported: symbolic power of zero");
    if (c == 1) return constant(Elem(1));
    long a = to_long(u->k, "index coefficient of an exponent");
    long n = to_long(u->c, "constant part of a symbolic exponent");
    Mono m;
    if (a != 0) {
        std::string key = "G|" + c.get_str();
        ratio_[key] = Elem(c);
        m.prims[key] = a;
    }
    if (!u->par.empty()) {
        std::string key = "Gp|" + c.get_str() + "|" + par_key(*u);
        ratio_[key] = Elem(1);
        m.prims[key] = 1;
    }
    m.q = Elem(c).pow(n);
    m.atoms.emplace_back(atom, 1);
    return {Term{m, Elem(1)}};
}

Form Compiler::product(const ExprP& atom, long lo, const ExprP& body_k, long offset) {
    if (contains_sum(body_k)) throw CompileError("unsupported: product over a body containing sums");
    Form bf = form(body_k);
    for (const auto& t : bf)
        if (!t.m.prims.empty()) throw CompileError("unsupported: product over a non-rational body");
    Elem b = to_elem(bf);
    std::string key = "P|" + std::to_string(lo) + "|" + print(body_k);
    if (!ratio_.count(key)) ratio_[key] = tower_.sigma(b, 1);
    Mono m;
    m.prims[key] = 1;
    Elem q(1);
    if (offset >= 0)
        for (long j = 1; j <= offset; ++j) q *= tower_.sigma(b, j);
    else
        for (long j = 0; j < -offset; ++j) q /= tower_.sigma(b, -j);
    m.q = q;
    m.atoms.emplace_back(atom, 1);
    return {Term{m, Elem(1)}};
}

Elem Compiler::sum_elem(long lo, const ExprP& body_k, const std::string& bound, bool harmonic) {
    if (defer_) {
        to_elem(form(body_k));
        return Elem(1);
    }
    std::string key = std::to_string(lo) + "|" + print(body_k);
    auto it = sums_.find(key);
    if (it != sums_.end()) return it->second;
    if (frozen_) throw CompileError("unsupported: a shifted summand needs a new sum " + print(body_k));
    Elem b = to_elem(form(body_k));
    Elem beta = tower_.sigma(b, 1);
    Context ctx(tower_, opt_);
    std::string name = fresh(harmonic ? "h" : "t");
    ExtensionResult r = try_sigma_star_extension(ctx, beta, name);
    note_flags(ctx);
    ExprP meaning = harmonic ? ex::call(Op::Harm, {ex::sym(index_)})
                             : ex::call(Op::Sum, {ex::num(lo), ex::sym(index_), substitute(body_k, index_, ex::sym(bound))},
                                        bound);
    Elem out;
    if (r.telescoped) {
        // Sum_{i=lo}^k body(i) = g(k) + C; fix C at the first point where g is defined.
        std::optional<mpq_class> C;
        for (long k0 = lo - 1; k0 <= lo + 30 && !C; ++k0) {
            try {
                Env env{{index_, k0}};
                C = evaluate(meaning, env) - value(r.g, env);
            } catch (const std::domain_error&) {
            }
        }
        if (!C) throw CompileError("unsupported: telescoping inner sum with a parameter-dependent constant");
        out = r.g + Elem(*C);
    } else {
        add_generator(r.tower.generator(r.level), meaning);
        out = Elem::gen(r.level);
    }
    sums_[key] = out;
    return out;
}

Form Compiler::form(const ExprP& e) {
    if (auto v = closed_value(e)) return constant(Elem(*v));
    const auto& a = e->a;
    switch (e->op) {
        case Op::Num: return constant(Elem(e->num));
        case Op::Sym: {
            auto L = tower_.level_of(e->name);
            if (!L || *L > index_level()) throw CompileError("unbound symbol '" + e->name + "'");
            return constant(Elem::gen(*L));
        }
        case Op::Add: return add(form(a[0]), form(a[1]));
        case Op::Sub: return add(form(a[0]), negate(form(a[1])));
        case Op::Neg: return negate(form(a[0]));
        case Op::Mul: return mul(form(a[0]), form(a[1]));
        case Op::Div: return mul(form(a[0]), inverse(form(a[1])));
        case Op::Pow: {
            if (auto n = closed_value(a[1])) return form_pow(form(a[0]), to_long(*n, "exponent"));
            auto c = closed_value(a[0]);
            if (!c) throw CompileError("unsupported: symbolic exponent on a non-constant base " + print(e));
            return power(e, *c, a[1]);
        }
        case Op::Fact: return factorial(e, a[0], 1);
        case Op::Binom: {
            if (auto v = closed_value(a[1])) {
                long n = to_long(*v, "binomial lower argument");
                if (n < 0) return {};
                Form top = form(a[0]), r = constant(Elem(1));
                for (long j = 0; j < n; ++j) r = mul(r, add(top, constant(Elem(-j))));
                return mul(r, constant(Elem(evaluate(ex::fact(ex::num(n)), {})).inv()));
            }
            Form r = factorial(nullptr, a[0], 1);
            r = mul(r, factorial(nullptr, a[1], -1));
            r = mul(r, factorial(nullptr, ex::sub(a[0], a[1]), -1));
            r[0].m.atoms.emplace_back(e, 1);
            return r;
        }
        case Op::Poch: {
            if (auto v = closed_value(a[1])) {
                long n = to_long(*v, "pochhammer length");
                if (n < 0) throw CompileError("pochhammer with negative length");
                Form x = form(a[0]), r = constant(Elem(1));
                for (long j = 0; j < n; ++j) r = mul(r, add(x, constant(Elem(j))));
                return r;
            }
            Form r = factorial(nullptr, ex::sub(ex::add(a[0], a[1]), ex::num(1)), 1);
            r = mul(r, factorial(nullptr, ex::sub(a[0], ex::num(1)), -1));
            r[0].m.atoms.emplace_back(e, 1);
            return r;
        }
        case Op::Harm: {
            auto u = affine(a[0], index_);
            if (!u || u->k != 1 || !u->par.empty())
                throw CompileError("unsupported: harmonic number of " + print(a[0]));
            long c = to_long(u->c, "harmonic offset");
            Elem h = sum_elem(1, ex::div(ex::num(1), ex::sym(index_)), "i", true);
            return constant(tower_.sigma(h, c));
        }
        case Op::Sum:
        case Op::Prod: {
            const std::string& bv = e->name;
            if (bv != index_ && depends_on(a[2], index_))
                throw CompileError("unsupported: body of " + print(e) + " depends on the outer index");
            auto lo = closed_value(a[0]);
            if (!lo) throw CompileError("unsupported: non-numeric lower bound in " + print(e));
            long l = to_long(*lo, "lower bound");
            auto u = affine(a[1], index_);
            if (!u || u->k != 1 || !u->par.empty())
                throw CompileError("unsupported: upper bound of " + print(e) + " must be index + integer");
            long c = to_long(u->c, "upper bound offset");
            ExprP body_k = substitute(a[2], bv, ex::sym(index_));
            if (e->op == Op::Prod) return product(e, l, body_k, c);
            bool harmonic = l == 1 && same(body_k, ex::div(ex::num(1), ex::sym(index_)));
            return constant(tower_.sigma(sum_elem(l, body_k, bv, harmonic), c));
        }
    }
    throw CompileError("unsupported expression " + print(e));
}

Elem Compiler::to_elem(const Form& f) {
    Elem out(0);
    for (const auto& t : f) {
        if (t.m.prims.empty()) {
            out += t.coeff * t.m.q;
            continue;
        }
        std::string key = mono_key(t.m);
        auto it = class_.find(key);
        if (it == class_.end()) {
            if (frozen_) throw CompileError("non-rational shift quotient: a shifted summand leaves its class");
            Elem alpha = tower_.sigma(t.m.q, 1) / t.m.q;
            for (const auto& [p, e] : t.m.prims) alpha *= ratio_.at(p).pow(e);
            if (alpha.is_one()) throw CompileError("unsupported: a product factor constant in the index");
            if (alpha == Elem(-1)) throw CompileError("unsupported: (-1)^k without a hypergeometric companion");
            ExprP meaning;
            for (const auto& [atom, e] : t.m.atoms) {
                ExprP x = e == 1 ? atom : ex::pow(atom, ex::num(e));
                meaning = meaning ? ex::mul(meaning, x) : x;
            }
            add_generator(Generator{fresh("p"), GenKind::Pi, alpha, Elem(0)}, meaning);
            it = class_.emplace(key, ClassInfo{tower_.top(), t.m.q}).first;
        }
        out += t.coeff * (t.m.q / it->second.q) * Elem::gen(it->second.level);
    }
    return out;
}

mpq_class Compiler::value(const Elem& f, const Env& env) const {
    std::vector<std::optional<mpq_class>> vals(tower_.top() + 1);
    auto level_value = [&](int L) -> const mpq_class& {
        if (!vals[L]) vals[L] = evaluate(meaning_[L], env);
        return *vals[L];
    };
    std::function<mpq_class(const Elem&)> ev = [&](const Elem& x) -> mpq_class {
        if (x.is_rational()) return x.rational();
        int L = x.level();
        const mpq_class& t = level_value(L);
        auto horner = [&](const Poly& p) {
            mpq_class s = 0;
            for (int i = p.deg(); i >= 0; --i) s = s * t + ev(p.c[i]);
            return s;
        };
        mpq_class d = horner(x.den(L));
        if (sgn(d) == 0) throw std::domain_error("pole of " + tower_.str(x));
        return horner(x.num(L)) / d;
    };
    return ev(f);
}

namespace {

// e with the levels that have a value replaced by it.
Elem specialize(const Elem& e, const std::vector<std::optional<mpq_class>>& v) {
    if (e.is_rational()) return e;
    int L = e.level();
    auto poly = [&](const Poly& p) {
        Poly out(L);
        for (const auto& c : p.c) out.c.push_back(specialize(c, v));
        out.trim();
        return out;
    };
    Poly n = poly(e.num(L)), d = poly(e.den(L));
    if (!v[L]) return Elem::fraction(n, d);
    auto horner = [&](const Poly& p) {
        Elem s(0);
        for (int i = p.deg(); i >= 0; --i) s = s * Elem(*v[L]) + p.c[i];
        return s;
    };
    Elem dv = horner(d);
    if (dv.is_zero()) throw std::domain_error("parameter value at a pole");
    return horner(n) / dv;
}

}  // namespace

std::vector<mpq_class> Compiler::sequence(const Elem& f, const Env& params, long from, long to) const {
    std::vector<std::optional<mpq_class>> v(tower_.top() + 1);
    for (int L = 1; L <= tower_.base(); ++L) {
        auto it = params.find(tower_.generator(L).name);
        if (it == params.end()) throw std::domain_error("no value for parameter " + tower_.generator(L).name);
        v[L] = it->second;
    }
    Tower T = tower_;
    for (int L = tower_.base() + 1; L <= tower_.top(); ++L) {
        Generator g = tower_.generator(L);
        g.alpha = specialize(g.alpha, v);
        g.beta = specialize(g.beta, v);
        T = T.with_generator(L, g);
    }
    Env env = params;
    env[index_] = from;
    std::vector<mpq_class> out;
    Elem cur = specialize(f, v);
    for (long k = from; k <= to; ++k) {
        out.push_back(value(cur, env));
        if (k < to) cur = T.sigma(cur);
    }
    return out;
}

ExprP Compiler::to_expr(const Elem& f) const {
    ExprP e = parse(tower_.str(f));
    for (int L = index_level() + 1; L <= tower_.top(); ++L) e = substitute(e, tower_.generator(L).name, meaning_[L]);
    return e;
}

std::vector<mpq_class> evaluate_sequence(const ExprP& e, const std::string& index, long from, long to,
                                         const Env& params) {
    std::vector<mpq_class> out;
    Env env = params;
    for (long k = from; k <= to; ++k) {
        env[index] = k;
        out.push_back(evaluate(e, env));
    }
    return out;
}

}  // namespace pisigma
