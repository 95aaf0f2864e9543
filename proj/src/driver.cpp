#include "pisigma/driver.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "pisigma/compile.hpp"
#include "pisigma/linsolve.hpp"
#include "pisigma/pt.hpp"
#include "pisigma/refined.hpp"

namespace pisigma {

Mode parse_mode(const std::string& s) {
    if (s == "full" || s == "classical") return Mode::Full;
    if (s == "first-entry") return Mode::FirstEntry;
    if (s == "reduced") return Mode::Reduced;
    throw std::invalid_argument("unknown mode '" + s + "'");
}

std::string mode_name(Mode m) {
    switch (m) {
        case Mode::Full: return "full";
        case Mode::FirstEntry: return "first-entry";
        case Mode::Reduced: return "reduced";
    }
    return "";
}

namespace {

std::vector<GeneratorInfo> tower_info(const Compiler& C) {
    const Tower& T = C.tower();
    std::vector<GeneratorInfo> out;
    for (int L = 1; L <= T.top(); ++L) {
        const Generator& g = T.generator(L);
        GeneratorInfo gi;
        gi.name = g.name;
        gi.kind = g.kind == GenKind::Param ? "param" : g.kind == GenKind::Pi ? "pi" : "sigma";
        gi.alpha = T.str(g.alpha);
        gi.beta = T.str(g.beta);
        gi.meaning = print(C.meaning(L));
        out.push_back(std::move(gi));
    }
    return out;
}

struct Solution {
    Vec c;
    Elem g, psi;
};

std::optional<Solution> solve(Context& ctx, const Vec& f, int level, Mode mode) {
    switch (mode) {
        case Mode::Full: {
            SolutionBasis b = first_row_reduce(solve_pt(ctx, f, level));
            if (b.empty() || b.rows[0].c[0].is_zero()) return std::nullopt;
            return Solution{b.rows[0].c, b.rows[0].g, Elem(0)};
        }
        case Mode::FirstEntry: {
            auto r = first_entry_pt(ctx, f, level);
            if (!r) return std::nullopt;
            return Solution{r->c, r->g, Elem(0)};
        }
        case Mode::Reduced: {
            SpecialSolution s = reduced_pt(ctx, f, level);
            return Solution{s.c, s.g, s.psi};
        }
    }
    return std::nullopt;
}

Certificate certificate(const Tower& T, const Solution& s) {
    Certificate c;
    for (const auto& x : s.c) c.c.push_back(T.str(x));
    c.g = T.str(s.g);
    c.psi = T.str(s.psi);
    c.psi_level = T.split_level(s.psi);
    return c;
}

void add_flags(std::vector<std::string>& out, const std::vector<std::string>& in) {
    for (const auto& s : in)
        if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
}

ExprP plus(ExprP a, ExprP b) {
    if (!a) return b;
    if (b->op == Op::Neg) return ex::sub(a, b->a[0]);
    return ex::add(a, b);
}

ExprP scaled(const ExprP& coef, const ExprP& e) {
    if (coef->op == Op::Num && coef->num == 1) return e;
    if (coef->op == Op::Num && coef->num == -1) return ex::neg(e);
    return ex::mul(coef, e);
}

long integer_value(const ExprP& e, const std::string& what) {
    if (!free_symbols(e).empty()) throw std::invalid_argument(what + " must be an integer constant");
    mpq_class v = evaluate(e, {});
    if (v.get_den() != 1 || !v.get_num().fits_slong_p()) throw std::invalid_argument(what + " must be an integer");
    return v.get_num().get_si();
}

std::string fresh_name(const std::string& stem, const std::set<std::string>& used) {
    std::string s = stem;
    for (int i = 1; used.count(s); ++i) s = stem + std::to_string(i);
    return s;
}

mpq_class partial_sum(const ExprP& F, const std::string& index, long from, long to, const Env& env) {
    mpq_class s = 0;
    Env e = env;
    for (long k = from; k <= to; ++k) {
        e[index] = k;
        s += evaluate(F, e);
    }
    return s;
}

int lead_sign(const Elem& x) {
    if (x.is_rational()) return sgn(x.rational());
    return lead_sign(x.num(x.level()).lc());
}

}  // namespace

TelescopeReport telescope(const std::string& text, const TelescopeOptions& opt) {
    ExprP e = parse(text);
    TelescopeReport rep;
    rep.mode = opt.mode;
    ExprP F = e;
    rep.index = "k";
    rep.lower = opt.lower;
    if (e->op == Op::Sum) {
        rep.index = e->name;
        rep.lower = integer_value(e->a[0], "lower summation bound");
        if (e->a[1]->op != Op::Sym) throw std::invalid_argument("upper summation bound must be a symbol");
        rep.bound = e->a[1]->name;
        F = e->a[2];
    } else {
        rep.bound = fresh_name("m", free_symbols(F));
    }
    if (rep.bound == rep.index) throw std::invalid_argument("upper bound coincides with the summation index");
    std::set<std::string> fs = free_symbols(F);
    if (fs.count(rep.bound)) throw std::invalid_argument("summand depends on the upper bound " + rep.bound);
    fs.erase(rep.index);
    std::vector<std::string> params(fs.begin(), fs.end());
    const std::string& k = rep.index;
    const std::string& m = rep.bound;
    rep.lhs = ex::call(Op::Sum, {ex::num(rep.lower), ex::sym(m), F}, k);

    Compiler C(k, params, opt.solver);
    C.reserve(ex::sym(m));
    Elem f = C.compile(F);
    const Tower& T = C.tower();
    rep.tower = tower_info(C);
    Context ctx(T, opt.solver);
    auto sol = solve(ctx, {f}, T.top(), opt.mode);
    add_flags(rep.flags, C.flags());
    add_flags(rep.flags, ctx.limits());
    if (!sol) return rep;
    rep.found = true;
    rep.certificate = certificate(T, *sol);
    Elem G = sol->g / sol->c[0], Psi = sol->psi / sol->c[0];

    std::vector<Env> envs;
    if (params.empty()) {
        envs.push_back({});
    } else {
        for (int s = 0; s < 2; ++s) {
            Env env;
            for (std::size_t i = 0; i < params.size(); ++i) env[params[i]] = 3 + (1 + s) * static_cast<long>(i) + 2 * s;
            envs.push_back(env);
        }
    }

    // delta: the first point from which G and Psi follow their shift
    // relations without poles over the whole verification range.
    long delta = rep.lower;
    std::vector<std::vector<mpq_class>> gs, ps;
    for (;; ++delta) {
        if (delta > opt.verify_to) throw VerificationError("no pole-free start below the verification bound");
        gs.clear();
        ps.clear();
        try {
            for (const auto& env : envs) {
                gs.push_back(C.sequence(G, env, delta, opt.verify_to + 1));
                ps.push_back(C.sequence(Psi, env, delta, opt.verify_to));
                partial_sum(F, k, rep.lower, opt.verify_to, env);
            }
        } catch (const std::domain_error&) {
            continue;
        }
        break;
    }
    rep.delta = delta;

    // rhs = G(m+1) - G(delta) + sum_{k=lo}^{delta-1} F + sum_{k=delta}^m Psi
    ExprP rhs;
    if (params.empty()) {
        mpq_class cst = partial_sum(F, k, rep.lower, delta - 1, {}) - gs[0][0];
        rhs = substitute(C.to_expr(T.sigma(G) + Elem(cst)), k, ex::sym(m));
    } else {
        rhs = substitute(C.to_expr(T.sigma(G)), k, ex::sym(m));
        rhs = plus(rhs, ex::neg(substitute(C.to_expr(G), k, ex::num(delta))));
        if (delta > rep.lower)
            rhs = plus(rhs, ex::call(Op::Sum, {ex::num(rep.lower), ex::num(delta - 1), F}, k));
    }
    if (!Psi.is_zero()) {
        ExprP body = C.to_expr(Psi);
        ExprP s = ex::call(Op::Sum, {ex::num(delta), ex::sym(m), body}, k);
        rhs = rhs->op == Op::Num && rhs->num == 0 ? s : plus(rhs, s);
    }
    rep.rhs = rhs;

    // Route 1: through the certificate's shift relations. Route 2: the
    // emitted text evaluated directly, wherever it has no removable pole.
    bool text_poles = false;
    for (std::size_t s = 0; s < envs.size(); ++s) {
        const Env& env = envs[s];
        mpq_class head = partial_sum(F, k, rep.lower, delta - 1, env);
        mpq_class psum = 0;
        for (long mm = delta; mm <= opt.verify_to; ++mm) {
            psum += ps[s][mm - delta];
            mpq_class lhs = partial_sum(F, k, rep.lower, mm, env);
            mpq_class val = gs[s][mm + 1 - delta] - gs[s][0] + head + psum;
            if (lhs != val)
                throw VerificationError("certificate identity fails at " + m + " = " + std::to_string(mm));
            Env em = env;
            em[m] = mm;
            try {
                if (evaluate(rhs, em) != lhs)
                    throw VerificationError("emitted identity fails at " + m + " = " + std::to_string(mm));
            } catch (const std::domain_error&) {
                text_poles = true;
            }
        }
    }
    if (text_poles) rep.flags.push_back("identity text has removable poles; verified through the shift relations");
    rep.verified_from = delta;
    rep.verified_to = opt.verify_to;
    return rep;
}

RecurrenceReport zeilberger(const std::string& text, const ZeilbergerOptions& opt) {
    if (opt.max_order < 0) throw std::invalid_argument("max order must be >= 0");
    ExprP e = parse(text);
    RecurrenceReport rep;
    rep.mode = opt.mode;
    rep.param = opt.param;
    const std::string& r = opt.param;
    ExprP F = e, upper;
    long lo = opt.lower;
    if (e->op == Op::Sum) {
        rep.index = e->name;
        lo = integer_value(e->a[0], "lower summation bound");
        upper = e->a[1];
        F = e->a[2];
    } else {
        if (opt.upper.empty()) throw std::invalid_argument("a bare summand needs an upper bound");
        upper = parse(opt.upper);
        std::set<std::string> fs = free_symbols(F);
        for (const auto& n : opt.index_names)
            if (fs.count(n)) rep.index = n;
        if (rep.index.empty()) throw std::invalid_argument("no summation index among the free symbols");
    }
    const std::string& k = rep.index;
    std::set<std::string> fs = free_symbols(F);
    fs.erase(k);
    if (!fs.count(r)) throw std::invalid_argument("summand does not depend on " + r);
    if (fs.size() != 1) throw std::invalid_argument("the summand may contain only the parameter " + r);
    for (const auto& s : free_symbols(upper))
        if (s != r) throw std::invalid_argument("upper bound may depend only on " + r);
    // hi(r) = a r + b with integers a >= 0 and b.
    mpq_class u0 = evaluate(upper, {{r, 0}}), u1 = evaluate(upper, {{r, 1}}), u2 = evaluate(upper, {{r, 2}});
    mpq_class slope = u1 - u0;
    if (u2 - u1 != slope || slope.get_den() != 1 || u0.get_den() != 1 || sgn(slope) < 0)
        throw std::invalid_argument("upper bound must be a r + b with integers a >= 0, b");
    const long a = slope.get_num().get_si(), b = u0.get_num().get_si();
    auto hi = [&](long rv) -> long { return a * rv + b; };
    rep.sum = ex::call(Op::Sum, {ex::num(lo), upper, F}, k);

    Compiler C(k, {r}, opt.solver);
    C.reserve(upper);
    Vec f{C.compile(F)};
    C.freeze(true);
    std::vector<ExprP> Fs{F};
    const Tower& T = C.tower();
    const int top = T.top();
    rep.tower = tower_info(C);
    add_flags(rep.flags, C.flags());

    std::optional<Solution> sol;
    int n = 0;
    for (; n <= opt.max_order; ++n) {
        if (n > 0) {
            Fs.push_back(substitute(F, r, ex::add(ex::sym(r), ex::num(n))));
            f.push_back(C.compile(Fs.back()));
        }
        Context ctx(T, opt.solver);
        auto s = solve(ctx, f, top, opt.mode);
        rep.tried.push_back(n);
        add_flags(rep.flags, ctx.limits());
        if (!s) continue;
        if (opt.mode == Mode::Reduced && !s->psi.is_zero() && T.split_level(s->psi) >= T.split_level(f[0])) continue;
        // A psi that is a rational multiple of its top Pi generator t up to
        // a telescoping part becomes lambda * t with lambda constant.
        int L = s->psi.level();
        if (!s->psi.is_zero() && T.is_pi(L)) {
            auto w = first_entry_pt(ctx, {s->psi, T.gen(L)}, L);
            if (w) {
                s->psi = -(w->c[1] / w->c[0]) * T.gen(L);
                s->g += w->g / w->c[0];
            }
        }
        sol = s;
        break;
    }
    if (!sol) return rep;

    // Coefficients as primitive polynomials with a positive leading term.
    Elem scale = content_scale(sol->c);
    if (lead_sign(sol->c[0] * scale) < 0) scale = -scale;
    for (auto& c : sol->c) c *= scale;
    sol->g *= scale;
    sol->psi *= scale;
    {
        Elem lhs = T.sigma(sol->g) - sol->g + sol->psi, rhs(0);
        for (std::size_t i = 0; i < f.size(); ++i) rhs += sol->c[i] * f[i];
        if (lhs != rhs) throw std::logic_error("internal: creative telescoping certificate does not hold");
    }
    rep.found = true;
    rep.order = n;
    rep.certificate = certificate(T, *sol);
    for (const auto& c : sol->c) rep.coeffs.push_back(parse(T.str(c)));

    // Pole-free start of the certificate for every verified r.
    std::vector<long> rs;
    for (long rv = opt.verify_from; rv <= opt.verify_to; ++rv) rs.push_back(rv);
    auto M = [&](long rv) -> long { return hi(rv) + a * n; };
    long delta = lo;
    for (;; ++delta) {
        if (delta > lo + 64) throw VerificationError("no pole-free start for the certificate");
        try {
            for (long rv : rs)
                if (M(rv) + 1 >= delta) {
                    C.sequence(sol->g, {{r, rv}}, delta, M(rv) + 1);
                    C.sequence(sol->psi, {{r, rv}}, delta, M(rv));
                }
        } catch (const std::domain_error&) {
            continue;
        }
        break;
    }
    rep.delta = delta;
    rs.erase(std::remove_if(rs.begin(), rs.end(), [&](long rv) -> mpq_class { return M(rv) < delta - 1; }), rs.end());
    if (rs.empty()) throw VerificationError("empty verification range");

    // Summing the certificate over k = delta..M(r):
    //   sum_i c_i S(r+i) = g(M+1) - g(delta) + sum_{k=delta}^{M} psi
    //                      + sum_i c_i (heads below delta - tails above hi(r+i)).
    struct Term {
        ExprP text;
        std::function<mpq_class(long)> value;
        std::string label;  // short form for the vanishing list
    };
    std::vector<Term> terms;
    auto seq = [&](const Elem& x, long rv, long from, long to) { return C.sequence(x, {{r, rv}}, from, to); };
    // a r + c as text.
    auto aff = [&](long c) {
        ExprP t = a == 0 ? nullptr : a == 1 ? ex::sym(r) : ex::mul(ex::num(a), ex::sym(r));
        if (!t) return ex::num(c);
        return c == 0 ? t : c > 0 ? ex::add(t, ex::num(c)) : ex::sub(t, ex::num(-c));
    };
    auto cval = [&](std::size_t i, long rv) { return C.value(sol->c[i], {{r, rv}}); };
    ExprP Mtext = a * n == 0 ? upper : aff(b + a * n);
    ExprP gtext = C.to_expr(sol->g);
    terms.push_back({substitute(gtext, k, aff(b + a * n + 1)),
                     [&](long rv) -> mpq_class { return seq(sol->g, rv, delta, M(rv) + 1).back(); },
                     "g(" + print(aff(b + a * n + 1)) + ")"});
    terms.push_back({ex::neg(substitute(gtext, k, ex::num(delta))),
                     [&](long rv) -> mpq_class { return -seq(sol->g, rv, delta, delta)[0]; },
                     "-g(" + std::to_string(delta) + ")"});
    if (!sol->psi.is_zero()) {
        int L = sol->psi.level();
        Elem lambda = T.is_pi(L) ? sol->psi / T.gen(L) : Elem(0);
        if (T.is_pi(L) && lambda.level() <= T.base()) {
            ExprP P = C.meaning(L), lt = parse(T.str(lambda));
            terms.push_back({scaled(lt, ex::call(Op::Sum, {ex::num(lo), upper, P}, k)), [&, P, lambda](long rv) -> mpq_class {
                                 return C.value(lambda, {{r, rv}}) * partial_sum(P, k, lo, hi(rv), {{r, rv}});
                             }});
            if (delta > lo)
                terms.push_back({ex::neg(scaled(lt, ex::call(Op::Sum, {ex::num(lo), ex::num(delta - 1), P}, k))),
                                 [&, P, lambda](long rv) -> mpq_class {
                                     return -C.value(lambda, {{r, rv}}) * partial_sum(P, k, lo, delta - 1, {{r, rv}});
                                 }});
            if (a * n > 0)
                terms.push_back({scaled(lt, ex::call(Op::Sum, {aff(b + 1), Mtext, P}, k)),
                                 [&, P, lambda](long rv) -> mpq_class {
                                     return C.value(lambda, {{r, rv}}) * partial_sum(P, k, hi(rv) + 1, M(rv), {{r, rv}});
                                 }});
        } else {
            terms.push_back({ex::call(Op::Sum, {ex::num(delta), Mtext, C.to_expr(sol->psi)}, k), [&](long rv) -> mpq_class {
                                 mpq_class s = 0;
                                 for (const auto& x : seq(sol->psi, rv, delta, M(rv))) s += x;
                                 return s;
                             }});
        }
    }
    for (std::size_t i = 0; i < Fs.size(); ++i) {
        ExprP ci = rep.coeffs[i];
        if (delta > lo)
            terms.push_back({scaled(ci, ex::call(Op::Sum, {ex::num(lo), ex::num(delta - 1), Fs[i]}, k)),
                             [&, i](long rv) -> mpq_class { return cval(i, rv) * partial_sum(Fs[i], k, lo, delta - 1, {{r, rv}}); }});
        long gap = a * static_cast<long>(n - i);
        if (gap > 0) {
            terms.push_back({ex::neg(scaled(ci, ex::call(Op::Sum, {aff(b + a * static_cast<long>(i) + 1), Mtext, Fs[i]}, k))),
                             [&, i](long rv) -> mpq_class {
                                 return -cval(i, rv) * partial_sum(Fs[i], k, hi(rv + static_cast<long>(i)) + 1, M(rv),
                                                                   {{r, rv}});
                             }});
        }
    }

    // Terms that vanish on the whole range are listed, not emitted.
    std::vector<std::vector<mpq_class>> kept;
    ExprP rhs;
    for (auto& t : terms) {
        std::vector<mpq_class> vals;
        bool zero = true;
        for (long rv : rs) {
            vals.push_back(t.value(rv));
            zero = zero && vals.back() == 0;
        }
        if (zero) {
            rep.vanishing.push_back(t.label.empty() ? print(t.text) : t.label);
            continue;
        }
        kept.push_back(std::move(vals));
        rhs = plus(rhs, t.text);
    }
    rep.rhs = rhs ? rhs : ex::num(0);

    for (std::size_t j = 0; j < rs.size(); ++j) {
        long rv = rs[j];
        mpq_class lhs = 0, val = 0;
        for (std::size_t i = 0; i < Fs.size(); ++i)
            lhs += cval(i, rv) * evaluate(rep.sum, {{r, rv + static_cast<long>(i)}});
        for (const auto& v : kept) val += v[j];
        if (lhs != val) throw VerificationError("recurrence fails at " + r + " = " + std::to_string(rv));
    }
    rep.verified_from = rs.front();
    rep.verified_to = rs.back();
    return rep;
}

IdentityCheck check_identity(const std::string& lhs, const std::string& rhs, long from, long to) {
    ExprP a = parse(lhs), b = parse(rhs);
    std::set<std::string> fs = free_symbols(a);
    for (const auto& s : free_symbols(b)) fs.insert(s);
    if (fs.size() > 1) throw std::invalid_argument("identity has more than one free symbol");
    IdentityCheck out;
    out.variable = fs.empty() ? "k" : *fs.begin();
    out.from = from;
    out.to = to;
    for (long v = from; v <= to; ++v) {
        Env env{{out.variable, v}};
        std::string va, vb;
        try {
            va = evaluate(a, env).get_str();
        } catch (const std::domain_error&) {
            va = "undefined";
        }
        try {
            vb = evaluate(b, env).get_str();
        } catch (const std::domain_error&) {
            vb = "undefined";
        }
        if (va != vb || va == "undefined") {
            out.ok = false;
            out.first_mismatch = v;
            out.lhs_value = va;
            out.rhs_value = vb;
            break;
        }
    }
    return out;
}

}  // namespace pisigma
