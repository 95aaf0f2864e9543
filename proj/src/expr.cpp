#include "pisigma/expr.hpp"

#include <cctype>
#include <optional>

namespace pisigma {

namespace ex {
namespace {
ExprP node(Op op, std::vector<ExprP> a = {}, std::string name = "") {
    auto e = std::make_shared<Expr>();
    e->op = op;
    e->a = std::move(a);
    e->name = std::move(name);
    return e;
}
}  // namespace
ExprP num(const mpq_class& q) {
    auto e = std::make_shared<Expr>();
    e->op = Op::Num;
    e->num = q;
    e->num.canonicalize();
    return e;
}
ExprP sym(const std::string& s) { return node(Op::Sym, {}, s); }
ExprP add(ExprP a, ExprP b) { return node(Op::Add, {std::move(a), std::move(b)}); }
ExprP sub(ExprP a, ExprP b) { return node(Op::Sub, {std::move(a), std::move(b)}); }
ExprP mul(ExprP a, ExprP b) { return node(Op::Mul, {std::move(a), std::move(b)}); }
ExprP div(ExprP a, ExprP b) { return node(Op::Div, {std::move(a), std::move(b)}); }
ExprP neg(ExprP a) { return node(Op::Neg, {std::move(a)}); }
ExprP pow(ExprP a, ExprP b) { return node(Op::Pow, {std::move(a), std::move(b)}); }
ExprP fact(ExprP a) { return node(Op::Fact, {std::move(a)}); }
ExprP call(Op op, std::vector<ExprP> args, const std::string& index) { return node(op, std::move(args), index); }
}  // namespace ex

// ---------------------------------------------------------------- parser

namespace {

class Parser {
public:
    explicit Parser(const std::string& s) : s_(s) {}

    ExprP run() {
        ExprP e = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return e;
    }

private:
    const std::string& s_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(pos_ >= s_.size() ? "unexpected end of input" : msg, pos_);
    }
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool eat(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!eat(c)) fail(std::string("expected '") + c + "'");
    }

    ExprP expr() {
        ExprP e = term();
        while (true) {
            if (eat('+')) e = ex::add(e, term());
            else if (eat('-')) e = ex::sub(e, term());
            else return e;
        }
    }
    ExprP term() {
        ExprP e = unary();
        while (true) {
            if (eat('*')) e = ex::mul(e, unary());
            else if (eat('/')) e = ex::div(e, unary());
            else return e;
        }
    }
    ExprP unary() {
        if (eat('-')) {
            ExprP x = unary();
            if (x->op == Op::Num && x->num != 0) return ex::num(-x->num);  // keeps "-0" printable
            return ex::neg(x);
        }
        return power();
    }
    ExprP power() {
        ExprP b = postfix();
        if (eat('^')) return ex::pow(b, unary());
        return b;
    }
    ExprP postfix() {
        ExprP e = primary();
        while (eat('!')) e = ex::fact(e);
        return e;
    }
    std::string ident() {
        skip();
        std::size_t st = pos_;
        while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
        return s_.substr(st, pos_ - st);
    }
    ExprP primary() {
        skip();
        if (pos_ >= s_.size()) fail("");
        char c = s_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t st = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            return ex::num(mpq_class(mpz_class(s_.substr(st, pos_ - st))));
        }
        if (c == '(') {
            ++pos_;
            ExprP e = expr();
            expect(')');
            return e;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t at = pos_;
            std::string id = ident();
            skip();
            bool is_call = pos_ < s_.size() && s_[pos_] == '(';
            static const std::map<std::string, std::pair<Op, int>> fns = {
                {"H", {Op::Harm, 1}},        {"Binomial", {Op::Binom, 2}}, {"Pochhammer", {Op::Poch, 2}},
                {"Sum", {Op::Sum, 4}},       {"Product", {Op::Prod, 4}}};
            auto it = fns.find(id);
            if (it == fns.end()) {
                if (is_call) {
                    pos_ = at;
                    fail("unknown function '" + id + "'");
                }
                return ex::sym(id);
            }
            if (!is_call) {
                pos_ = at;
                fail("'" + id + "' is reserved");
            }
            ++pos_;
            auto [op, arity] = it->second;
            std::vector<ExprP> args;
            std::string index;
            if (op == Op::Sum || op == Op::Prod) {
                std::size_t ip = pos_;
                index = ident();
                if (index.empty() || fns.count(index)) {
                    pos_ = ip;
                    fail("expected a summation index");
                }
                expect(',');
                for (int i = 0; i < 3; ++i) {
                    std::size_t ap = pos_;
                    args.push_back(expr());
                    if (i < 2 && depends_on(args.back(), index)) {
                        pos_ = ap;
                        fail("unbound index '" + index + "' in its own bounds");
                    }
                    if (i < 2) expect(',');
                }
            } else {
                for (int i = 0; i < arity; ++i) {
                    args.push_back(expr());
                    if (i + 1 < arity) expect(',');
                }
            }
            expect(')');
            return ex::call(op, std::move(args), index);
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }
};

// ---------------------------------------------------------------- printer

int prec(const ExprP& e) {
    switch (e->op) {
        case Op::Add:
        case Op::Sub: return 1;
        case Op::Mul:
        case Op::Div: return 2;
        case Op::Neg: return 3;
        case Op::Num:
            if (sgn(e->num) < 0) return 3;
            return e->num.get_den() == 1 ? 6 : 2;
        case Op::Pow: return 4;
        case Op::Fact: return 5;
        default: return 6;
    }
}

std::string pr(const ExprP& e, int min);

std::string raw(const ExprP& e) {
    const auto& a = e->a;
    switch (e->op) {
        case Op::Num: return e->num.get_str();
        case Op::Sym: return e->name;
        case Op::Add: return pr(a[0], 1) + "+" + pr(a[1], 2);
        case Op::Sub: return pr(a[0], 1) + "-" + pr(a[1], 2);
        case Op::Mul: return pr(a[0], 2) + "*" + pr(a[1], 3);
        case Op::Div: return pr(a[0], 2) + "/" + pr(a[1], 3);
        case Op::Neg: return "-" + pr(a[0], 3);
        case Op::Pow: return pr(a[0], 5) + "^" + pr(a[1], 3);
        case Op::Fact: return pr(a[0], 6) + "!";
        case Op::Harm: return "H(" + print(a[0]) + ")";
        case Op::Binom: return "Binomial(" + print(a[0]) + "," + print(a[1]) + ")";
        case Op::Poch: return "Pochhammer(" + print(a[0]) + "," + print(a[1]) + ")";
        case Op::Sum:
        case Op::Prod:
            return std::string(e->op == Op::Sum ? "Sum(" : "Product(") + e->name + "," + print(a[0]) + "," +
                   print(a[1]) + "," + print(a[2]) + ")";
    }
    return "";
}

std::string pr(const ExprP& e, int min) {
    std::string s = raw(e);
    return prec(e) < min ? "(" + s + ")" : s;
}

// ---------------------------------------------------------------- evaluation

long as_long(const mpq_class& q, const char* what) {
    if (q.get_den() != 1 || !q.get_num().fits_slong_p())
        throw std::domain_error(std::string(what) + ": non-integer argument");
    return q.get_num().get_si();
}

mpq_class eval(const ExprP& e, Env& env) {
    const auto& a = e->a;
    switch (e->op) {
        case Op::Num: return e->num;
        case Op::Sym: {
            auto it = env.find(e->name);
            if (it == env.end()) throw std::domain_error("unbound symbol '" + e->name + "'");
            return it->second;
        }
        case Op::Add: return eval(a[0], env) + eval(a[1], env);
        case Op::Sub: return eval(a[0], env) - eval(a[1], env);
        case Op::Mul: return eval(a[0], env) * eval(a[1], env);
        case Op::Div: {
            mpq_class d = eval(a[1], env);
            if (sgn(d) == 0) throw std::domain_error("division by zero");
            return eval(a[0], env) / d;
        }
        case Op::Neg: return -eval(a[0], env);
        case Op::Pow: {
            mpq_class b = eval(a[0], env);
            long n = as_long(eval(a[1], env), "power");
            if (n < 0) {
                if (sgn(b) == 0) throw std::domain_error("division by zero");
                b = 1 / b;
                n = -n;
            }
            mpz_class nu, de;
            mpz_pow_ui(nu.get_mpz_t(), b.get_num().get_mpz_t(), n);
            mpz_pow_ui(de.get_mpz_t(), b.get_den().get_mpz_t(), n);
            return mpq_class(nu, de);
        }
        case Op::Fact: {
            long n = as_long(eval(a[0], env), "factorial");
            if (n < 0) throw std::domain_error("factorial of a negative integer");
            mpz_class r;
            mpz_fac_ui(r.get_mpz_t(), n);
            return mpq_class(r);
        }
        case Op::Harm: {
            long n = as_long(eval(a[0], env), "harmonic number");
            if (n < 0) throw std::domain_error("harmonic number of a negative integer");
            mpq_class s = 0;
            for (long i = 1; i <= n; ++i) s += mpq_class(1, i);
            return s;
        }
        case Op::Binom: {
            mpq_class top = eval(a[0], env);
            long b = as_long(eval(a[1], env), "binomial");
            if (b < 0) return 0;
            mpq_class r = 1;
            for (long j = 0; j < b; ++j) r = r * (top - j) / (j + 1);
            return r;
        }
        case Op::Poch: {
            mpq_class x = eval(a[0], env);
            long n = as_long(eval(a[1], env), "pochhammer");
            if (n < 0) throw std::domain_error("pochhammer with negative length");
            mpq_class r = 1;
            for (long j = 0; j < n; ++j) r *= x + j;
            return r;
        }
        case Op::Sum:
        case Op::Prod: {
            long lo = as_long(eval(a[0], env), "bound"), hi = as_long(eval(a[1], env), "bound");
            bool sum = e->op == Op::Sum;
            mpq_class acc = sum ? 0 : 1;
            auto saved = env.find(e->name) != env.end() ? std::optional<mpq_class>(env[e->name]) : std::nullopt;
            for (long i = lo; i <= hi; ++i) {
                env[e->name] = i;
                mpq_class v = eval(a[2], env);
                if (sum) acc += v;
                else acc *= v;
            }
            if (saved) env[e->name] = *saved;
            else env.erase(e->name);
            return acc;
        }
    }
    return 0;
}

}  // namespace

ExprP parse(const std::string& text) { return Parser(text).run(); }

std::string print(const ExprP& e) { return raw(e); }

ExprP substitute(const ExprP& e, const std::string& var, const ExprP& rep) {
    if (e->op == Op::Sym) return e->name == var ? rep : e;
    if (e->op == Op::Num) return e;
    auto out = std::make_shared<Expr>(*e);
    bool binds = (e->op == Op::Sum || e->op == Op::Prod) && e->name == var;
    for (std::size_t i = 0; i < out->a.size(); ++i)
        if (!(binds && i == 2)) out->a[i] = substitute(e->a[i], var, rep);
    return out;
}

std::set<std::string> free_symbols(const ExprP& e) {
    std::set<std::string> s;
    if (e->op == Op::Sym) {
        s.insert(e->name);
        return s;
    }
    for (std::size_t i = 0; i < e->a.size(); ++i) {
        auto sub = free_symbols(e->a[i]);
        if ((e->op == Op::Sum || e->op == Op::Prod) && i == 2) sub.erase(e->name);
        s.insert(sub.begin(), sub.end());
    }
    return s;
}

bool depends_on(const ExprP& e, const std::string& var) { return free_symbols(e).count(var) > 0; }

bool same(const ExprP& a, const ExprP& b) { return print(a) == print(b); }

mpq_class evaluate(const ExprP& e, const Env& env) {
    Env local = env;
    return eval(e, local);
}

}  // namespace pisigma
