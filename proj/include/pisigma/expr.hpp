#pragma once
// Summand expressions: AST, parser, printer and exact evaluation.
//
//   expr    := term (('+'|'-') term)*
//   term    := unary (('*'|'/') unary)*
//   unary   := '-' unary | power
//   power   := postfix ('^' unary)?
//   postfix := primary '!'*
//   primary := integer | symbol | call | '(' expr ')'
//   call    := H(e) | Binomial(e,e) | Pochhammer(e,e)
//            | Sum(i,lo,hi,body) | Product(i,lo,hi,body)

#include <gmpxx.h>

#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace pisigma {

enum class Op { Num, Sym, Add, Sub, Mul, Div, Neg, Pow, Fact, Harm, Binom, Poch, Sum, Prod };

struct Expr;
using ExprP = std::shared_ptr<const Expr>;

struct Expr {
    Op op;
    mpq_class num;          // Num
    std::string name;       // Sym; bound index of Sum/Prod
    std::vector<ExprP> a;   // operands; Sum/Prod: lo, hi, body
};

struct ParseError : std::runtime_error {
    std::size_t offset;
    ParseError(const std::string& msg, std::size_t off)
        : std::runtime_error(msg + " at offset " + std::to_string(off)), offset(off) {}
};

ExprP parse(const std::string& text);
std::string print(const ExprP& e);

namespace ex {
ExprP num(const mpq_class& q);
ExprP sym(const std::string& s);
ExprP add(ExprP a, ExprP b);
ExprP sub(ExprP a, ExprP b);
ExprP mul(ExprP a, ExprP b);
ExprP div(ExprP a, ExprP b);
ExprP neg(ExprP a);
ExprP pow(ExprP a, ExprP b);
ExprP fact(ExprP a);
ExprP call(Op op, std::vector<ExprP> args, const std::string& index = "");
}  // namespace ex

// Replace free occurrences of var by rep.
ExprP substitute(const ExprP& e, const std::string& var, const ExprP& rep);
std::set<std::string> free_symbols(const ExprP& e);
bool depends_on(const ExprP& e, const std::string& var);
bool same(const ExprP& a, const ExprP& b);

using Env = std::map<std::string, mpq_class>;

// Exact value. Throws std::domain_error on poles, non-integer factorials,
// harmonic numbers of negative arguments and unbound symbols.
mpq_class evaluate(const ExprP& e, const Env& env);

}  // namespace pisigma
