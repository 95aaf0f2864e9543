#pragma once
// Compilation of summand expressions into a PiSigma* tower over Q(params).
//
// The index k becomes the rational generator (sigma(k) = k + 1). Products of
// hypergeometric atoms (factorials, binomials, powers c^(a k + b), symbolic
// products) are grouped into classes whose members differ by a factor
// rational in k and the parameters; each class gets one Pi generator whose
// meaning is the atom product of the first member. Indefinite sums become
// Sigma* generators via try_sigma_star_extension, or closed forms when they
// telescope.

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "pisigma/context.hpp"
#include "pisigma/expr.hpp"

namespace pisigma {

struct CompileError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class Compiler {
public:
    Compiler(std::string index, std::vector<std::string> params, Options opt = {});

    // Element of the (possibly extended) tower representing e.
    Elem compile(const ExprP& e);

    // When frozen, compile throws instead of adding a generator.
    void freeze(bool on) { frozen_ = on; }

    const Tower& tower() const { return tower_; }
    int index_level() const { return tower_.base() + 1; }
    const std::string& index() const { return index_; }
    const std::vector<std::string>& params() const { return params_; }
    const Options& options() const { return opt_; }
    const std::vector<std::string>& flags() const { return flags_; }

    // What t_L stands for, as an expression in the index and parameters.
    ExprP meaning(int level) const { return meaning_.at(level); }

    // Value of a tower element at the point given by env (index, params).
    mpq_class value(const Elem& f, const Env& env) const;
    // f(from), ..., f(to) at fixed parameter values. The values follow the
    // shift relations starting at from, so a pole of a rational factor that
    // a vanishing product cancels is no pole of the sequence. Throws
    // std::domain_error at a genuine pole.
    std::vector<mpq_class> sequence(const Elem& f, const Env& params, long from, long to) const;
    // f rewritten through generator meanings.
    ExprP to_expr(const Elem& f) const;

    // Names that generated generators must avoid.
    void reserve(const ExprP& e);

    struct Mono;
    struct Term;
    using Form = std::vector<Term>;

private:
    std::string index_;
    std::vector<std::string> params_;
    Options opt_;
    Tower tower_;
    bool frozen_ = false;
    bool defer_ = false;  // scouting pass: sums evaluate to 1
    std::vector<ExprP> meaning_;  // indexed by level
    std::vector<std::string> flags_;
    std::vector<std::string> reserved_;

    struct ClassInfo {
        int level;
        Elem q;  // generator = q * (canonical product)
    };
    std::map<std::string, Elem> ratio_;      // canonical prim -> sigma(P)/P
    std::map<std::string, ClassInfo> class_;  // canonical prim product -> generator
    std::map<std::string, Elem> sums_;        // (lo, body) -> element for Sum_{i=lo}^k body

    Form form(const ExprP& e);
    Elem to_elem(const Form& f);
    Elem sum_elem(long lo, const ExprP& body_k, const std::string& bound, bool harmonic);
    Form factorial(const ExprP& atom, const ExprP& arg, long exponent);
    Form power(const ExprP& atom, const mpq_class& base, const ExprP& exponent);
    Form product(const ExprP& atom, long lo, const ExprP& body_k, long offset);
    std::string fresh(const std::string& stem) const;
    void add_generator(const Generator& g, ExprP meaning);
    void note_flags(const Context& ctx);
};

// F(k) for k = from..to with the given parameter values.
std::vector<mpq_class> evaluate_sequence(const ExprP& e, const std::string& index, long from, long to,
                                         const Env& params = {});

}  // namespace pisigma
