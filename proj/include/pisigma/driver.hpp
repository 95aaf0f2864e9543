#pragma once
// End-to-end drivers: telescoping of a definite-in-m sum, creative
// telescoping in a parameter, and numeric identity checks. Every identity or
// recurrence in a report has been re-verified by exact evaluation over the
// reported range; a mismatch raises VerificationError instead.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pisigma/context.hpp"
#include "pisigma/expr.hpp"

namespace pisigma {

enum class Mode { Full, FirstEntry, Reduced };

// "full" and "classical" name the same mode.
Mode parse_mode(const std::string& s);
std::string mode_name(Mode m);

struct VerificationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GeneratorInfo {
    std::string name;
    std::string kind;  // param, pi, sigma
    std::string alpha, beta, meaning;
};

// sigma(g) - g + psi = c_1 f_1 + ... + c_n f_n in canonical text form.
struct Certificate {
    std::vector<std::string> c;
    std::string g, psi;
    int psi_level = 0;
};

struct TelescopeOptions {
    Mode mode = Mode::Reduced;
    long lower = 1;          // for a bare summand
    long verify_to = 30;     // m = delta..verify_to
    Options solver;
};

struct TelescopeReport {
    Mode mode = Mode::Reduced;
    bool found = false;      // false: no telescoper of the requested kind
    std::vector<GeneratorInfo> tower;
    Certificate certificate;
    std::string index, bound;
    long lower = 0, delta = 0;  // the identity holds for m >= delta - 1
    ExprP lhs, rhs;
    long verified_from = 0, verified_to = -1;
    std::vector<std::string> flags;
};

// text is Sum(k, lo, m, F) with m a symbol, or a bare summand F in k.
TelescopeReport telescope(const std::string& text, const TelescopeOptions& opt = {});

struct ZeilbergerOptions {
    std::string param = "r";
    int max_order = 3;
    Mode mode = Mode::Full;
    long lower = 0;                 // for a bare summand
    std::string upper;              // for a bare summand, affine in param
    long verify_from = 1, verify_to = 8;
    std::vector<std::string> index_names{"k"};
    Options solver;
};

struct RecurrenceReport {
    Mode mode = Mode::Full;
    bool found = false;
    int order = -1;                 // sum_{i=0}^{order} c_i S(r+i) = rhs
    std::vector<int> tried;
    std::vector<GeneratorInfo> tower;
    Certificate certificate;
    std::string index, param;
    ExprP sum;                      // S(r)
    std::vector<ExprP> coeffs;      // polynomials in the parameters
    ExprP rhs;
    std::vector<std::string> vanishing;  // boundary terms zero on the verified range
    long delta = 0;
    long verified_from = 0, verified_to = -1;
    std::vector<std::string> flags;
};

RecurrenceReport zeilberger(const std::string& text, const ZeilbergerOptions& opt = {});

struct IdentityCheck {
    std::string variable;
    long from = 0, to = -1;
    bool ok = true;
    std::optional<long> first_mismatch;
    std::string lhs_value, rhs_value;  // at the first mismatch
};

// lhs = rhs at every integer of [from, to] for their single free symbol.
IdentityCheck check_identity(const std::string& lhs, const std::string& rhs, long from, long to);

}  // namespace pisigma
