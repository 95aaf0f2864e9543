// Command-line front end: telescope, zeilberger, check-identity.
#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>
#include <regex>

#include "pisigma/driver.hpp"

using json = nlohmann::ordered_json;
using namespace pisigma;

namespace {

json tower_json(const std::vector<GeneratorInfo>& t) {
    json out = json::array();
    for (const auto& g : t)
        out.push_back({{"name", g.name}, {"kind", g.kind}, {"alpha", g.alpha}, {"beta", g.beta}, {"meaning", g.meaning}});
    return out;
}

json certificate_json(const Certificate& c) {
    return {{"c", c.c}, {"g", c.g}, {"psi", c.psi}, {"psi_level", c.psi_level}};
}

void print_tower(std::ostream& os, const std::vector<GeneratorInfo>& t) {
    os << "tower:\n";
    for (const auto& g : t) {
        os << "  " << g.name << "  " << g.kind;
        if (g.kind == "pi") os << "  sigma(" << g.name << ") = (" << g.alpha << ")*" << g.name;
        if (g.kind == "sigma") os << "  sigma(" << g.name << ") = " << g.name << " + " << g.beta;
        if (g.kind != "param" && g.meaning != g.name) os << "  := " << g.meaning;
        os << "\n";
    }
}

std::pair<long, long> parse_range(const std::string& s) {
    std::smatch m;
    static const std::regex re(R"(^\s*(-?\d+)\s*\.\.\s*(-?\d+)\s*$)");
    if (!std::regex_match(s, m, re)) throw CLI::ValidationError("--range", "expected a..b");
    return {std::stol(m[1]), std::stol(m[2])};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Refined telescoping in PiSigma* towers"};
    app.require_subcommand(1);
    Options solver;
    app.add_option("--den-window", solver.den_window, "shift window for non-rational denominator scans")
        ->check(CLI::NonNegativeNumber);
    app.add_option("--deg-slack", solver.deg_slack, "added to degree bounds that are not provably tight")
        ->check(CLI::NonNegativeNumber);

    std::string expr, mode = "reduced";
    bool as_json = false;
    long verify = -1, lower = 1;

    auto* tel = app.add_subcommand("telescope", "sum_{k=lo}^m F(k) as a closed part plus a sum over a smaller field");
    tel->add_option("expr", expr, "Sum(k,lo,m,F) or a bare summand F")->required();
    tel->add_option("--mode", mode, "full | first-entry | reduced")
        ->check(CLI::IsMember({"full", "first-entry", "reduced"}));
    tel->add_option("--verify-range", verify, "verify for m = delta..N (default 30)");
    tel->add_option("--lower", lower, "lower bound for a bare summand");
    tel->add_flag("--json", as_json);

    std::string zmode = "classical", param = "r", upper;
    int max_order = 3;
    long zlower = 0;
    auto* zb = app.add_subcommand("zeilberger", "recurrence in a parameter for a definite sum");
    zb->add_option("expr", expr, "Sum(k,lo,hi(r),F) or a bare summand with --upper")->required();
    zb->add_option("--param", param, "the recurrence parameter")->required();
    zb->add_option("--max-order", max_order, "largest order tried")->check(CLI::NonNegativeNumber);
    zb->add_option("--mode", zmode, "classical | first-entry | reduced")
        ->check(CLI::IsMember({"classical", "full", "first-entry", "reduced"}));
    zb->add_option("--verify-range", verify, "verify for r = 1..N (default 8)");
    zb->add_option("--lower", zlower, "lower bound for a bare summand");
    zb->add_option("--upper", upper, "upper bound for a bare summand, affine in the parameter");
    zb->add_flag("--json", as_json);

    std::string lhs, rhs, range;
    auto* ci = app.add_subcommand("check-identity", "compare two expressions on an integer range");
    ci->add_option("lhs", lhs)->required();
    ci->add_option("rhs", rhs)->required();
    ci->add_option("--range", range, "a..b")->required();
    ci->add_flag("--json", as_json);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*tel) {
            TelescopeOptions o;
            o.mode = parse_mode(mode);
            o.lower = lower;
            o.solver = solver;
            if (verify >= 0) o.verify_to = verify;
            TelescopeReport r = telescope(expr, o);
            if (as_json) {
                json j;
                j["mode"] = mode_name(r.mode);
                j["tower"] = tower_json(r.tower);
                j["certificate"] = r.found ? certificate_json(r.certificate) : json(nullptr);
                j["identity"] = r.found ? json{{"lhs", print(r.lhs)}, {"rhs", print(r.rhs)}, {"delta", r.delta}}
                                        : json(nullptr);
                j["verified_range"] = r.found ? json::array({r.verified_from, r.verified_to}) : json(nullptr);
                j["flags"] = r.flags;
                std::cout << j.dump(2) << "\n";
            } else {
                print_tower(std::cout, r.tower);
                if (!r.found) {
                    std::cout << "no " << mode_name(r.mode) << " telescoping solution\n";
                } else {
                    std::cout << print(r.lhs) << " = " << print(r.rhs) << "\n";
                    std::cout << "valid for " << r.bound << " >= " << r.delta - 1 << "; verified for " << r.bound
                              << " = " << r.verified_from << ".." << r.verified_to << "\n";
                }
                for (const auto& f : r.flags) std::cout << "flag: " << f << "\n";
            }
            return r.found ? 0 : 2;
        }
        if (*zb) {
            ZeilbergerOptions o;
            o.mode = parse_mode(zmode);
            o.param = param;
            o.max_order = max_order;
            o.lower = zlower;
            o.upper = upper;
            o.solver = solver;
            if (verify >= 0) o.verify_to = verify;
            RecurrenceReport r = zeilberger(expr, o);
            std::string mname = r.mode == Mode::Full ? "classical" : mode_name(r.mode);
            if (as_json) {
                json j;
                j["mode"] = mname;
                j["tower"] = tower_json(r.tower);
                j["certificate"] = r.found ? certificate_json(r.certificate) : json(nullptr);
                if (r.found) {
                    json co = json::array();
                    for (const auto& c : r.coeffs) co.push_back(print(c));
                    j["recurrence"] = {{"order", r.order},  {"coeffs", co},        {"rhs", print(r.rhs)},
                                       {"sum", print(r.sum)}, {"param", r.param}, {"delta", r.delta},
                                       {"vanishing", r.vanishing}};
                    j["verified_range"] = json::array({r.verified_from, r.verified_to});
                } else {
                    j["recurrence"] = nullptr;
                    j["verified_range"] = nullptr;
                }
                j["tried"] = r.tried;
                j["flags"] = r.flags;
                std::cout << j.dump(2) << "\n";
            } else {
                print_tower(std::cout, r.tower);
                if (!r.found) {
                    std::cout << "no " << mname << " recurrence of order <= " << max_order << "\n";
                } else {
                    std::cout << "S(" << r.param << ") = " << print(r.sum) << "\n";
                    std::cout << "order " << r.order << ":\n";
                    for (std::size_t i = 0; i < r.coeffs.size(); ++i) {
                        std::cout << "  (" << print(r.coeffs[i]) << ") * S(" << r.param;
                        if (i) std::cout << "+" << i;
                        std::cout << ")" << (i + 1 < r.coeffs.size() ? " +" : "") << "\n";
                    }
                    std::cout << "  = " << print(r.rhs) << "\n";
                    for (const auto& v : r.vanishing) std::cout << "vanishing on the range: " << v << "\n";
                    std::cout << "verified for " << r.param << " = " << r.verified_from << ".." << r.verified_to << "\n";
                }
                for (const auto& f : r.flags) std::cout << "flag: " << f << "\n";
            }
            return r.found ? 0 : 2;
        }
        if (*ci) {
            auto [a, b] = parse_range(range);
            IdentityCheck c = check_identity(lhs, rhs, a, b);
            if (as_json) {
                json j{{"variable", c.variable}, {"range", {c.from, c.to}}, {"ok", c.ok}};
                if (c.first_mismatch)
                    j["mismatch"] = {{"at", *c.first_mismatch}, {"lhs", c.lhs_value}, {"rhs", c.rhs_value}};
                std::cout << j.dump(2) << "\n";
            } else if (c.ok) {
                std::cout << "identity holds for " << c.variable << " = " << c.from << ".." << c.to << "\n";
            } else {
                std::cout << "mismatch at " << c.variable << " = " << *c.first_mismatch << ": " << c.lhs_value
                          << " != " << c.rhs_value << "\n";
            }
            return c.ok ? 0 : 1;
        }
    } catch (const VerificationError& e) {
        std::cerr << "verification failed: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
