#include <doctest.h>

#include "pisigma/compile.hpp"
#include "pisigma/driver.hpp"

using namespace pisigma;

namespace {

mpq_class factorial(long n) {
    mpq_class f = 1;
    for (long i = 2; i <= n; ++i) f *= i;
    return f;
}

mpq_class harmonic(long n) {
    mpq_class h = 0;
    for (long i = 1; i <= n; ++i) h += mpq_class(1, i);
    return h;
}

mpq_class binomial(long n, long k) {
    if (k < 0 || k > n) return 0;
    return factorial(n) / (factorial(k) * factorial(n - k));
}

// sum_i c_i(r) S(r+i) - rhs(r) with S computed by the caller.
mpq_class residual(const RecurrenceReport& rep, long r, const std::function<mpq_class(long)>& S) {
    Env env{{rep.param, r}};
    mpq_class acc = -evaluate(rep.rhs, env);
    for (std::size_t i = 0; i < rep.coeffs.size(); ++i) acc += evaluate(rep.coeffs[i], env) * S(r + i);
    return acc;
}

}  // namespace

TEST_CASE("closed forms for sum 1 and sum H_k") {
    TelescopeOptions o;
    o.mode = Mode::Full;
    TelescopeReport a = telescope("Sum(k,1,m,1)", o);
    REQUIRE(a.found);
    for (long m = 1; m <= 10; ++m) CHECK(evaluate(a.rhs, {{"m", m}}) == m);
    TelescopeReport b = telescope("Sum(k,1,m,H(k))", o);
    REQUIRE(b.found);
    for (long m = 1; m <= 10; ++m) CHECK(evaluate(b.rhs, {{"m", m}}) == (m + 1) * harmonic(m) - m);
    CHECK(b.flags.empty());
}

TEST_CASE("sum of (k^2+1) k! H_k^2 in the three modes") {
    TelescopeOptions o;
    o.mode = Mode::Full;
    CHECK(!telescope("Sum(k,1,m,(k^2+1)*k!*H(k)^2)", o).found);
    o.mode = Mode::FirstEntry;
    CHECK(!telescope("Sum(k,1,m,(k^2+1)*k!*H(k)^2)", o).found);
    o.mode = Mode::Reduced;
    TelescopeReport r = telescope("Sum(k,1,m,(k^2+1)*k!*H(k)^2)", o);
    REQUIRE(r.found);
    CHECK(r.delta == 1);
    CHECK(r.verified_from <= 1);
    CHECK(r.verified_to == 30);
    CHECK(r.certificate.psi_level == 2);
    // The leftover sum has no harmonic numbers.
    std::string rhs = print(r.rhs);
    auto at = rhs.find("Sum(");
    REQUIRE(at != std::string::npos);
    CHECK(rhs.find("H(", at) == std::string::npos);
    mpq_class lhs = 0;
    for (long m = 1; m <= 30; ++m) {
        lhs += (m * m + 1) * factorial(m) * harmonic(m) * harmonic(m);
        CHECK(evaluate(r.rhs, {{"m", m}}) == lhs);
    }
    // The same sum with the leftover sum taken at a shifted index.
    CHECK(check_identity("Sum(k,1,m,(k^2+1)*k!*H(k)^2)", "Sum(k,1,m,(k+1)!/k^2)+m*(m+1)!*H(m)^2-2*m!*H(m)", 1, 30).ok);
}

TEST_CASE("Pascal recurrence for sum C(r,k)") {
    RecurrenceReport rep = zeilberger("Sum(k,0,r,Binomial(r,k))");
    REQUIRE(rep.found);
    CHECK(rep.order == 1);
    Env env{{"r", 5}};
    CHECK(evaluate(rep.coeffs[0], env) == -2 * evaluate(rep.coeffs[1], env));
    CHECK(evaluate(rep.rhs, env) == 0);
    for (long r = 0; r <= 10; ++r)
        CHECK(residual(rep, r, [](long n) -> mpq_class { return mpz_class(1) << n; }) == 0);
}

TEST_CASE("refined modes never need a larger order") {
    std::vector<std::pair<const char*, int>> sums{{"Sum(k,0,r,Binomial(r,k)*H(k))", 1},
                                                  {"Sum(k,0,r,Binomial(r,k)^2*H(k))", 2}};
    for (auto [text, a] : sums) {
        std::vector<int> orders;
        for (Mode m : {Mode::Full, Mode::FirstEntry, Mode::Reduced}) {
            ZeilbergerOptions o;
            o.mode = m;
            RecurrenceReport rep = zeilberger(text, o);
            REQUIRE(rep.found);
            orders.push_back(rep.order);
            auto S = [a](long r) -> mpq_class {
                mpq_class s = 0;
                for (long k = 0; k <= r; ++k) {
                    mpq_class b = binomial(r, k);
                    s += (a == 2 ? b * b : b) * harmonic(k);
                }
                return s;
            };
            for (long r = 1; r <= 8; ++r) CHECK(residual(rep, r, S) == 0);
        }
        CHECK(orders[1] <= orders[0]);
        CHECK(orders[2] <= orders[1]);
        CHECK(orders[0] == 2);
        CHECK(orders[2] == 1);
    }
}

TEST_CASE("reduced recurrence for the alternating cube sum") {
    ZeilbergerOptions o;
    o.mode = Mode::Reduced;
    RecurrenceReport rep = zeilberger("Sum(k,0,2*r,(-1)^k*Binomial(2*r,k)^3*H(k))", o);
    REQUIRE(rep.found);
    CHECK(rep.order == 1);
    CHECK(rep.tried == std::vector<int>{0, 1});
    auto S = [](long r) -> mpq_class {
        mpq_class s = 0;
        for (long k = 0; k <= 2 * r; ++k) {
            mpq_class b = binomial(2 * r, k);
            s += (k % 2 ? -1 : 1) * b * b * b * harmonic(k);
        }
        return s;
    };
    for (long r = 1; r <= 8; ++r) {
        Env env{{"r", r}};
        CHECK(evaluate(rep.coeffs[0], env) * (r + 1) * (r + 1) ==
              evaluate(rep.coeffs[1], env) * 3 * (3 * r + 1) * (3 * r + 2));
        CHECK(residual(rep, r, S) == 0);
    }
}

TEST_CASE("normalization of the alternating cube identity") {
    const char* rhs = "(H(r)+2*H(2*r)-H(3*r))*(-1)^r*(3*r)!/(2*(r!)^3)";
    IdentityCheck wide = check_identity("Sum(k,0,2*r,(-1)^k*Binomial(2*r,k)^3*H(k))", rhs, 1, 6);
    CHECK(wide.ok);
    CHECK(wide.variable == "r");
    IdentityCheck narrow = check_identity("Sum(k,0,r,(-1)^k*Binomial(r,k)^3*H(k))", rhs, 1, 6);
    CHECK(!narrow.ok);
    REQUIRE(narrow.first_mismatch);
    CHECK(*narrow.first_mismatch == 1);
}

TEST_CASE("check_identity reports the first mismatch") {
    IdentityCheck c = check_identity("Sum(k,1,n,k)", "n*(n+1)/2", 0, 20);
    CHECK(c.ok);
    IdentityCheck d = check_identity("Sum(k,1,n,k^2)", "n^2", 1, 5);
    CHECK(!d.ok);
    CHECK(*d.first_mismatch == 2);
    CHECK(d.lhs_value == "5");
    CHECK(d.rhs_value == "4");
    CHECK_THROWS(check_identity("k+r", "r+k", 1, 3));
}

TEST_CASE("bare summands and parameters in telescoping") {
    TelescopeOptions o;
    o.mode = Mode::Full;
    o.lower = 0;
    TelescopeReport r = telescope("Binomial(n,k)*(n-2*k)", o);
    REQUIRE(r.found);
    for (long n = 1; n <= 5; ++n)
        for (long m = 0; m <= 8; ++m) {
            mpq_class s = 0;
            for (long k = 0; k <= m; ++k) s += binomial(n, k) * (n - 2 * k);
            CHECK(evaluate(r.rhs, {{"n", n}, {r.bound, m}}) == s);
        }
}
