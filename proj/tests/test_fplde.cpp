#include <doctest.h>

#include "pisigma/fplde.hpp"
#include "support.hpp"

using namespace pisigma;
using testing::FactHarm;
using testing::Rng;

namespace {

bool contains(const SolutionBasis& b, const SolRow& row, int base) {
    SolutionBasis more = b;
    more.rows.push_back(row);
    return same_span(b, more, base);
}

}  // namespace

TEST_CASE("(k+1) sigma(q) - q = c1 2k + c2 0 over Q(k)") {
    FactHarm F;
    Context ctx(F.T, Options{.check = true});
    SolutionBasis b = solve_fplde(ctx, Elem(-1), 1 + F.k, {2 * F.k, Elem(0)}, 1);
    // q = 1 with c1 = 1/2; q = k would give (k+1)^2 - k, not a multiple of 2k.
    SolutionBasis want{2, {{{Elem(mpq_class(1, 2)), Elem(0)}, Elem(1)}, {{Elem(0), Elem(1)}, Elem(0)}}};
    CHECK(same_span(b, want, 0));
    CHECK(verify_fplde(F.T, Elem(-1), 1 + F.k, {2 * F.k, Elem(0)}, b));
}

TEST_CASE("telescoping 2kp and -2/(k+1) over Q(k)(p)") {
    FactHarm F;
    Context ctx(F.T, Options{.check = true});
    Vec f{2 * F.k * F.p, Elem(-2) / (F.k + 1)};
    SolutionBasis b = solve_fplde(ctx, Elem(-1), Elem(1), f, 2);
    SolutionBasis want{2, {{{Elem(mpq_class(1, 2)), Elem(0)}, F.p}, {{Elem(0), Elem(0)}, Elem(1)}}};
    CHECK(same_span(b, want, 0));
}

TEST_CASE("only constants solve the homogeneous part") {
    FactHarm F;
    Context ctx(F.T, Options{.check = true});
    Vec f{(-F.k - 2) * F.p / (2 * (F.k + 1)), Elem(-1) / (F.k + 1)};
    SolutionBasis b = solve_fplde(ctx, Elem(-1), Elem(1), f, 2);
    SolutionBasis want{2, {{{Elem(0), Elem(0)}, Elem(1)}}};
    CHECK(same_span(b, want, 0));
}

TEST_CASE("base case: sigma = id on the constants") {
    SolutionBasis b = base_case_solve(Elem(2), Elem(1), {Elem(3), Elem(6)}, 0);
    CHECK(b.dim() == 2);
    SolutionBasis z = base_case_solve(Elem(-1), Elem(1), {Elem(1), Elem(0)}, 0);
    SolutionBasis want{2, {{{Elem(0), Elem(1)}, Elem(0)}, {{Elem(0), Elem(0)}, Elem(1)}}};
    CHECK(same_span(z, want, 0));
}

TEST_CASE("planted solutions at the rational base are recovered") {
    Rng rng(41);
    Tower T = Tower().with_sigma("k", Elem(1));
    Elem k = Elem::gen(1);
    for (int it = 0; it < 40; ++it) {
        Elem a1 = rng.poly_k(k, static_cast<int>(rng.range(0, 2)));
        Elem a0 = rng.coin() ? -a1 * (k + rng.range(0, 2)) : rng.poly_k(k, static_cast<int>(rng.range(0, 2)));
        if (a0.is_zero() || a1.is_zero()) continue;
        Elem q = rng.rat_k(k, 2);
        Vec f{a1 * T.sigma(q) + a0 * q, rng.rat_k(k, 1)};
        Context ctx(T);
        SolutionBasis b = solve_fplde(ctx, a0, a1, f, 1);
        CHECK(verify_fplde(T, a0, a1, f, b));
        CHECK(b.dim() <= f.size() + 1);
        CHECK(contains(b, SolRow{{Elem(1), Elem(0)}, q}, 0));
    }
}

TEST_CASE("planted solutions in Q(k)(p)(h)") {
    FactHarm F;
    Rng rng(43);
    for (int it = 0; it < 15; ++it) {
        Elem q = rng.poly(F.h, static_cast<int>(rng.range(0, 2)), [&] { return rng.rat_k(F.k, 1) * F.p; });
        Elem a1(1), a0 = rng.coin() ? Elem(-1) : -(F.k + 1);
        Vec f{a1 * F.T.sigma(q) + a0 * q, rng.rat_k(F.k, 1) * F.p};
        Context ctx(F.T);
        SolutionBasis b = solve_fplde(ctx, a0, a1, f, 3);
        CHECK(verify_fplde(F.T, a0, a1, f, b));
        CHECK(contains(b, SolRow{{Elem(1), Elem(0)}, q}, 0));
    }
}
