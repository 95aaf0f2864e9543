#include <doctest.h>

#include "pisigma/pt.hpp"
#include "pisigma/structure.hpp"
#include "support.hpp"

using namespace pisigma;
using testing::FactHarm;
using testing::Rng;

namespace {

// Random polynomial in t_top with coefficients polynomial in the levels below.
Elem random_elem(Rng& rng, const std::vector<Elem>& gens, std::size_t upto) {
    Elem k = gens[0];
    Elem e = rng.rat_k(k, 1);
    for (std::size_t i = 1; i < upto; ++i) {
        int d = static_cast<int>(rng.range(0, 2));
        Elem c = rng.poly(gens[i], d, [&] { return rng.rat_k(k, 1); });
        e = e * (rng.coin() ? Elem(1) : gens[i]) + c;
    }
    return e;
}

bool commutes(const Tower& old, const ReductionMap& R, const Elem& x) {
    return R.apply(old.sigma(x)) == R.tower.sigma(R.apply(x));
}

}  // namespace

TEST_CASE("sum of (k^2+1) k! H_k^2 as a new generator is not reduced") {
    FactHarm F;
    Context c0(F.T);
    ExtensionResult e = try_sigma_star_extension(c0, testing::shifted_summand(F), "t");
    REQUIRE(!e.telescoped);
    REQUIRE(e.tower.top() == 4);
    CHECK(e.level == 4);
    Context c1(e.tower);
    CHECK(is_reduced_extension(c1, 1));
    CHECK(is_reduced_extension(c1, 3));
    CHECK(!is_reduced_extension(c1, 4));

    ReductionMap R = transform_to_reduced(e.tower);
    CHECK(R.replaced == std::vector<int>{4});
    const Elem &k = F.k, &p = F.p, &h = F.h;
    // The new generator s has sigma(s) = s + (k+2)p/(k+1) and t = s + k(k+1)p h^2 - 2hp.
    CHECK(R.tower.generator(4).name == "s");
    CHECK(R.tower.generator(4).beta == (k + 2) * p / (k + 1));
    CHECK(R.shift[4] == k * (k + 1) * p * h * h - 2 * h * p);
    Elem t = Elem::gen(4);
    CHECK(R.apply(t) == t + R.shift[4]);
    Context c2(R.tower);
    CHECK(is_reduced_extension(c2, 4));

    Rng rng(71);
    std::vector<Elem> gens{k, p, h, t};
    for (int it = 0; it < 50; ++it) CHECK(commutes(e.tower, R, random_elem(rng, gens, 4)));
}

TEST_CASE("two consecutive non-reduced generators") {
    Elem k = Elem::gen(1), h = Elem::gen(2), t1 = Elem::gen(3), t2 = Elem::gen(4);
    // h + 1/(k+1)^2 = sigma(kh - k) - (kh - k) + 1/(k+1)^2;
    // 2h/(k+1) + 1/(k+1)^2 + 1/(k+1)^3 = sigma(h^2) - h^2 + 1/(k+1)^3.
    Tower T = Tower()
                  .with_sigma("k", Elem(1))
                  .with_sigma("h", 1 / (k + 1))
                  .with_sigma("t1", h + 1 / ((k + 1) * (k + 1)))
                  .with_sigma("t2", 2 * h / (k + 1) + 1 / ((k + 1) * (k + 1)) + 1 / ((k + 1) * (k + 1) * (k + 1)));
    Context c(T);
    CHECK(!is_reduced_extension(c, 3));
    CHECK(!is_reduced_extension(c, 4));
    ReductionMap R = transform_to_reduced(T);
    CHECK(R.replaced == std::vector<int>{3, 4});
    CHECK(R.tower.generator(3).beta.level() <= 1);
    CHECK(R.tower.generator(4).beta.level() <= 1);
    Context c2(R.tower);
    for (int L : {2, 3, 4}) CHECK(is_reduced_extension(c2, L));
    Rng rng(72);
    std::vector<Elem> gens{k, h, t1, t2};
    for (int it = 0; it < 30; ++it) CHECK(commutes(T, R, random_elem(rng, gens, 4)));
    auto names = R.describe(T);
    CHECK(names.size() == 2);
}

TEST_CASE("extension either telescopes or adds a generator") {
    Elem k = Elem::gen(1);
    Tower U = Tower().with_sigma("k", Elem(1)).with_sigma("h", 1 / (k + 1));
    Context cu(U);
    ExtensionResult x = try_sigma_star_extension(cu, Elem::gen(2), "t");
    REQUIRE(x.telescoped);
    CHECK(U.sigma(x.g) - x.g == Elem::gen(2));
    ExtensionResult y = try_sigma_star_extension(cu, 1 / ((k + 1) * (k + 1)), "h2");
    CHECK(!y.telescoped);
    CHECK(y.tower.top() == 3);
    CHECK(y.tower.generator(3).name == "h2");
}

TEST_CASE("telescoping through the structure of a reduced tower") {
    FactHarm F;
    Context c(F.T);
    auto g = structural_telescope(c, 1 / (F.k + 1), 1);
    REQUIRE(g);
    CHECK(F.T.sigma(*g) - *g == 1 / (F.k + 1));
    auto g2 = structural_telescope(c, F.k * F.p, 2);
    REQUIRE(g2);
    CHECK(F.T.sigma(*g2) - *g2 == F.k * F.p);
    CHECK(!structural_telescope(c, 1 / ((F.k + 1) * (F.k + 1)), 1));
}
