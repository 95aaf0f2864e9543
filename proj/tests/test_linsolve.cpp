#include <doctest.h>

#include "pisigma/linsolve.hpp"
#include "support.hpp"

using namespace pisigma;
using testing::oracle_nullity;
using testing::Rng;

namespace {

Elem dot(const Vec& row, const Vec& v) {
    Elem s(0);
    for (std::size_t i = 0; i < row.size(); ++i) s += row[i] * v[i];
    return s;
}

}  // namespace

TEST_CASE("nullspace over Q agrees with an independent rank computation") {
    Rng rng(17);
    for (int it = 0; it < 80; ++it) {
        std::size_t rows = rng.range(1, 5), cols = rng.range(1, 6);
        Mat M(rows, Vec(cols));
        std::vector<std::vector<mpq_class>> Q(rows, std::vector<mpq_class>(cols));
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j) {
                mpq_class x = rng.coin() ? mpq_class(0) : rng.small_q();
                Q[i][j] = x;
                M[i][j] = Elem(x);
            }
        // Force dependent rows now and then.
        if (rows > 1 && rng.coin())
            for (std::size_t j = 0; j < cols; ++j) {
                Q[rows - 1][j] = 2 * Q[0][j];
                M[rows - 1][j] = Elem(Q[rows - 1][j]);
            }
        Mat N = nullspace(M, cols);
        CHECK(N.size() == oracle_nullity(Q, cols));
        for (const auto& v : N) {
            REQUIRE(v.size() == cols);
            for (const auto& row : M) CHECK(dot(row, v).is_zero());
        }
        // Independence: each vector has a 1 where all later ones are 0.
        std::vector<std::vector<mpq_class>> NQ;
        for (const auto& v : N) {
            std::vector<mpq_class> q;
            for (const auto& x : v) q.push_back(x.rational());
            NQ.push_back(q);
        }
        CHECK(testing::oracle_rank(NQ) == N.size());
    }
}

TEST_CASE("nullspace over Q(r) returns kernel vectors") {
    Elem r = Elem::gen(1);
    Mat M{{r, 1, -(r * r + 1)}, {2 * r, 2, -2 * r * r - 2}};
    Mat N = nullspace(M, 3);
    CHECK(N.size() == 2);
    for (const auto& v : N)
        for (const auto& row : M) CHECK(dot(row, v).is_zero());
    Mat full{{r, 1}, {1, r}};
    CHECK(nullspace(full, 2).empty());
    Mat sing{{r, 1}, {r * r, r}};
    CHECK(nullspace(sing, 2).size() == 1);
}

TEST_CASE("free columns come out in descending order with a unit entry") {
    Mat M{{1, 2, 0, 3}};
    Mat N = nullspace(M, 4);
    REQUIRE(N.size() == 3);
    CHECK(N[0][3].is_one());
    CHECK(N[1][2].is_one());
    CHECK(N[2][1].is_one());
    CHECK(N[0][0] == Elem(-3));
    CHECK(N[2][0] == Elem(-2));
    CHECK(nullspace({}, 2).size() == 2);
}

TEST_CASE("constant kernel over the base field") {
    Elem k = Elem::gen(1), p = Elem::gen(2);
    Mat K = constant_kernel({k, 2 * k, Elem(1)}, 0);
    REQUIRE(K.size() == 1);
    CHECK(K[0][0] == -2 * K[0][1]);
    CHECK(K[0][2].is_zero());
    CHECK(constant_kernel({k * p, p / (k + 1)}, 0).empty());
    CHECK(constant_kernel({p, Elem(3) * p, Elem(1)}, 0).size() == 1);
    // Over Q(k): p and k p are dependent.
    CHECK(constant_kernel({p, k * p}, 1).size() == 1);
}

TEST_CASE("first_row_reduce keeps the span and isolates column one") {
    Rng rng(9);
    Elem k = Elem::gen(1);
    for (int it = 0; it < 40; ++it) {
        SolutionBasis b;
        b.n = 3;
        std::size_t dim = rng.range(1, 4);
        for (std::size_t i = 0; i < dim; ++i) {
            SolRow row;
            for (std::size_t j = 0; j < b.n; ++j) row.c.push_back(Elem(rng.small_q()));
            row.g = rng.rat_k(k, 1);
            b.rows.push_back(row);
        }
        SolutionBasis r = first_row_reduce(b);
        CHECK(r.dim() == b.dim());
        for (std::size_t i = 1; i < r.rows.size(); ++i) CHECK(r.rows[i].c[0].is_zero());
        CHECK(same_span(b, r, 0));
    }
}

TEST_CASE("same_span distinguishes spaces") {
    Elem k = Elem::gen(1);
    SolutionBasis a{2, {{{1, 0}, k}, {{0, 1}, Elem(0)}}};
    SolutionBasis b{2, {{{1, 1}, k}, {{2, 0}, 2 * k}}};
    SolutionBasis c{2, {{{1, 0}, k + 1}, {{0, 1}, Elem(0)}}};
    CHECK(same_span(a, b, 0));
    CHECK(!same_span(a, c, 0));
    CHECK(!same_span(a, SolutionBasis{2, {{{1, 0}, k}}}, 0));
}
