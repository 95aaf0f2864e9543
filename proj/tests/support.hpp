#pragma once
// Shared fixtures and independent oracles for the test suites. The oracles
// work on plain mpq_class data (numeric sequences, dense matrices) and never
// call the solvers they check.

#include <gmpxx.h>

#include <functional>
#include <random>
#include <stdexcept>
#include <vector>

#include "pisigma/linsolve.hpp"
#include "pisigma/tower.hpp"

namespace testing {

using pisigma::Elem;
using pisigma::Poly;
using pisigma::Tower;
using pisigma::Vec;

// Q(k)(p)(h) with sigma(k) = k+1, sigma(p) = (k+1)p, sigma(h) = h + 1/(k+1):
// p stands for k!, h for H_k.
struct FactHarm {
    Tower T;
    Elem k, p, h;
    FactHarm() {
        k = Elem::gen(1);
        T = Tower().with_sigma("k", Elem(1));
        T = T.with_pi("p", k + 1);
        p = Elem::gen(2);
        T = T.with_sigma("h", Elem(1) / (k + 1));
        h = Elem::gen(3);
    }
};

// The summand (k^2+1) k! H_k^2 shifted once, written in the tower.
inline Elem shifted_summand(const FactHarm& F) {
    const Elem& k = F.k;
    Elem hh = F.h * (k + 1) + 1;
    return (k * k + 2 * k + 2) * F.p * hh * hh / (k + 1);
}

// Numeric value of e with t_L := vals[L] (vals[0] unused).
inline mpq_class numeric(const Elem& e, const std::vector<mpq_class>& vals) {
    if (e.is_rational()) return e.rational();
    int L = e.level();
    auto horner = [&](const Poly& p) {
        mpq_class s = 0;
        for (int i = p.deg(); i >= 0; --i) s = s * vals[L] + numeric(p.c[i], vals);
        return s;
    };
    mpq_class d = horner(e.den(L));
    if (d == 0) throw std::domain_error("pole");
    return horner(e.num(L)) / d;
}

// (k, k!, H_k) at an integer point, matching FactHarm's generators.
inline std::vector<mpq_class> fact_harm_point(long k) {
    mpq_class f = 1, h = 0;
    for (long i = 1; i <= k; ++i) {
        f *= i;
        h += mpq_class(1, i);
    }
    return {0, mpq_class(k), f, h};
}

// Rank of a dense rational matrix: rows are cleared to primitive integer
// vectors, then eliminated forward without fractions.
inline std::size_t oracle_rank(const std::vector<std::vector<mpq_class>>& Q) {
    if (Q.empty()) return 0;
    std::size_t cols = Q[0].size();
    std::vector<std::vector<mpz_class>> M;
    for (const auto& row : Q) {
        mpz_class l = 1;
        for (const auto& x : row) l = lcm(l, mpz_class(x.get_den()));
        std::vector<mpz_class> z;
        for (const auto& x : row) z.push_back(mpz_class(x * l));
        M.push_back(std::move(z));
    }
    auto primitive = [](std::vector<mpz_class>& r) {
        mpz_class g = 0;
        for (const auto& x : r) g = gcd(g, x);
        if (g > 1)
            for (auto& x : r) x /= g;
    };
    std::size_t rank = 0;
    for (std::size_t c = 0; c < cols && rank < M.size(); ++c) {
        std::size_t piv = rank;
        while (piv < M.size() && M[piv][c] == 0) ++piv;
        if (piv == M.size()) continue;
        std::swap(M[piv], M[rank]);
        for (std::size_t i = rank + 1; i < M.size(); ++i) {
            if (M[i][c] == 0) continue;
            mpz_class a = M[rank][c], b = M[i][c];
            for (std::size_t j = c; j < cols; ++j) M[i][j] = a * M[i][j] - b * M[rank][j];
            primitive(M[i]);
        }
        ++rank;
    }
    return rank;
}

// Kernel dimension of a dense rational matrix with the given column count.
inline std::size_t oracle_nullity(const std::vector<std::vector<mpq_class>>& M, std::size_t cols) {
    return cols - oracle_rank(M);
}

struct Rng {
    std::mt19937_64 gen;
    explicit Rng(unsigned long seed) : gen(seed) {}
    long range(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(gen); }
    bool coin() { return range(0, 1) == 1; }
    mpq_class small_q() {
        long n = range(-5, 5), d = range(1, 3);
        return mpq_class(n, d);
    }
    // Polynomial in t_level with small rational coefficients below it.
    Elem poly(const Elem& t, int deg, const std::function<Elem()>& coeff) {
        Elem s(0), tp(1);
        for (int i = 0; i <= deg; ++i) {
            s += coeff() * tp;
            tp *= t;
        }
        return s;
    }
    Elem poly_k(const Elem& k, int deg) {
        return poly(k, deg, [&] { return Elem(small_q()); });
    }
    // A rational function in k with a denominator of small shifted linear factors.
    Elem rat_k(const Elem& k, int deg) {
        Elem num = poly_k(k, deg);
        if (coin()) return num;
        Elem den(1);
        int nf = static_cast<int>(range(1, 2));
        for (int i = 0; i < nf; ++i) den *= k + Elem(range(0, 3));
        return num / den;
    }
};

}  // namespace testing
