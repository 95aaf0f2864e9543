// Randomized properties of the solvers. Identities are checked numerically
// against the sequences k, k!, H_k, so sigma is never taken from the tower.
#include <doctest.h>

#include "pisigma/fplde.hpp"
#include "pisigma/pt.hpp"
#include "pisigma/refined.hpp"
#include "pisigma/structure.hpp"
#include "support.hpp"

using namespace pisigma;
using testing::FactHarm;
using testing::numeric;
using testing::Rng;

namespace {

struct Instance {
    int level;
    Elem a0, a1;  // a1 sigma(g) + a0 g = sum c_i f_i
    Vec f;
};

// Random element at exactly the given level, polynomial in p and h with
// rational coefficients in k.
Elem random_at(Rng& rng, const FactHarm& F, int level) {
    Elem e = rng.rat_k(F.k, 1);
    if (level >= 2) e = e * F.p + (rng.coin() ? rng.rat_k(F.k, 1) : Elem(0));
    if (level >= 3) e = e * F.h + rng.rat_k(F.k, 1) * F.p;
    if (e.is_zero()) e = Elem(1);
    return e;
}

// f_1 has a planted solution with c_1 = 1 about half of the time.
Instance random_instance(Rng& rng, const FactHarm& F, bool telescoping) {
    Instance in;
    in.level = static_cast<int>(rng.range(1, 3));
    if (telescoping) {
        in.a0 = Elem(-1);
        in.a1 = Elem(1);
    } else {
        in.a1 = rng.coin() ? Elem(1) : F.k + rng.range(1, 3);
        in.a0 = rng.coin() ? Elem(-1) : -(F.k + rng.range(1, 3));
    }
    std::size_t n = rng.range(1, 3);
    for (std::size_t i = 0; i < n; ++i) {
        if (i == 0 && rng.coin()) {
            Elem u = random_at(rng, F, in.level);
            in.f.push_back(in.a1 * F.T.sigma(u) + in.a0 * u);
        } else {
            in.f.push_back(random_at(rng, F, static_cast<int>(rng.range(1, in.level))));
        }
    }
    return in;
}

// a1(k) g(k+1) + a0(k) g(k) + psi(k) = sum c_i f_i(k) at a few integer points.
bool holds_numerically(const Elem& a0, const Elem& a1, const Vec& f, const Vec& c, const Elem& g,
                       const Elem& psi) {
    int tested = 0;
    for (long k = 7; k <= 13; ++k) {
        auto at = testing::fact_harm_point(k), next = testing::fact_harm_point(k + 1);
        try {
            mpq_class lhs = numeric(a1, at) * numeric(g, next) + numeric(a0, at) * numeric(g, at) + numeric(psi, at);
            mpq_class rhs = 0;
            for (std::size_t i = 0; i < f.size(); ++i) rhs += c[i].rational() * numeric(f[i], at);
            if (lhs != rhs) return false;
            ++tested;
        } catch (const std::domain_error&) {
        }
    }
    return tested >= 3;
}

// Rank of the rows (c, g(k_1), ..., g(k_6)) over Q.
std::size_t numeric_rank(const SolutionBasis& b) {
    std::vector<std::vector<mpq_class>> M;
    for (const auto& row : b.rows) {
        std::vector<mpq_class> v;
        for (const auto& c : row.c) v.push_back(c.rational());
        for (long k = 20; k < 26; ++k) v.push_back(numeric(row.g, testing::fact_harm_point(k)));
        M.push_back(v);
    }
    return testing::oracle_rank(M);
}

// ---------------------------------------------------------------- dense Q[k]

using QPoly = std::vector<mpq_class>;

QPoly qmul(const QPoly& a, const QPoly& b) {
    if (a.empty() || b.empty()) return {};
    QPoly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return r;
}

QPoly qshift(const QPoly& a) {  // a(k+1)
    QPoly r(a.size(), 0), pw{1};
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < pw.size(); ++j) r[j] += a[i] * pw[j];
        pw = qmul(pw, {1, 1});
    }
    return r;
}

QPoly qprod_linear(const std::vector<long>& roots) {  // prod (k + c)
    QPoly r{1};
    for (long c : roots) r = qmul(r, {c, 1});
    return r;
}

Elem to_elem(const QPoly& a) {
    Elem k = Elem::gen(1), s(0), pw(1);
    for (const auto& x : a) {
        s += Elem(x) * pw;
        pw *= k;
    }
    return s;
}

// Dimension of {(c, P) : a1 sigma(P/U) + a0 P/U = sum c_i N_i/D_i, deg P <= dp}
// by coefficient comparison and plain elimination.
std::size_t ansatz_dimension(const QPoly& a0, const QPoly& a1, const std::vector<QPoly>& N,
                             const std::vector<QPoly>& D, const QPoly& U, int dp) {
    QPoly Df{1};
    for (const auto& d : D) Df = qmul(Df, d);
    QPoly sU = qshift(U);
    std::vector<QPoly> cols;
    for (std::size_t i = 0; i < N.size(); ++i) {
        QPoly col = qmul(qmul(N[i], qmul(U, sU)), {-1});
        for (std::size_t j = 0; j < D.size(); ++j)
            if (j != i) col = qmul(col, D[j]);
        cols.push_back(col);
    }
    QPoly L = qmul(qmul(a1, U), Df), R = qmul(qmul(a0, sU), Df), kj{1};
    for (int j = 0; j <= dp; ++j) {
        QPoly a = qmul(L, qshift(kj)), b = qmul(R, kj), col(std::max(a.size(), b.size()), 0);
        for (std::size_t t = 0; t < a.size(); ++t) col[t] += a[t];
        for (std::size_t t = 0; t < b.size(); ++t) col[t] += b[t];
        cols.push_back(col);
        kj.insert(kj.begin(), 0);
    }
    std::size_t rows = 0;
    for (const auto& c : cols) rows = std::max(rows, c.size());
    std::vector<std::vector<mpq_class>> M(rows, std::vector<mpq_class>(cols.size(), 0));
    for (std::size_t j = 0; j < cols.size(); ++j)
        for (std::size_t t = 0; t < cols[j].size(); ++t) M[t][j] = cols[j][t];
    return testing::oracle_nullity(M, cols.size());
}

}  // namespace

TEST_CASE("(a) every solver output satisfies its defining identity") {
    FactHarm F;
    Rng rng(101);
    for (int it = 0; it < 200; ++it) {
        bool tele = it % 2 == 0;
        Instance in = random_instance(rng, F, tele);
        Context ctx(F.T);
        Elem zero(0);
        if (!tele) {
            SolutionBasis b = solve_fplde(ctx, in.a0, in.a1, in.f, in.level);
            for (const auto& row : b.rows) CHECK(holds_numerically(in.a0, in.a1, in.f, row.c, row.g, zero));
            continue;
        }
        SolutionBasis b = solve_pt(ctx, in.f, in.level);
        for (const auto& row : b.rows) CHECK(holds_numerically(in.a0, in.a1, in.f, row.c, row.g, zero));
        if (auto fe = first_entry_pt(ctx, in.f, in.level)) {
            CHECK(!fe->c[0].is_zero());
            CHECK(holds_numerically(in.a0, in.a1, in.f, fe->c, fe->g, zero));
        }
        SpecialSolution s = reduced_pt(ctx, in.f, in.level);
        CHECK(!s.c[0].is_zero());
        CHECK(holds_numerically(in.a0, in.a1, in.f, s.c, s.g, s.psi));
    }
}

TEST_CASE("(b) bases are independent with dimension at most n + 1") {
    FactHarm F;
    Rng rng(102);
    for (int it = 0; it < 60; ++it) {
        Instance in = random_instance(rng, F, it % 2 == 0);
        Context ctx(F.T);
        SolutionBasis b = solve_fplde(ctx, in.a0, in.a1, in.f, in.level);
        CHECK(b.dim() <= in.f.size() + 1);
        CHECK(numeric_rank(b) == b.dim());
    }
}

TEST_CASE("(c) telescoping equals the difference equation with a = (-1, 1)") {
    FactHarm F;
    Rng rng(103);
    for (int it = 0; it < 100; ++it) {
        Instance in = random_instance(rng, F, true);
        Context c1(F.T), c2(F.T);
        CHECK(same_span(solve_pt(c1, in.f, in.level), solve_fplde(c2, Elem(-1), Elem(1), in.f, in.level), 0));
    }
}

TEST_CASE("(d) a first-entry solution exists iff the reduced basis starts with c_1 != 0") {
    FactHarm F;
    Rng rng(104);
    int with = 0;
    for (int it = 0; it < 60; ++it) {
        Instance in = random_instance(rng, F, true);
        Context ctx(F.T);
        SolutionBasis b = first_row_reduce(solve_pt(ctx, in.f, in.level));
        bool lead = !b.empty() && !b.rows[0].c[0].is_zero();
        CHECK(first_entry_pt(ctx, in.f, in.level).has_value() == lead);
        with += lead;
    }
    CHECK(with > 10);
    CHECK(with < 55);
}

TEST_CASE("(e) agreement with a brute-force rational ansatz over Q(k)") {
    Rng rng(105);
    Tower T = Tower().with_sigma("k", Elem(1));
    const int M = 6, mult = 2, extra = 8;
    std::vector<long> window;
    for (long c = -M; c <= M; ++c)
        for (int e = 0; e < mult; ++e) window.push_back(c);
    QPoly U = qprod_linear(window);
    Elem Ue = to_elem(U);
    for (int it = 0; it < 100; ++it) {
        auto roots = [&](int n, long lo, long hi) {
            std::vector<long> r;
            for (int i = 0; i < n; ++i) r.push_back(rng.range(lo, hi));
            return r;
        };
        QPoly a1 = qmul(qprod_linear(roots(static_cast<int>(rng.range(0, 2)), -2, 2)), {rng.range(1, 3)});
        QPoly a0 = qmul(qprod_linear(roots(static_cast<int>(rng.range(0, 2)), -2, 2)), {-rng.range(1, 3)});
        std::vector<QPoly> N, D;
        std::size_t n = rng.range(1, 3);
        for (std::size_t i = 0; i < n; ++i) {
            QPoly num;
            for (int j = 0, d = static_cast<int>(rng.range(0, 2)); j <= d; ++j) num.push_back(rng.small_q());
            N.push_back(num);
            D.push_back(qprod_linear(roots(static_cast<int>(rng.range(0, 1)), 0, 3)));
        }
        // Sometimes plant a solution for f_1.
        if (rng.coin()) {
            QPoly q = qprod_linear(roots(static_cast<int>(rng.range(0, 2)), -3, 3));
            QPoly dq = qprod_linear(roots(1, 0, 3));
            QPoly sdq = qshift(dq);
            // a1 q(k+1)/dq(k+1) + a0 q/dq = (a1 q(k+1) dq + a0 q sdq) / (dq sdq)
            QPoly t1 = qmul(qmul(a1, qshift(q)), dq), t2 = qmul(qmul(a0, q), sdq);
            QPoly s(std::max(t1.size(), t2.size()), 0);
            for (std::size_t j = 0; j < t1.size(); ++j) s[j] += t1[j];
            for (std::size_t j = 0; j < t2.size(); ++j) s[j] += t2[j];
            N[0] = s;
            D[0] = qmul(dq, sdq);
        }
        Vec f;
        for (std::size_t i = 0; i < n; ++i) f.push_back(to_elem(N[i]) / to_elem(D[i]));
        Context ctx(T);
        SolutionBasis b = solve_fplde(ctx, to_elem(a0), to_elem(a1), f, 1);
        int dp = static_cast<int>(U.size()) - 1 + extra;
        bool covered = true;
        for (const auto& row : b.rows) {
            Elem P = Ue * row.g;
            covered = covered && P.is_poly(1) && P.deg(1) <= dp;
        }
        REQUIRE(covered);
        CHECK(ansatz_dimension(a0, a1, N, D, U, dp) == b.dim());
    }
}

TEST_CASE("(f) structural telescoping agrees with the general solver in a reduced tower") {
    FactHarm F;
    Rng rng(106);
    int found = 0;
    for (int it = 0; it < 50; ++it) {
        int ground = static_cast<int>(rng.range(1, 2));
        Elem u = random_at(rng, F, ground);
        Elem f = F.T.sigma(u) - u + Elem(rng.small_q()) / (F.k + 1);
        if (rng.range(0, 3) == 0) f += 1 / ((F.k + 1) * (F.k + 1));
        if (ground == 2 && rng.coin()) f += rng.rat_k(F.k, 1) * F.p;
        Context c1(F.T), c2(F.T);
        auto g = structural_telescope(c1, f, ground);
        SolutionBasis b = first_row_reduce(solve_pt(c2, {f}, 3));
        bool general = !b.empty() && !b.rows[0].c[0].is_zero();
        CHECK(g.has_value() == general);
        if (g) {
            CHECK(F.T.sigma(*g) - *g == f);
            ++found;
        }
    }
    CHECK(found > 10);
}
