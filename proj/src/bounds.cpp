#include "pisigma/bounds.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "detail.hpp"
#include "pisigma/fplde.hpp"
#include "pisigma/pt.hpp"

namespace pisigma {

using detail::as_poly;
using detail::maxdeg;

namespace {

Poly taylor_shift(const Poly& p, const Q& j);

Poly sigma_poly(const Tower& T, const Poly& p, long n) {
    if (n == 0 || p.is_zero()) return p;
    // On the rational base sigma^n is one shift by n.
    if (T.is_rational_base(p.var)) return taylor_shift(p, Q(n));
    return T.sigma(Elem::from_poly(p), n).num(p.var);
}

Poly shift_down(const Poly& p, int v) {
    Poly r(p.var);
    r.c.assign(p.c.begin() + v, p.c.end());
    return r;
}

bool nonneg_integer(const Elem& e, long& out) {
    if (!e.is_rational()) return false;
    const Q& q = e.rational();
    if (q.get_den() != 1 || sgn(q) < 0 || !q.get_num().fits_slong_p()) return false;
    out = q.get_num().get_si();
    return true;
}

// Abramov's chain stripping over the given shifts, largest first; returns
// the product of the shifted gcds.
Poly chain_denominator(const Tower& T, Poly B, Poly A, const std::vector<long>& shifts) {
    int L = B.var;
    Poly U = Poly::constant(L, Elem(1));
    for (auto it = shifts.rbegin(); it != shifts.rend(); ++it) {
        long j = *it;
        if (B.deg() <= 0 || A.deg() <= 0) break;
        Poly g = gcd(B, sigma_poly(T, A, -j));
        if (g.deg() <= 0) continue;
        B = exact_div(B, g);
        A = exact_div(A, sigma_poly(T, g, j));
        for (long i = 0; i <= j; ++i) U = U * sigma_poly(T, g, i);
    }
    return monic(U);
}

std::vector<long> window(long W) {
    std::vector<long> out;
    for (long j = 0; j <= W; ++j) out.push_back(j);
    return out;
}

}  // namespace

Elem resultant(const Poly& p, const Poly& q) {
    if (p.is_zero() || q.is_zero()) return Elem(0);
    Poly a = p, b = q, qq, r;
    Elem acc(1);
    while (true) {
        int m = a.deg(), n = b.deg();
        if (n == 0) return acc * b.lc().pow(m);
        if (m == 0) return acc * a.lc().pow(n);
        divrem(a, b, qq, r);
        if (r.is_zero()) return Elem(0);
        if ((static_cast<long>(m) * n) % 2) acc = -acc;
        acc *= b.lc().pow(m - r.deg());
        a = std::move(b);
        b = std::move(r);
    }
}

namespace {

// Value of an element of K = Q(params) at params = vals (indexed by level).
bool specialize(const Elem& e, const std::vector<Q>& vals, Q& out) {
    if (e.is_rational()) {
        out = e.rational();
        return true;
    }
    int L = e.level();
    auto horner = [&](const Poly& p, Q& v) {
        v = 0;
        for (int i = p.deg(); i >= 0; --i) {
            Q c;
            if (!specialize(p.c[i], vals, c)) return false;
            v = v * vals[L] + c;
        }
        return true;
    };
    Q n, d;
    if (!horner(e.num(L), n) || !horner(e.den(L), d) || sgn(d) == 0) return false;
    out = n / d;
    return true;
}

// Upper bound on |z| over the complex roots z of p (Fujiwara).
double root_bound(const Poly& p) {
    double lead = std::fabs(p.lc().rational().get_d()), b = 0;
    int n = p.deg();
    for (int i = 1; i <= n; ++i) {
        double a = std::fabs(p.c[n - i].rational().get_d()) / lead;
        if (i == n) a /= 2;
        b = std::max(b, std::pow(a, 1.0 / i));
    }
    return 2 * b;
}

// p(t + j) for p over Q.
Poly taylor_shift(const Poly& p, const Q& j) {
    Poly lin(p.var, {Elem(j), Elem(1)});
    Poly r = Poly::constant(p.var, p.c.back());
    for (int i = p.deg() - 1; i >= 0; --i) r = r * lin + Poly::constant(p.var, p.c[i]);
    return r;
}

// Arithmetic modulo the prime 2^31 - 1 for the shift scan.
constexpr std::uint64_t kMod = 2147483647ULL;

std::uint64_t mod_pow(std::uint64_t a, std::uint64_t e) {
    std::uint64_t r = 1;
    for (; e; e >>= 1, a = a * a % kMod)
        if (e & 1) r = r * a % kMod;
    return r;
}

// Image of a polynomial over Q; false if a denominator or the leading
// coefficient vanishes.
bool mod_image(const Poly& p, std::vector<std::uint64_t>& out) {
    out.clear();
    for (const auto& c : p.c) {
        const Q& q = c.rational();
        std::uint64_t d = mpz_fdiv_ui(q.get_den_mpz_t(), kMod);
        if (d == 0) return false;
        out.push_back(mpz_fdiv_ui(q.get_num_mpz_t(), kMod) * mod_pow(d, kMod - 2) % kMod);
    }
    return out.back() != 0;
}

int mod_gcd_deg(std::vector<std::uint64_t> a, std::vector<std::uint64_t> b) {
    auto trim = [](std::vector<std::uint64_t>& v) {
        while (!v.empty() && v.back() == 0) v.pop_back();
    };
    trim(a);
    trim(b);
    while (!b.empty()) {
        if (a.size() < b.size()) {
            std::swap(a, b);
            continue;
        }
        std::uint64_t ib = mod_pow(b.back(), kMod - 2);
        while (a.size() >= b.size()) {
            std::uint64_t f = a.back() * ib % kMod;
            std::size_t off = a.size() - b.size();
            for (std::size_t i = 0; i < b.size(); ++i) a[off + i] = (a[off + i] + (kMod - f) * b[i]) % kMod;
            trim(a);
            if (a.empty()) break;
        }
        std::swap(a, b);
    }
    return static_cast<int>(a.size()) - 1;
}

// p(t + j) modulo kMod.
std::vector<std::uint64_t> mod_shift(const std::vector<std::uint64_t>& p, std::uint64_t j) {
    std::vector<std::uint64_t> r{p.back()};
    for (std::size_t i = p.size() - 1; i-- > 0;) {
        r.push_back(0);
        for (std::size_t m = r.size() - 1; m > 0; --m) r[m] = (r[m - 1] + j * r[m]) % kMod;
        r[0] = (j * r[0] + p[i]) % kMod;
    }
    return r;
}

// Nonnegative j with deg gcd(p(t + j), q(t)) > 0 for p, q over Q. A common
// root a of p(t + j) and q gives j = b - a for roots a, b, so j is below the
// sum of the root bounds. A shared factor survives reduction modulo a prime
// not dividing the leading coefficients; the modular scan only proposes
// candidates and each one is confirmed by an exact gcd.
std::vector<long> rational_dispersion(const Poly& p, const Poly& q) {
    long bound = static_cast<long>(std::ceil(root_bound(p) + root_bound(q))) + 1;
    std::vector<std::uint64_t> pm, qm;
    bool modular = mod_image(p, pm) && mod_image(q, qm);
    std::vector<long> out;
    for (long j = 0; j <= bound; ++j) {
        if (modular && mod_gcd_deg(mod_shift(pm, static_cast<std::uint64_t>(j)), qm) <= 0) continue;
        if (gcd(taylor_shift(p, Q(j)), q).deg() > 0) out.push_back(j);
    }
    return out;
}

}  // namespace

std::vector<long> dispersion(const Poly& p, const Poly& q, const Tower& T) {
    int L = p.var;
    if (!T.is_rational_base(L) || q.var != L)
        throw std::invalid_argument("dispersion: level is not the rational base");
    if (p.is_zero() || q.is_zero()) throw std::invalid_argument("dispersion of the zero polynomial");
    if (p.deg() == 0 || q.deg() == 0) return {};
    if (T.base() == 0) return rational_dispersion(p, q);
    // Parameters: candidates from a specialization that keeps both degrees
    // (a common factor of sigma^j(p) and q survives it), then an exact gcd
    // test discards the shifts only the specialization introduced.
    // Values u/1009 with small u: an integer combination of parameters
    // becomes an integer only through a multiple of 1009.
    for (int attempt = 0; attempt < 10; ++attempt) {
        std::vector<Q> vals(T.base() + 1);
        for (int i = 1; i <= T.base(); ++i) vals[i] = Q(3 + 7 * attempt + 2 * i, 1009);
        auto specialized = [&](const Poly& x, Poly& out) {
            out = Poly(1);
            for (const auto& c : x.c) {
                Q v;
                if (!specialize(c, vals, v)) return false;
                out.c.push_back(Elem(v));
            }
            out.trim();
            return out.deg() == x.deg();
        };
        Poly ps, qs;
        if (!specialized(p, ps) || !specialized(q, qs)) continue;
        std::vector<long> out;
        auto cands = rational_dispersion(ps, qs);
        for (long j : cands)
            if (gcd(sigma_poly(T, p, j), q).deg() > 0) out.push_back(j);
        return out;
    }
    throw std::runtime_error("dispersion: no admissible parameter specialization");
}

DenominatorBound denominator_bound(Context& ctx, const Elem& a0, const Elem& a1, const Vec& f, int L) {
    const Tower& T = ctx.tower();
    DenominatorBound out;
    out.d = Poly::constant(L, Elem(1));
    if (L <= T.base()) return out;
    if (a0.is_zero() || a1.is_zero()) throw std::invalid_argument("denominator_bound needs a0*a1 != 0");
    Vec all{a0, a1};
    all.insert(all.end(), f.begin(), f.end());
    Elem D = Elem::from_poly(common_denominator(all, L));
    Poly A0 = as_poly(a0 * D, L), A1 = as_poly(a1 * D, L);
    const int W = std::max(0, ctx.options().den_window);

    if (T.is_rational_base(L)) {
        Poly A = sigma_poly(T, A1, -1);
        auto disp = dispersion(A0, A, T);
        if (disp.empty()) return out;
        out.d = chain_denominator(T, A0, A, disp);
        out.provenance = out.d.deg() > 0 ? DenProvenance::AbramovDispersion : DenProvenance::Trivial;
        return out;
    }

    if (T.is_sigma(L)) {
        if (A0.deg() == 0 || A1.deg() == 0) return out;
        out.d = chain_denominator(T, A0, sigma_poly(T, A1, -1), window(W));
        out.provenance = DenProvenance::Windowed;
        out.complete = false;
        ctx.flag("denominator bound: windowed shift scan on a Sigma* level");
        return out;
    }

    // Pi level: d = t^v * d_ap.
    int n0 = valuation(A0), n1 = valuation(A1);
    int nf = INT_MAX;
    for (const auto& x : f) {
        if (x.is_zero()) continue;
        nf = std::min(nf, valuation(as_poly(x * D, L)));
    }
    long v = nf == INT_MAX ? 0 : std::max(0, std::min(n0, n1) - nf);
    if (n0 == n1) {
        const Elem &c0 = A0.c[n0], &c1 = A1.c[n1];
        if (c0 != -c1) {
            // Cancellation of the lowest terms: at most one v can work.
            const Elem& alpha = T.generator(L).alpha;
            bool found = false;
            for (long w = v + 1; w <= v + W; ++w) {
                if (!solve_fplde(ctx, c0, c1 * alpha.pow(-w), {}, L - 1).empty()) {
                    v = w;
                    found = true;
                    break;
                }
            }
            if (!found) {
                out.complete = false;
                ctx.flag("denominator bound: windowed valuation scan on a Pi level");
            }
        }
    }
    Poly B = shift_down(A0, n0), A = sigma_poly(T, shift_down(A1, n1), -1);
    Poly dap = Poly::constant(L, Elem(1));
    if (B.deg() > 0 && A.deg() > 0) {
        dap = chain_denominator(T, B, A, window(W));
        out.complete = false;
        ctx.flag("denominator bound: windowed shift scan on a Pi level");
    }
    out.d = Poly::monomial(L, Elem(1), static_cast<int>(v)) * dap;
    out.provenance = dap.deg() > 0 ? DenProvenance::Windowed
                                   : (v > 0 ? DenProvenance::PiPower : DenProvenance::Trivial);
    return out;
}

int degree_bound_fplde(Context& ctx, const Elem& a0, const Elem& a1, const Vec& f, int L) {
    const Tower& T = ctx.tower();
    if (L <= T.base()) throw std::invalid_argument("degree bound requested at the constant field");
    if (a0.is_zero() && a1.is_zero()) throw std::invalid_argument("degree bound with a = 0");
    int l0 = a0.deg(L), l1 = a1.deg(L), l = std::max(l0, l1);
    int md = maxdeg(f, L);
    int m0 = md - l;
    int m = m0;

    if (T.is_rational_base(L)) {
        if (!a0.is_zero() && !a1.is_zero()) {
            Elem s = a0 + a1;
            int d1 = s.deg(L), d2 = l1;
            if (d1 >= d2) {
                m = md - d1;
            } else {
                m = md - d2 + 1;
                if (d1 == d2 - 1) {
                    Elem n0 = s.is_zero() ? Elem(0) : -s.coeff(L, d1) / a1.coeff(L, d2);
                    long k;
                    if (nonneg_integer(n0, k)) m = std::max<long>(m, k);
                }
            }
        }
        return std::max(m, -1);
    }

    const int W = std::max(1, ctx.options().den_window);
    if (l0 == l1) {
        Elem u = a1.coeff(L, l), v = a0.coeff(L, l);
        if (T.is_sigma(L)) {
            if (!solve_fplde(ctx, v, u, {}, L - 1).empty()) {
                // Degrees above m0 + 1 need sigma(w) - w = -m*beta - kappa in the level below.
                Elem kappa = a1.coeff(L, l - 1) / u - a0.coeff(L, l - 1) / v;
                SolutionBasis b = first_row_reduce(solve_pt(ctx, {kappa, T.generator(L).beta}, L - 1));
                m = m0 + 1;
                if (!b.empty() && !b.rows[0].c[0].is_zero()) {
                    long k;
                    if (nonneg_integer(b.rows[0].c[1] / b.rows[0].c[0], k)) m = std::max<long>(m, k);
                }
            }
        } else {
            const Elem& alpha = T.generator(L).alpha;
            if (v == -u) {
                m = std::max(m0, 0);
            } else {
                bool found = false;
                int start = std::max(m0 + 1, 0);
                for (int w = start; w < start + W; ++w) {
                    if (!solve_fplde(ctx, v, u * alpha.pow(w), {}, L - 1).empty()) {
                        m = std::max(m0, w);
                        found = true;
                        break;
                    }
                }
                if (!found) ctx.flag("degree bound: windowed homogeneous lift on a Pi level");
            }
        }
    }
    m = std::max(m, -1);
    if (ctx.options().deg_slack > 0) m += ctx.options().deg_slack;
    return m;
}

int degree_bound_pt(const Context& ctx, const Vec& f, int L) {
    int md = maxdeg(f, L);
    return ctx.tower().is_pi(L) ? md : md + 1;
}

}  // namespace pisigma
