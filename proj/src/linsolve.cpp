#include "pisigma/linsolve.hpp"

#include <stdexcept>

namespace pisigma {

namespace {

// Scale a row so that its entries are polynomial and share no content.
void make_primitive(Vec& row) {
    Elem s = content_scale(row);
    if (!s.is_one())
        for (auto& x : row)
            if (!x.is_zero()) x *= s;
}

// In-place reduced row echelon form; returns pivot columns. Elimination is
// fraction-free (cross multiplication) with content removal after every
// row update; pivots are divided out only at the end.
std::vector<std::size_t> rref(Mat& R, std::size_t ncols) {
    std::vector<std::size_t> piv;
    for (auto& row : R) make_primitive(row);
    std::size_t r = 0;
    for (std::size_t col = 0; col < ncols && r < R.size(); ++col) {
        std::size_t i = r;
        while (i < R.size() && R[i][col].is_zero()) ++i;
        if (i == R.size()) continue;
        std::swap(R[r], R[i]);
        const Vec& P = R[r];
        for (std::size_t k = 0; k < R.size(); ++k) {
            if (k == r || R[k][col].is_zero()) continue;
            Elem a = P[col], b = R[k][col];
            for (std::size_t j = 0; j < ncols; ++j) {
                if (P[j].is_zero()) {
                    if (!R[k][j].is_zero()) R[k][j] *= a;
                } else {
                    R[k][j] = a * R[k][j] - b * P[j];
                }
            }
            make_primitive(R[k]);
        }
        piv.push_back(col);
        ++r;
    }
    R.resize(r);
    for (std::size_t k = 0; k < r; ++k) {
        Elem ip = R[k][piv[k]].inv();
        for (auto& x : R[k])
            if (!x.is_zero()) x *= ip;
    }
    return piv;
}

void expand(const Vec& v, int base, Mat& out) {
    int L = 0;
    bool any = false;
    for (const auto& x : v) {
        L = std::max(L, x.level());
        any = any || !x.is_zero();
    }
    if (!any) return;
    if (L <= base) {
        out.push_back(v);
        return;
    }
    // Multiplying by the common denominator keeps the relations; the powers
    // of t_L are independent over the lower levels.
    Poly D = common_denominator(v, L);
    std::vector<Poly> w;
    int maxdeg = -1;
    for (const auto& x : v) {
        Poly xd = x.den(L);
        Poly p = x.num(L) * (xd.deg() == 0 ? D : exact_div(D, xd));
        maxdeg = std::max(maxdeg, p.deg());
        w.push_back(std::move(p));
    }
    for (int j = 0; j <= maxdeg; ++j) {
        Vec sub;
        sub.reserve(w.size());
        for (const auto& p : w) sub.push_back(p.coeff(j));
        expand(sub, base, out);
    }
}

}  // namespace

Mat nullspace(Mat M, std::size_t ncols) {
    auto piv = rref(M, ncols);
    std::vector<bool> is_piv(ncols, false);
    for (auto p : piv) is_piv[p] = true;
    Mat out;
    for (std::size_t j = ncols; j-- > 0;) {
        if (is_piv[j]) continue;
        Vec v(ncols, Elem(0));
        v[j] = Elem(1);
        for (std::size_t k = 0; k < piv.size(); ++k) v[piv[k]] = -M[k][j];
        out.push_back(std::move(v));
    }
    return out;
}

Mat coefficient_rows(const Vec& v, int base) {
    Mat rows;
    expand(v, base, rows);
    return rows;
}

Mat constant_kernel(const Vec& v, int base) { return nullspace(coefficient_rows(v, base), v.size()); }

SolutionBasis first_row_reduce(SolutionBasis b) {
    if (b.n == 0 || b.rows.empty()) return b;
    std::size_t p = 0;
    while (p < b.rows.size() && b.rows[p].c[0].is_zero()) ++p;
    if (p == b.rows.size()) return b;
    if (p != 0) std::swap(b.rows[0], b.rows[p]);
    const SolRow& head = b.rows[0];
    Elem ih = head.c[0].inv();
    for (std::size_t k = 1; k < b.rows.size(); ++k) {
        SolRow& row = b.rows[k];
        if (row.c[0].is_zero()) continue;
        Elem f = row.c[0] * ih;
        for (std::size_t i = 0; i < b.n; ++i) row.c[i] -= f * head.c[i];
        row.g -= f * head.g;
    }
    return b;
}

namespace {
// Rank of a list of (c, g) rows over K; g is expanded into coefficients.
std::size_t rank_of(const std::vector<SolRow>& rows, std::size_t n, int base) {
    if (rows.empty()) return 0;
    // Relations among the rows: sum d_k row_k = 0 in every component.
    Mat eq;
    std::size_t m = rows.size();
    for (std::size_t i = 0; i < n; ++i) {
        Vec v;
        for (const auto& r : rows) v.push_back(r.c[i]);
        expand(v, base, eq);
    }
    Vec gv;
    for (const auto& r : rows) gv.push_back(r.g);
    expand(gv, base, eq);
    return m - nullspace(eq, m).size();
}
}  // namespace

bool same_span(const SolutionBasis& a, const SolutionBasis& b, int base) {
    if (a.n != b.n) return false;
    std::size_t ra = rank_of(a.rows, a.n, base), rb = rank_of(b.rows, b.n, base);
    if (ra != rb) return false;
    std::vector<SolRow> all = a.rows;
    all.insert(all.end(), b.rows.begin(), b.rows.end());
    return rank_of(all, a.n, base) == ra;
}

}  // namespace pisigma
