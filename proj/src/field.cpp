#include "pisigma/field.hpp"

#include <cstdint>
#include <stdexcept>

namespace pisigma {

// ---------------------------------------------------------------- Poly

Poly::Poly(int v, std::vector<Elem> coeffs) : var(v), c(std::move(coeffs)) { trim(); }

void Poly::trim() {
    while (!c.empty() && c.back().is_zero()) c.pop_back();
}

Elem Poly::coeff(int i) const {
    if (i < 0 || i >= static_cast<int>(c.size())) return Elem(0);
    return c[i];
}

Poly Poly::constant(int v, const Elem& a) {
    Poly p(v);
    if (!a.is_zero()) p.c.push_back(a);
    return p;
}

Poly Poly::monomial(int v, const Elem& a, int k) {
    Poly p(v);
    if (a.is_zero()) return p;
    p.c.assign(k + 1, Elem(0));
    p.c[k] = a;
    return p;
}

bool operator==(const Poly& a, const Poly& b) {
    if (a.c.size() != b.c.size()) return false;
    for (size_t i = 0; i < a.c.size(); ++i)
        if (a.c[i] != b.c[i]) return false;
    return true;
}

Poly operator+(const Poly& a, const Poly& b) {
    Poly r(a.var);
    size_t n = std::max(a.c.size(), b.c.size());
    r.c.resize(n);
    for (size_t i = 0; i < n; ++i) {
        if (i >= a.c.size()) r.c[i] = b.c[i];
        else if (i >= b.c.size()) r.c[i] = a.c[i];
        else r.c[i] = a.c[i] + b.c[i];
    }
    r.trim();
    return r;
}

Poly operator-(const Poly& a) {
    Poly r(a.var);
    r.c.reserve(a.c.size());
    for (const auto& x : a.c) r.c.push_back(-x);
    return r;
}

Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }

Poly operator*(const Poly& a, const Poly& b) {
    Poly r(a.var);
    if (a.is_zero() || b.is_zero()) return r;
    r.c.assign(a.c.size() + b.c.size() - 1, Elem(0));
    for (size_t i = 0; i < a.c.size(); ++i) {
        if (a.c[i].is_zero()) continue;
        for (size_t j = 0; j < b.c.size(); ++j)
            if (!b.c[j].is_zero()) r.c[i + j] += a.c[i] * b.c[j];
    }
    r.trim();
    return r;
}

Poly operator*(const Poly& a, const Elem& s) {
    Poly r(a.var);
    if (s.is_zero()) return r;
    r.c.reserve(a.c.size());
    for (const auto& x : a.c) r.c.push_back(x * s);
    return r;
}

void divrem(const Poly& a, const Poly& b, Poly& q, Poly& r) {
    if (b.is_zero()) throw std::domain_error("polynomial division by zero");
    q = Poly(a.var);
    r = a;
    r.var = a.var;
    int db = b.deg();
    if (r.deg() < db) return;
    q.c.assign(r.deg() - db + 1, Elem(0));
    Elem ilc = b.lc().inv();
    while (!r.is_zero() && r.deg() >= db) {
        int k = r.deg() - db;
        Elem t = b.lc().is_one() ? r.lc() : r.lc() * ilc;
        q.c[k] = t;
        for (int i = 0; i <= db; ++i)
            if (!b.c[i].is_zero()) r.c[i + k] -= t * b.c[i];
        r.c.pop_back();  // leading term cancels exactly
        r.trim();
    }
    q.trim();
}

Poly exact_div(const Poly& a, const Poly& b) {
    Poly q, r;
    divrem(a, b, q, r);
    if (!r.is_zero()) throw std::logic_error("exact_div: nonzero remainder");
    return q;
}

Poly monic(const Poly& a) {
    if (a.is_zero() || a.lc().is_one()) return a;
    return a * a.lc().inv();
}

namespace {

// Arithmetic modulo the prime 2^31 - 1 at a fixed point for all levels.
// Used only to certify that a gcd is trivial or small.
constexpr std::uint64_t kP = 2147483647ULL;

std::uint64_t mulm(std::uint64_t a, std::uint64_t b) { return a * b % kP; }

std::uint64_t powm(std::uint64_t a, std::uint64_t e) {
    std::uint64_t r = 1;
    for (; e; e >>= 1, a = mulm(a, a))
        if (e & 1) r = mulm(r, a);
    return r;
}

std::uint64_t invm(std::uint64_t a) { return powm(a, kP - 2); }

std::uint64_t level_point(int L) { return (static_cast<std::uint64_t>(L) * 2654435761ULL + 97531ULL) % kP; }

bool mod_value(const Elem& e, std::uint64_t& out);

bool mod_poly_value(const Poly& p, std::uint64_t x, std::uint64_t& out) {
    std::uint64_t s = 0;
    for (int i = p.deg(); i >= 0; --i) {
        std::uint64_t c;
        if (!mod_value(p.c[i], c)) return false;
        s = (mulm(s, x) + c) % kP;
    }
    out = s;
    return true;
}

bool mod_value(const Elem& e, std::uint64_t& out) {
    if (e.is_rational()) {
        std::uint64_t n = mpz_fdiv_ui(e.rational().get_num_mpz_t(), kP);
        std::uint64_t d = mpz_fdiv_ui(e.rational().get_den_mpz_t(), kP);
        if (d == 0) return false;
        out = mulm(n, invm(d));
        return true;
    }
    int L = e.level();
    std::uint64_t x = level_point(L), n, d;
    if (!mod_poly_value(e.num(L), x, n) || !mod_poly_value(e.den(L), x, d) || d == 0) return false;
    out = mulm(n, invm(d));
    return true;
}

// Image of p in F_p[t] keeping its degree.
bool mod_image(const Poly& p, std::vector<std::uint64_t>& out) {
    out.resize(p.c.size());
    for (std::size_t i = 0; i < p.c.size(); ++i)
        if (!mod_value(p.c[i], out[i])) return false;
    return !out.empty() && out.back() != 0;
}

void mod_trim(std::vector<std::uint64_t>& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

int mod_gcd_degree(std::vector<std::uint64_t> a, std::vector<std::uint64_t> b) {
    if (a.size() < b.size()) std::swap(a, b);
    while (!b.empty()) {
        std::uint64_t il = invm(b.back());
        while (a.size() >= b.size() && !a.empty()) {
            std::uint64_t f = mulm(a.back(), il);
            std::size_t sh = a.size() - b.size();
            for (std::size_t i = 0; i < b.size(); ++i) a[sh + i] = (a[sh + i] + kP - mulm(f, b[i])) % kP;
            mod_trim(a);
        }
        std::swap(a, b);
    }
    return static_cast<int>(a.size()) - 1;
}

// r with lc(b)^k * a = q*b + r, deg r < deg b (no divisions).
Poly pseudo_remainder(Poly r, const Poly& b) {
    const Elem& lb = b.lc();
    while (!r.is_zero() && r.deg() >= b.deg()) {
        Elem lr = r.lc();
        int sh = r.deg() - b.deg();
        Poly t(r.var);
        t.c.assign(r.c.size(), Elem(0));
        for (std::size_t i = 0; i < r.c.size(); ++i) t.c[i] = lb * r.c[i];
        for (std::size_t i = 0; i < b.c.size(); ++i) t.c[i + sh] -= lr * b.c[i];
        t.trim();
        r = std::move(t);
    }
    return r;
}

}  // namespace

// A nonzero s with s*x polynomial in every level for all x in cs and no
// common factor left among them.
Elem content_scale(const std::vector<Elem>& cs) {
    int M = 0;
    for (const auto& x : cs) M = std::max(M, x.level());
    if (M == 0) {
        mpz_class dl = 1, ng = 0;
        for (const auto& x : cs) {
            if (x.is_zero()) continue;
            dl = lcm(dl, mpz_class(x.rational().get_den()));
            ng = gcd(ng, mpz_class(x.rational().get_num()));
        }
        if (ng == 0) return Elem(1);
        return Elem(Q(dl, ng));
    }
    Poly D = Poly::constant(M, Elem(1));
    for (const auto& x : cs)
        if (!x.is_zero()) D = lcm(D, x.den(M));
    Elem De = Elem::from_poly(D);
    Poly G(M);
    std::vector<Poly> nums;
    for (const auto& x : cs) {
        if (x.is_zero()) continue;
        nums.push_back((x * De).num(M));
        G = gcd(G, nums.back());
    }
    std::vector<Elem> low;
    for (const auto& n : nums) {
        Poly q = exact_div(n, G);
        low.insert(low.end(), q.c.begin(), q.c.end());
    }
    return De / Elem::from_poly(G) * content_scale(low);
}

namespace {

Poly primitive(const Poly& p) {
    if (p.is_zero()) return p;
    Elem s = content_scale(p.c);
    return s.is_one() ? p : p * s;
}

}  // namespace

Poly gcd(const Poly& a0, const Poly& b0) {
    if (a0.is_zero()) return monic(b0);
    if (b0.is_zero()) return monic(a0);
    if (a0.deg() == 0 || b0.deg() == 0) return Poly::constant(a0.var, Elem(1));
    // A degree-preserving image bounds the gcd degree from above.
    std::vector<std::uint64_t> ia, ib;
    if (mod_image(a0, ia) && mod_image(b0, ib)) {
        int d = mod_gcd_degree(ia, ib);
        if (d == 0) return Poly::constant(a0.var, Elem(1));
        const Poly& lo = a0.deg() <= b0.deg() ? a0 : b0;
        const Poly& hi = a0.deg() <= b0.deg() ? b0 : a0;
        if (d == lo.deg()) {
            Poly q, r;
            divrem(hi, lo, q, r);
            if (r.is_zero()) return monic(lo);
        }
    }
    // Primitive pseudo-remainder sequence: content removal keeps the
    // coefficients polynomial in the lower generators and small.
    Poly a = primitive(a0), b = primitive(b0);
    if (a.deg() < b.deg()) std::swap(a, b);
    while (!b.is_zero()) {
        Poly r = pseudo_remainder(a, b);
        a = std::move(b);
        b = primitive(r);
    }
    return monic(a);
}

Poly lcm(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return Poly(a.var);
    return monic(exact_div(a, gcd(a, b)) * b);
}

int valuation(const Poly& a) {
    for (size_t i = 0; i < a.c.size(); ++i)
        if (!a.c[i].is_zero()) return static_cast<int>(i);
    return -1;
}

// ---------------------------------------------------------------- Elem

Elem Elem::gen(int level) {
    if (level <= 0) throw std::invalid_argument("generator level must be positive");
    Poly n(level, {Elem(0), Elem(1)});
    return make_coprime(std::move(n), Poly::constant(level, Elem(1)));
}

Elem Elem::make_coprime(Poly num, Poly den) {
    if (den.is_zero()) throw std::domain_error("division by zero");
    if (num.is_zero()) return Elem(0);
    if (!den.lc().is_one()) {
        Elem il = den.lc().inv();
        num = num * il;
        den = den * il;
    }
    if (num.deg() == 0 && den.deg() == 0) return num.c[0];
    Elem e;
    e.lvl_ = num.var;
    e.q_ = 0;
    e.f_ = std::make_shared<const Frac>(Frac{std::move(num), std::move(den)});
    return e;
}

Elem Elem::fraction(const Poly& num, const Poly& den) {
    if (den.is_zero()) throw std::domain_error("division by zero");
    if (num.is_zero()) return Elem(0);
    Poly g = gcd(num, den);
    if (g.deg() > 0) return make_coprime(exact_div(num, g), exact_div(den, g));
    return make_coprime(num, den);
}

Elem Elem::from_poly(const Poly& num) {
    return make_coprime(num, Poly::constant(num.var, Elem(1)));
}

Poly Elem::num(int var) const {
    if (var < lvl_) throw std::invalid_argument("num: variable below element level");
    if (var > lvl_ || lvl_ == 0) return Poly::constant(var, *this);
    return f_->num;
}

Poly Elem::den(int var) const {
    if (var < lvl_) throw std::invalid_argument("den: variable below element level");
    if (var > lvl_ || lvl_ == 0) return Poly::constant(var, Elem(1));
    return f_->den;
}

bool Elem::is_poly(int var) const {
    if (var > lvl_ || lvl_ == 0) return true;
    if (var < lvl_) return false;
    return f_->den.deg() == 0;
}

int Elem::deg(int var) const {
    if (is_zero()) return -1;
    if (var > lvl_ || lvl_ == 0) return 0;
    if (var < lvl_ || f_->den.deg() != 0)
        throw std::invalid_argument("deg: element is not a polynomial in this variable");
    return f_->num.deg();
}

Elem Elem::coeff(int var, int i) const {
    if (var > lvl_ || lvl_ == 0) return i == 0 ? *this : Elem(0);
    if (var < lvl_ || f_->den.deg() != 0)
        throw std::invalid_argument("coeff: element is not a polynomial in this variable");
    return f_->num.coeff(i);
}

Elem Elem::inv() const {
    if (is_zero()) throw std::domain_error("division by zero");
    if (lvl_ == 0) return Elem(Q(1) / q_);
    return make_coprime(f_->den, f_->num);
}

Elem Elem::pow(long e) const {
    if (e < 0) return inv().pow(-e);
    Elem r(1), b = *this;
    while (e > 0) {
        if (e & 1) r *= b;
        e >>= 1;
        if (e) b *= b;
    }
    return r;
}

bool operator==(const Elem& a, const Elem& b) {
    if (a.lvl_ != b.lvl_) return false;
    if (a.lvl_ == 0) return a.q_ == b.q_;
    if (a.f_ == b.f_) return true;
    return a.f_->num == b.f_->num && a.f_->den == b.f_->den;
}

Elem operator-(const Elem& a) {
    if (a.lvl_ == 0) return Elem(Q(-a.q_));
    return Elem::make_coprime(-a.f_->num, a.f_->den);
}

Elem operator+(const Elem& a, const Elem& b) {
    if (a.lvl_ == 0 && b.lvl_ == 0) return Elem(Q(a.q_ + b.q_));
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    int L = std::max(a.lvl_, b.lvl_);
    Poly an = a.num(L), ad = a.den(L), bn = b.num(L), bd = b.den(L);
    if (ad.deg() == 0 && bd.deg() == 0) return Elem::from_poly(an + bn);
    // (an + ad*bn)/ad stays coprime when bd = 1, and symmetrically.
    if (bd.deg() == 0) return Elem::make_coprime(an + ad * bn, ad);
    if (ad.deg() == 0) return Elem::make_coprime(bn + bd * an, bd);
    Poly g = gcd(ad, bd);
    Poly adg = exact_div(ad, g), bdg = exact_div(bd, g);
    Poly n = an * bdg + bn * adg;
    Poly d = ad * bdg;
    if (g.deg() == 0) return Elem::make_coprime(std::move(n), std::move(d));
    return Elem::fraction(n, d);
}

Elem operator-(const Elem& a, const Elem& b) { return a + (-b); }

Elem operator*(const Elem& a, const Elem& b) {
    if (a.lvl_ == 0 && b.lvl_ == 0) return Elem(Q(a.q_ * b.q_));
    if (a.is_zero() || b.is_zero()) return Elem(0);
    if (a.is_one()) return b;
    if (b.is_one()) return a;
    if (b.lvl_ < a.lvl_) return Elem::make_coprime(a.f_->num * b, a.f_->den);
    if (a.lvl_ < b.lvl_) return Elem::make_coprime(b.f_->num * a, b.f_->den);
    const Poly &an = a.f_->num, &ad = a.f_->den, &bn = b.f_->num, &bd = b.f_->den;
    Poly g1 = gcd(an, bd), g2 = gcd(bn, ad);
    Poly n1 = g1.deg() > 0 ? exact_div(an, g1) : an;
    Poly d2 = g1.deg() > 0 ? exact_div(bd, g1) : bd;
    Poly n2 = g2.deg() > 0 ? exact_div(bn, g2) : bn;
    Poly d1 = g2.deg() > 0 ? exact_div(ad, g2) : ad;
    return Elem::make_coprime(n1 * n2, d1 * d2);
}

Elem operator/(const Elem& a, const Elem& b) { return a * b.inv(); }

// ---------------------------------------------------------------- printing

namespace {

bool is_sum_text(const std::string& s) {
    int depth = 0;
    for (size_t i = 0; i < s.size(); ++i) {
        char ch = s[i];
        if (ch == '(') ++depth;
        else if (ch == ')') --depth;
        else if (depth == 0 && (ch == '+' || (ch == '-' && i > 0))) return true;
    }
    return false;
}

bool needs_wrap_as_factor(const std::string& s) {
    if (s.empty()) return false;
    if (s[0] == '-') return true;
    int depth = 0;
    for (char ch : s) {
        if (ch == '(') ++depth;
        else if (ch == ')') --depth;
        else if (depth == 0 && (ch == '+' || ch == '-' || ch == '/' || ch == '*')) return true;
    }
    return false;
}

std::string wrap(const std::string& s) { return "(" + s + ")"; }

std::string poly_text(const Poly& p, const std::vector<std::string>& names) {
    if (p.is_zero()) return "0";
    std::string name = p.var < static_cast<int>(names.size()) ? names[p.var] : "t" + std::to_string(p.var);
    if (needs_wrap_as_factor(name)) name = wrap(name);
    std::string out;
    for (int i = p.deg(); i >= 0; --i) {
        const Elem& a = p.c[i];
        if (a.is_zero()) continue;
        // A leading sign on a single term is pulled out into the connective.
        std::string cs = to_string(a, names);
        bool negative = cs[0] == '-' && !is_sum_text(cs);
        if (negative) cs.erase(0, 1);
        std::string term;
        std::string mono = i == 0 ? "" : (i == 1 ? name : name + "^" + std::to_string(i));
        if (i == 0) term = cs;
        else if (cs == "1") term = mono;
        else term = (needs_wrap_as_factor(cs) ? wrap(cs) : cs) + "*" + mono;
        if (out.empty()) out = negative ? "-" + term : term;
        else out += negative ? " - " + term : " + " + term;
    }
    return out;
}

}  // namespace

std::string to_string(const Poly& p, const std::vector<std::string>& names) {
    return poly_text(p, names);
}

std::string to_string(const Elem& e, const std::vector<std::string>& names) {
    if (e.is_rational()) return e.rational().get_str();
    int L = e.level();
    std::string n = poly_text(e.num(L), names);
    Poly d = e.den(L);
    if (d.deg() == 0) return n;
    std::string ds = poly_text(d, names);
    if (is_sum_text(n)) n = wrap(n);
    if (needs_wrap_as_factor(ds) || ds.find('^') != std::string::npos) ds = wrap(ds);
    return n + "/" + ds;
}

// ---------------------------------------------------------------- utilities

SplitFraction split_fraction(const Elem& f, int level) {
    if (f.level() < level) return {Elem(0), f};
    if (f.level() > level) throw std::invalid_argument("split_fraction: element above level");
    Poly q, r;
    divrem(f.num(level), f.den(level), q, r);
    return {Elem::fraction(r, f.den(level)), Elem::from_poly(q)};
}

Poly common_denominator(const std::vector<Elem>& v, int level) {
    Poly d = Poly::constant(level, Elem(1));
    for (const auto& x : v) {
        if (x.level() > level) throw std::invalid_argument("common_denominator: element above level");
        if (x.level() < level || x.is_zero()) continue;
        Poly xd = x.den(level);
        if (xd.deg() > 0) d = lcm(d, xd);
    }
    return d;
}

}  // namespace pisigma
