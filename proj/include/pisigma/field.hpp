#pragma once
// Exact arithmetic in towers of rational function fields Q(t_1)...(t_e).
//
// Level 0 is Q. An element of level L > 0 is a reduced fraction num/den of
// polynomials in t_L whose coefficients live at levels < L. The stored form
// is canonical: den is monic, gcd(num, den) = 1, and an element whose num
// and den are both constant in t_L is stored at the lower level. Hence
// structural equality is field equality and level() is the smallest L with
// the element in Q(t_1)...(t_L).

#include <gmpxx.h>

#include <memory>
#include <string>
#include <vector>

namespace pisigma {

using Q = mpq_class;

class Elem;

// Dense univariate polynomial in t_var, coefficients lowest degree first,
// no trailing zeros. Every coefficient has level < var.
struct Poly {
    int var = 0;
    std::vector<Elem> c;

    Poly() = default;
    explicit Poly(int v) : var(v) {}
    Poly(int v, std::vector<Elem> coeffs);

    int deg() const { return static_cast<int>(c.size()) - 1; }  // -1 for zero
    bool is_zero() const { return c.empty(); }
    const Elem& lc() const { return c.back(); }
    Elem coeff(int i) const;
    void trim();

    static Poly constant(int v, const Elem& a);
    static Poly monomial(int v, const Elem& a, int k);
};

bool operator==(const Poly& a, const Poly& b);

Poly operator+(const Poly& a, const Poly& b);
Poly operator-(const Poly& a, const Poly& b);
Poly operator-(const Poly& a);
Poly operator*(const Poly& a, const Poly& b);
Poly operator*(const Poly& a, const Elem& s);

// a = q*b + r with deg r < deg b. Throws std::domain_error if b == 0.
void divrem(const Poly& a, const Poly& b, Poly& q, Poly& r);
Poly exact_div(const Poly& a, const Poly& b);
Poly monic(const Poly& a);
// Monic gcd; gcd(0, 0) = 0.
Poly gcd(const Poly& a, const Poly& b);
Poly lcm(const Poly& a, const Poly& b);
// Nonzero s such that s*x is polynomial in every generator for all x in cs
// with no common polynomial factor left.
Elem content_scale(const std::vector<Elem>& cs);
// Order of t as a factor; -1 for the zero polynomial.
int valuation(const Poly& a);

class Elem {
public:
    Elem() : q_(0) {}
    Elem(long v) : q_(v) {}                       // NOLINT
    Elem(int v) : q_(v) {}                        // NOLINT
    Elem(const Q& v) : q_(v) { q_.canonicalize(); }  // NOLINT

    // The generator t_L.
    static Elem gen(int level);
    // num/den reduced to canonical form. Throws std::domain_error on den == 0.
    static Elem fraction(const Poly& num, const Poly& den);
    static Elem from_poly(const Poly& num);
    // Skips the gcd: the caller guarantees gcd(num, den) = 1.
    static Elem coprime_fraction(Poly num, Poly den) { return make_coprime(std::move(num), std::move(den)); }

    int level() const { return lvl_; }
    bool is_zero() const { return lvl_ == 0 && sgn(q_) == 0; }
    bool is_one() const { return lvl_ == 0 && q_ == 1; }
    bool is_rational() const { return lvl_ == 0; }
    const Q& rational() const { return q_; }

    // Numerator and denominator as polynomials in t_var, var >= level().
    // For var > level() the element is a constant polynomial.
    Poly num(int var) const;
    Poly den(int var) const;
    // True iff the element is a polynomial in t_var over lower levels.
    bool is_poly(int var) const;
    // Degree in t_var of a polynomial element; -1 for zero.
    int deg(int var) const;
    // Coefficient of t_var^i of a polynomial element.
    Elem coeff(int var, int i) const;

    Elem inv() const;
    Elem pow(long e) const;

    friend bool operator==(const Elem& a, const Elem& b);
    friend Elem operator+(const Elem& a, const Elem& b);
    friend Elem operator-(const Elem& a, const Elem& b);
    friend Elem operator-(const Elem& a);
    friend Elem operator*(const Elem& a, const Elem& b);
    friend Elem operator/(const Elem& a, const Elem& b);

    Elem& operator+=(const Elem& b) { return *this = *this + b; }
    Elem& operator-=(const Elem& b) { return *this = *this - b; }
    Elem& operator*=(const Elem& b) { return *this = *this * b; }
    Elem& operator/=(const Elem& b) { return *this = *this / b; }

private:
    struct Frac {
        Poly num, den;
    };
    int lvl_ = 0;
    Q q_;
    std::shared_ptr<const Frac> f_;

    // num, den coprime with den monic; only demotes constants.
    static Elem make_coprime(Poly num, Poly den);
};

inline bool operator!=(const Elem& a, const Elem& b) { return !(a == b); }

// Canonical text with names[L] used for t_L (names[0] unused). Output is
// valid input for the expression parser.
std::string to_string(const Elem& e, const std::vector<std::string>& names);
std::string to_string(const Poly& p, const std::vector<std::string>& names);

// f = r + p at level L with r a proper fraction in t_L and p a polynomial.
struct SplitFraction {
    Elem proper;
    Elem poly;
};
SplitFraction split_fraction(const Elem& f, int level);

// Common denominator in t_L of a list (monic lcm of the t_L-denominators).
Poly common_denominator(const std::vector<Elem>& v, int level);

}  // namespace pisigma
