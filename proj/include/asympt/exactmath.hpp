#pragma once

#include <compare>
#include <concepts>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

namespace asympt {

/// Exact rational number, always held in lowest terms with a positive denominator.
class Rational {
public:
    Rational() = default;

    template <std::integral T>
    Rational(T value) : q_(static_cast<long>(value)) {} // NOLINT(google-explicit-constructor)

    Rational(long num, long den);
    Rational(mpz_class num, mpz_class den);
    explicit Rational(mpq_class q);

    /// Accepts `a/b`, signed integers and decimal literals (`-0.25`, `1e-3`); decimals are read exactly.
    static Rational parse(std::string_view text);
    /// Exact value of a finite double.
    static Rational from_double(double value);

    mpz_class num() const { return q_.get_num(); }
    mpz_class den() const { return q_.get_den(); }
    const mpq_class& raw() const { return q_; }

    bool is_zero() const { return sgn(q_) == 0; }
    bool is_integer() const { return q_.get_den() == 1; }
    int sign() const { return sgn(q_); }
    double to_double() const { return q_.get_d(); }

    /// `n` or `n/d`.
    std::string str() const;

    Rational operator-() const { return Rational(mpq_class(-q_)); }
    Rational& operator+=(const Rational& o);
    Rational& operator-=(const Rational& o);
    Rational& operator*=(const Rational& o);
    Rational& operator/=(const Rational& o);

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.q_ == b.q_; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        const int c = cmp(a.q_, b.q_);
        return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
    }

private:
    mpq_class q_{0};
};

Rational factorial(unsigned n);
Rational binomial(unsigned n, unsigned k);
/// Integer power, negative exponents allowed for nonzero bases.
Rational pow(const Rational& base, int exponent);

/// A coefficient that is exact when its inputs were, and a plain double otherwise.
class Scalar {
public:
    Scalar() : Scalar(Rational{}) {}
    Scalar(Rational exact) : value_(exact.to_double()), exact_(std::move(exact)) {} // NOLINT
    template <std::integral T>
    Scalar(T value) : Scalar(Rational(value)) {} // NOLINT

    static Scalar real(double value);

    bool is_exact() const { return exact_.has_value(); }
    const Rational& exact() const;
    double value() const { return value_; }

    /// Exact form when available, otherwise the shortest round-trip decimal.
    std::string str() const;

    Scalar operator-() const;
    friend Scalar operator+(const Scalar& a, const Scalar& b);
    friend Scalar operator-(const Scalar& a, const Scalar& b);
    friend Scalar operator*(const Scalar& a, const Scalar& b);
    friend Scalar operator/(const Scalar& a, const Scalar& b);

    friend bool operator==(const Scalar& a, const Scalar& b);

private:
    double value_ = 0.0;
    std::optional<Rational> exact_;
};

/// Polynomial in one variable with rational coefficients, index = power.
/// The zero polynomial has no coefficients and degree -1.
class RatPoly {
public:
    RatPoly() = default;
    explicit RatPoly(std::vector<Rational> coefficients);

    static RatPoly monomial(Rational coefficient, std::size_t power);

    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const { return coeffs_.empty(); }
    const std::vector<Rational>& coefficients() const { return coeffs_; }
    /// Coefficient of x^power; zero past the degree.
    Rational coeff(std::size_t power) const;

    RatPoly derivative() const;
    Rational eval(const Rational& x) const;
    /// Evaluated exactly at the (exactly representable) double, then rounded once.
    double eval(double x) const;

    /// Descending powers, e.g. `3*x^2 + x`.
    std::string str(std::string_view var = "x") const;

    RatPoly& operator+=(const RatPoly& o);
    RatPoly& operator-=(const RatPoly& o);
    RatPoly& operator*=(const Rational& c);

    friend RatPoly operator+(RatPoly a, const RatPoly& b) { return a += b; }
    friend RatPoly operator-(RatPoly a, const RatPoly& b) { return a -= b; }
    friend RatPoly operator*(const RatPoly& a, const RatPoly& b);
    friend RatPoly operator*(RatPoly a, const Rational& c) { return a *= c; }
    friend RatPoly operator*(const Rational& c, RatPoly a) { return a *= c; }
    friend bool operator==(const RatPoly&, const RatPoly&) = default;

private:
    void trim();
    std::vector<Rational> coeffs_;
};

/// Power series in s truncated after s^order. Binary operations require equal orders.
class RatSeries {
public:
    explicit RatSeries(std::size_t order);
    /// Shorter coefficient lists are zero-padded; longer ones are truncated.
    RatSeries(std::size_t order, std::vector<Rational> coefficients);

    /// The series of s itself.
    static RatSeries variable(std::size_t order);
    static RatSeries constant(std::size_t order, Rational c);

    std::size_t order() const { return order_; }
    const std::vector<Rational>& coefficients() const { return coeffs_; }
    const Rational& operator[](std::size_t i) const { return coeffs_.at(i); }
    /// j-th derivative at s = 0, i.e. j! * coefficient.
    Rational derivative_at_zero(std::size_t j) const;

    std::string str(std::string_view var = "s") const;

    RatSeries& operator+=(const RatSeries& o);
    RatSeries& operator-=(const RatSeries& o);
    RatSeries& operator*=(const Rational& c);

    friend RatSeries operator+(RatSeries a, const RatSeries& b) { return a += b; }
    friend RatSeries operator-(RatSeries a, const RatSeries& b) { return a -= b; }
    friend RatSeries operator*(const RatSeries& a, const RatSeries& b);
    friend RatSeries operator*(RatSeries a, const Rational& c) { return a *= c; }
    friend RatSeries operator*(const Rational& c, RatSeries a) { return a *= c; }
    friend bool operator==(const RatSeries&, const RatSeries&) = default;

private:
    void require_same_order(const RatSeries& o, const char* op) const;

    std::size_t order_;
    std::vector<Rational> coeffs_;
};

/// exp(a(s)); requires a(0) == 0 so that every coefficient stays rational.
RatSeries series_exp(const RatSeries& a);
/// log(a(s)); requires a(0) == 1.
RatSeries series_log(const RatSeries& a);
/// outer(inner(s)); requires inner(0) == 0.
RatSeries series_compose(const RatSeries& outer, const RatSeries& inner);

} // namespace asympt
