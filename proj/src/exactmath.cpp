#include "asympt/exactmath.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <utility>

#include <fmt/format.h>

#include "asympt/errors.hpp"

namespace asympt {

// ---------------------------------------------------------------- Rational

Rational::Rational(long num, long den) : Rational(mpz_class(num), mpz_class(den)) {}

Rational::Rational(mpz_class num, mpz_class den) {
    if (den == 0) {
        throw domain_error("rational with zero denominator");
    }
    q_ = mpq_class(num, den);
    q_.canonicalize();
}

Rational::Rational(mpq_class q) : q_(std::move(q)) { q_.canonicalize(); }

namespace {

bool all_digits(std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c) != 0; });
}

mpz_class parse_integer(std::string_view s, std::string_view whole) {
    bool negative = false;
    if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    if (!all_digits(s)) {
        throw parameter_error("malformed number '" + std::string(whole) + "'");
    }
    mpz_class z(std::string(s), 10);
    return negative ? mpz_class(-z) : z;
}

Rational parse_decimal(std::string_view text) {
    std::string_view s = text;
    bool negative = false;
    if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    long exponent = 0;
    if (const auto e = s.find_first_of("eE"); e != std::string_view::npos) {
        const mpz_class ez = parse_integer(s.substr(e + 1), text);
        if (!ez.fits_slong_p() || abs(ez) > 4000) {
            throw parameter_error("exponent out of range in '" + std::string(text) + "'");
        }
        exponent = ez.get_si();
        s = s.substr(0, e);
    }
    std::string digits;
    if (const auto dot = s.find('.'); dot != std::string_view::npos) {
        const auto int_part = s.substr(0, dot);
        const auto frac_part = s.substr(dot + 1);
        if ((!int_part.empty() && !all_digits(int_part)) || (!frac_part.empty() && !all_digits(frac_part)) ||
            (int_part.empty() && frac_part.empty())) {
            throw parameter_error("malformed number '" + std::string(text) + "'");
        }
        digits = std::string(int_part) + std::string(frac_part);
        exponent -= static_cast<long>(frac_part.size());
    } else {
        if (!all_digits(s)) {
            throw parameter_error("malformed number '" + std::string(text) + "'");
        }
        digits = std::string(s);
    }
    mpz_class mantissa(digits, 10);
    if (negative) {
        mantissa = -mantissa;
    }
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(exponent)));
    return exponent >= 0 ? Rational(mantissa * scale, mpz_class(1)) : Rational(mantissa, scale);
}

} // namespace

Rational Rational::parse(std::string_view text) {
    if (text.empty()) {
        throw parameter_error("empty number");
    }
    if (const auto slash = text.find('/'); slash != std::string_view::npos) {
        const mpz_class num = parse_integer(text.substr(0, slash), text);
        const mpz_class den = parse_integer(text.substr(slash + 1), text);
        if (den == 0) {
            throw parameter_error("zero denominator in '" + std::string(text) + "'");
        }
        return Rational(num, den);
    }
    return parse_decimal(text);
}

Rational Rational::from_double(double value) {
    if (!std::isfinite(value)) {
        throw domain_error("cannot represent a non-finite double as a rational");
    }
    mpq_class q(value);
    return Rational(q);
}

std::string Rational::str() const { return q_.get_str(10); }

Rational& Rational::operator+=(const Rational& o) {
    q_ += o.q_;
    return *this;
}
Rational& Rational::operator-=(const Rational& o) {
    q_ -= o.q_;
    return *this;
}
Rational& Rational::operator*=(const Rational& o) {
    q_ *= o.q_;
    return *this;
}
Rational& Rational::operator/=(const Rational& o) {
    if (o.is_zero()) {
        throw domain_error("rational division by zero");
    }
    q_ /= o.q_;
    return *this;
}

Rational factorial(unsigned n) {
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), n);
    return Rational(f, mpz_class(1));
}

Rational binomial(unsigned n, unsigned k) {
    mpz_class c;
    mpz_bin_uiui(c.get_mpz_t(), n, k);
    return Rational(c, mpz_class(1));
}

Rational pow(const Rational& base, int exponent) {
    if (exponent < 0) {
        if (base.is_zero()) {
            throw domain_error("zero raised to a negative power");
        }
        return Rational(1) / pow(base, -exponent);
    }
    mpz_class num;
    mpz_class den;
    mpz_pow_ui(num.get_mpz_t(), base.num().get_mpz_t(), static_cast<unsigned long>(exponent));
    mpz_pow_ui(den.get_mpz_t(), base.den().get_mpz_t(), static_cast<unsigned long>(exponent));
    return Rational(num, den);
}

// ---------------------------------------------------------------- Scalar

Scalar Scalar::real(double value) {
    Scalar s;
    s.value_ = value;
    s.exact_.reset();
    return s;
}

const Rational& Scalar::exact() const {
    if (!exact_) {
        throw contract_violation("scalar has no exact value");
    }
    return *exact_;
}

std::string Scalar::str() const { return exact_ ? exact_->str() : fmt::format("{}", value_); }

Scalar Scalar::operator-() const { return exact_ ? Scalar(-*exact_) : real(-value_); }

Scalar operator+(const Scalar& a, const Scalar& b) {
    return a.exact_ && b.exact_ ? Scalar(*a.exact_ + *b.exact_) : Scalar::real(a.value_ + b.value_);
}
Scalar operator-(const Scalar& a, const Scalar& b) {
    return a.exact_ && b.exact_ ? Scalar(*a.exact_ - *b.exact_) : Scalar::real(a.value_ - b.value_);
}
Scalar operator*(const Scalar& a, const Scalar& b) {
    return a.exact_ && b.exact_ ? Scalar(*a.exact_ * *b.exact_) : Scalar::real(a.value_ * b.value_);
}
Scalar operator/(const Scalar& a, const Scalar& b) {
    return a.exact_ && b.exact_ ? Scalar(*a.exact_ / *b.exact_) : Scalar::real(a.value_ / b.value_);
}
bool operator==(const Scalar& a, const Scalar& b) {
    if (a.exact_ && b.exact_) {
        return *a.exact_ == *b.exact_;
    }
    return a.exact_.has_value() == b.exact_.has_value() && a.value_ == b.value_;
}

// ---------------------------------------------------------------- RatPoly

RatPoly::RatPoly(std::vector<Rational> coefficients) : coeffs_(std::move(coefficients)) { trim(); }

RatPoly RatPoly::monomial(Rational coefficient, std::size_t power) {
    std::vector<Rational> c(power + 1);
    c[power] = std::move(coefficient);
    return RatPoly(std::move(c));
}

void RatPoly::trim() {
    while (!coeffs_.empty() && coeffs_.back().is_zero()) {
        coeffs_.pop_back();
    }
}

Rational RatPoly::coeff(std::size_t power) const { return power < coeffs_.size() ? coeffs_[power] : Rational{}; }

RatPoly RatPoly::derivative() const {
    if (coeffs_.size() <= 1) {
        return {};
    }
    std::vector<Rational> d(coeffs_.size() - 1);
    for (std::size_t i = 1; i < coeffs_.size(); ++i) {
        d[i - 1] = coeffs_[i] * Rational(i);
    }
    return RatPoly(std::move(d));
}

Rational RatPoly::eval(const Rational& x) const {
    Rational acc;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
        acc = acc * x + *it;
    }
    return acc;
}

double RatPoly::eval(double x) const { return eval(Rational::from_double(x)).to_double(); }

std::string RatPoly::str(std::string_view var) const {
    if (coeffs_.empty()) {
        return "0";
    }
    std::string out;
    for (std::size_t i = coeffs_.size(); i-- > 0;) {
        const Rational& c = coeffs_[i];
        if (c.is_zero()) {
            continue;
        }
        const bool negative = c.sign() < 0;
        if (out.empty()) {
            out += negative ? "-" : "";
        } else {
            out += negative ? " - " : " + ";
        }
        const Rational mag = negative ? -c : c;
        std::string power;
        if (i == 1) {
            power = std::string(var);
        } else if (i > 1) {
            power = fmt::format("{}^{}", var, i);
        }
        if (power.empty()) {
            out += mag.str();
        } else if (mag == Rational(1)) {
            out += power;
        } else {
            out += mag.str() + "*" + power;
        }
    }
    return out;
}

RatPoly& RatPoly::operator+=(const RatPoly& o) {
    if (o.coeffs_.size() > coeffs_.size()) {
        coeffs_.resize(o.coeffs_.size());
    }
    for (std::size_t i = 0; i < o.coeffs_.size(); ++i) {
        coeffs_[i] += o.coeffs_[i];
    }
    trim();
    return *this;
}

RatPoly& RatPoly::operator-=(const RatPoly& o) {
    if (o.coeffs_.size() > coeffs_.size()) {
        coeffs_.resize(o.coeffs_.size());
    }
    for (std::size_t i = 0; i < o.coeffs_.size(); ++i) {
        coeffs_[i] -= o.coeffs_[i];
    }
    trim();
    return *this;
}

RatPoly& RatPoly::operator*=(const Rational& c) {
    for (auto& a : coeffs_) {
        a *= c;
    }
    trim();
    return *this;
}

RatPoly operator*(const RatPoly& a, const RatPoly& b) {
    if (a.is_zero() || b.is_zero()) {
        return {};
    }
    std::vector<Rational> c(a.coeffs_.size() + b.coeffs_.size() - 1);
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
        for (std::size_t j = 0; j < b.coeffs_.size(); ++j) {
            c[i + j] += a.coeffs_[i] * b.coeffs_[j];
        }
    }
    return RatPoly(std::move(c));
}

// ---------------------------------------------------------------- RatSeries

RatSeries::RatSeries(std::size_t order) : order_(order), coeffs_(order + 1) {}

RatSeries::RatSeries(std::size_t order, std::vector<Rational> coefficients)
    : order_(order), coeffs_(std::move(coefficients)) {
    coeffs_.resize(order + 1);
}

RatSeries RatSeries::variable(std::size_t order) {
    RatSeries s(order);
    if (order >= 1) {
        s.coeffs_[1] = Rational(1);
    }
    return s;
}

RatSeries RatSeries::constant(std::size_t order, Rational c) {
    RatSeries s(order);
    s.coeffs_[0] = std::move(c);
    return s;
}

Rational RatSeries::derivative_at_zero(std::size_t j) const {
    return j <= order_ ? coeffs_[j] * factorial(static_cast<unsigned>(j)) : Rational{};
}

std::string RatSeries::str(std::string_view var) const {
    RatPoly p(coeffs_);
    return p.str(var) + fmt::format(" + O({}^{})", var, order_ + 1);
}

void RatSeries::require_same_order(const RatSeries& o, const char* op) const {
    if (order_ != o.order_) {
        throw contract_violation(fmt::format("series {}: order mismatch ({} vs {})", op, order_, o.order_));
    }
}

RatSeries& RatSeries::operator+=(const RatSeries& o) {
    require_same_order(o, "add");
    for (std::size_t i = 0; i <= order_; ++i) {
        coeffs_[i] += o.coeffs_[i];
    }
    return *this;
}

RatSeries& RatSeries::operator-=(const RatSeries& o) {
    require_same_order(o, "sub");
    for (std::size_t i = 0; i <= order_; ++i) {
        coeffs_[i] -= o.coeffs_[i];
    }
    return *this;
}

RatSeries& RatSeries::operator*=(const Rational& c) {
    for (auto& a : coeffs_) {
        a *= c;
    }
    return *this;
}

RatSeries operator*(const RatSeries& a, const RatSeries& b) {
    a.require_same_order(b, "mul");
    RatSeries c(a.order_);
    for (std::size_t i = 0; i <= a.order_; ++i) {
        if (a.coeffs_[i].is_zero()) {
            continue;
        }
        for (std::size_t j = 0; i + j <= a.order_; ++j) {
            c.coeffs_[i + j] += a.coeffs_[i] * b.coeffs_[j];
        }
    }
    return c;
}

RatSeries series_exp(const RatSeries& a) {
    if (!a[0].is_zero()) {
        throw domain_error("series_exp: constant term must be zero");
    }
    const std::size_t order = a.order();
    std::vector<Rational> c(order + 1);
    c[0] = Rational(1);
    // n c_n = sum_{k=1..n} k a_k c_{n-k}
    for (std::size_t n = 1; n <= order; ++n) {
        Rational acc;
        for (std::size_t k = 1; k <= n; ++k) {
            if (!a[k].is_zero()) {
                acc += Rational(k) * a[k] * c[n - k];
            }
        }
        c[n] = acc / Rational(n);
    }
    return RatSeries(order, std::move(c));
}

RatSeries series_log(const RatSeries& a) {
    if (a[0] != Rational(1)) {
        throw domain_error("series_log: constant term must be one");
    }
    const std::size_t order = a.order();
    std::vector<Rational> b(order + 1);
    // a * b' = a'  =>  n b_n = n a_n - sum_{k=1..n-1} k b_k a_{n-k}
    for (std::size_t n = 1; n <= order; ++n) {
        Rational acc = Rational(n) * a[n];
        for (std::size_t k = 1; k < n; ++k) {
            if (!b[k].is_zero()) {
                acc -= Rational(k) * b[k] * a[n - k];
            }
        }
        b[n] = acc / Rational(n);
    }
    return RatSeries(order, std::move(b));
}

RatSeries series_compose(const RatSeries& outer, const RatSeries& inner) {
    if (outer.order() != inner.order()) {
        throw contract_violation("series_compose: order mismatch");
    }
    if (!inner[0].is_zero()) {
        throw domain_error("series_compose: inner series must vanish at zero");
    }
    const std::size_t order = outer.order();
    RatSeries acc(order);
    for (std::size_t i = order + 1; i-- > 0;) {
        acc = acc * inner + RatSeries::constant(order, outer[i]);
    }
    return acc;
}

} // namespace asympt
