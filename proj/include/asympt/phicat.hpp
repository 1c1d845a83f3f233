#pragma once

#include <string>
#include <variant>

#include "asympt/exactmath.hpp"

namespace asympt {

/// phi(x) = (x + a)^(-r). With a = 0 this covers sqrt(x) (r = -1/2) and inverse moments (r > 0).
struct PowerShift {
    Scalar r;
    Scalar a;
};
/// phi(x) = log(x + beta), beta > 0.
struct LogShift {
    Scalar beta;
};
/// phi(x) = x log x, extended by continuity with phi(0) = 0.
struct XLogX {};

class PhiSpec {
public:
    using Variant = std::variant<PowerShift, LogShift, XLogX>;

    PhiSpec(Variant v); // NOLINT(google-explicit-constructor)

    static PhiSpec power(Scalar r, Scalar a) { return PhiSpec(PowerShift{std::move(r), std::move(a)}); }
    static PhiSpec log(Scalar beta) { return PhiSpec(LogShift{std::move(beta)}); }
    static PhiSpec xlogx() { return PhiSpec(XLogX{}); }

    const Variant& variant() const { return v_; }
    std::string name() const;
    /// Round-trippable CLI form, e.g. `power:r=-1/2,a=0`.
    std::string spec_string() const;
    /// The additive shift inside phi (a, beta, or 0).
    Scalar shift() const;
    /// True when every parameter is an exact rational.
    bool is_exact() const;
    /// Inverse-moment convention: phi is taken as 0 below 1 (a = 0, r > 0).
    bool zero_at_origin() const;

    friend bool operator==(const PhiSpec& a, const PhiSpec& b);

private:
    Variant v_;
};

/// Closed-form description of phi^(n):
///   coeff * (x + shift)^exponent                                   (plain)
///   coeff * (x + shift)^exponent * (log(x + shift) + log_constant)  (with_log)
struct DerivTerm {
    Scalar coeff;
    Scalar shift;
    Scalar exponent;
    bool with_log = false;
    Scalar log_constant;

    double eval(double x) const;
    friend bool operator==(const DerivTerm&, const DerivTerm&) = default;
};

double phi_value(const PhiSpec& phi, double x);
/// phi at a nonnegative integer count, applying the inverse-moment convention at k = 0.
double phi_value_at_count(const PhiSpec& phi, double k);
/// n-th derivative, n >= 1, from the closed forms in floating point.
double phi_derivative(const PhiSpec& phi, unsigned n, double x);
/// Exact descriptor of phi^(n); n = 0 describes phi itself.
DerivTerm phi_derivative_symbolic(const PhiSpec& phi, unsigned n);
/// The envelope G(x) bounding |phi^(m)(x)/m!| <= G(x) (A/x)^m.
double growth_envelope(const PhiSpec& phi, double x);

} // namespace asympt
