#include "asympt/phicat.hpp"

#include <cmath>

#include <fmt/format.h>

#include "asympt/errors.hpp"

namespace asympt {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_domain(bool ok, const char* what, double x) {
    if (!ok) {
        throw domain_error(fmt::format("{}: x = {} is outside the domain", what, x));
    }
}

} // namespace

PhiSpec::PhiSpec(Variant v) : v_(std::move(v)) {
    if (const auto* l = std::get_if<LogShift>(&v_); l && !(l->beta.value() > 0.0)) {
        throw parameter_error("log: beta must be positive, got " + l->beta.str());
    }
    if (const auto* p = std::get_if<PowerShift>(&v_)) {
        if (!(p->a.value() >= 0.0) || !std::isfinite(p->a.value()) || !std::isfinite(p->r.value())) {
            throw parameter_error("power: a must be a finite nonnegative number and r finite");
        }
    }
}

std::string PhiSpec::name() const {
    return std::visit(overloaded{
                          [](const PowerShift&) { return std::string("power"); },
                          [](const LogShift&) { return std::string("log"); },
                          [](const XLogX&) { return std::string("xlogx"); },
                      },
                      v_);
}

std::string PhiSpec::spec_string() const {
    return std::visit(overloaded{
                          [](const PowerShift& p) { return "power:r=" + p.r.str() + ",a=" + p.a.str(); },
                          [](const LogShift& l) { return "log:beta=" + l.beta.str(); },
                          [](const XLogX&) { return std::string("xlogx"); },
                      },
                      v_);
}

Scalar PhiSpec::shift() const {
    return std::visit(overloaded{
                          [](const PowerShift& p) { return p.a; },
                          [](const LogShift& l) { return l.beta; },
                          [](const XLogX&) { return Scalar(0); },
                      },
                      v_);
}

bool PhiSpec::is_exact() const {
    return std::visit(overloaded{
                          [](const PowerShift& p) { return p.r.is_exact() && p.a.is_exact(); },
                          [](const LogShift& l) { return l.beta.is_exact(); },
                          [](const XLogX&) { return true; },
                      },
                      v_);
}

bool PhiSpec::zero_at_origin() const {
    const auto* p = std::get_if<PowerShift>(&v_);
    return p && p->a.value() == 0.0 && p->r.value() > 0.0;
}

bool operator==(const PhiSpec& a, const PhiSpec& b) {
    if (a.v_.index() != b.v_.index()) {
        return false;
    }
    return std::visit(overloaded{
                          [](const PowerShift& x, const PowerShift& y) { return x.r == y.r && x.a == y.a; },
                          [](const LogShift& x, const LogShift& y) { return x.beta == y.beta; },
                          [](const XLogX&, const XLogX&) { return true; },
                          [](const auto&, const auto&) { return false; },
                      },
                      a.v_, b.v_);
}

double DerivTerm::eval(double x) const {
    const double t = x + shift.value();
    const double base = exponent.value() == 0.0 ? 1.0 : std::pow(t, exponent.value());
    const double value = coeff.value() * base;
    return with_log ? value * (std::log(t) + log_constant.value()) : value;
}

double phi_value(const PhiSpec& phi, double x) {
    return std::visit(overloaded{
                          [&](const PowerShift& p) {
                              const double t = x + p.a.value();
                              const double r = p.r.value();
                              require_domain(t > 0.0 || (t == 0.0 && r <= 0.0), "power", x);
                              if (t == 0.0) {
                                  return r == 0.0 ? 1.0 : 0.0;
                              }
                              return std::pow(t, -r);
                          },
                          [&](const LogShift& l) {
                              const double t = x + l.beta.value();
                              require_domain(t > 0.0, "log", x);
                              return std::log(t);
                          },
                          [&](const XLogX&) {
                              require_domain(x >= 0.0, "xlogx", x);
                              return x == 0.0 ? 0.0 : x * std::log(x);
                          },
                      },
                      phi.variant());
}

double phi_value_at_count(const PhiSpec& phi, double k) {
    if (phi.zero_at_origin() && k < 1.0) {
        return 0.0;
    }
    return phi_value(phi, k);
}

double phi_derivative(const PhiSpec& phi, unsigned n, double x) {
    if (n == 0) {
        return phi_value(phi, x);
    }
    return std::visit(overloaded{
                          [&](const PowerShift& p) {
                              const double t = x + p.a.value();
                              require_domain(t > 0.0, "power derivative", x);
                              const double r = p.r.value();
                              // (-1)^n r (r+1) ... (r+n-1) t^(-r-n)
                              double rising = 1.0;
                              for (unsigned i = 0; i < n; ++i) {
                                  rising *= r + i;
                              }
                              return (n % 2 ? -1.0 : 1.0) * rising * std::pow(t, -r - n);
                          },
                          [&](const LogShift& l) {
                              const double t = x + l.beta.value();
                              require_domain(t > 0.0, "log derivative", x);
                              // (-1)^(n-1) (n-1)! t^(-n)
                              return ((n - 1) % 2 ? -1.0 : 1.0) * std::tgamma(n) * std::pow(t, -static_cast<double>(n));
                          },
                          [&](const XLogX&) {
                              require_domain(x > 0.0, "xlogx derivative", x);
                              if (n == 1) {
                                  return std::log(x) + 1.0;
                              }
                              // (-1)^n (n-2)! x^(1-n)
                              return (n % 2 ? -1.0 : 1.0) * std::tgamma(n - 1) * std::pow(x, 1.0 - n);
                          },
                      },
                      phi.variant());
}

DerivTerm phi_derivative_symbolic(const PhiSpec& phi, unsigned n) {
    const Scalar sign = n % 2 ? Scalar(-1) : Scalar(1);
    return std::visit(overloaded{
                          [&](const PowerShift& p) {
                              Scalar rising(1);
                              for (unsigned i = 0; i < n; ++i) {
                                  rising = rising * (p.r + Scalar(i));
                              }
                              return DerivTerm{sign * rising, p.a, -p.r - Scalar(n), false, Scalar(0)};
                          },
                          [&](const LogShift& l) {
                              if (n == 0) {
                                  return DerivTerm{Scalar(1), l.beta, Scalar(0), true, Scalar(0)};
                              }
                              return DerivTerm{-sign * Scalar(factorial(n - 1)), l.beta,
                                               Scalar(-static_cast<long>(n)), false, Scalar(0)};
                          },
                          [&](const XLogX&) {
                              if (n == 0) {
                                  return DerivTerm{Scalar(1), Scalar(0), Scalar(1), true, Scalar(0)};
                              }
                              if (n == 1) {
                                  return DerivTerm{Scalar(1), Scalar(0), Scalar(0), true, Scalar(1)};
                              }
                              return DerivTerm{sign * Scalar(factorial(n - 2)), Scalar(0),
                                               Scalar(1 - static_cast<long>(n)), false, Scalar(0)};
                          },
                      },
                      phi.variant());
}

double growth_envelope(const PhiSpec& phi, double x) {
    return std::visit(overloaded{
                          [&](const PowerShift& p) { return std::pow(x + p.a.value(), -p.r.value()); },
                          [&](const LogShift&) { return 1.0; },
                          [&](const XLogX&) { return x * std::log(x); },
                      },
                      phi.variant());
}

} // namespace asympt
