#pragma once

#include <cstddef>
#include <functional>
#include <string>

#include "asympt/phicat.hpp"

namespace asympt {

enum class OracleMethod { sum, quadrature };

std::string to_string(OracleMethod m);

/// A brute-force expectation E f(U).
struct OracleResult {
    double value = 0.0;
    std::size_t terms_used = 0; // summands, or integrand evaluations for quadrature
    double tail_bound = 0.0;    // absolute bound on the truncation error
    OracleMethod method = OracleMethod::sum;
};

struct OracleLimits {
    std::size_t max_terms = 10'000'000;
    std::size_t max_evals = 1'000'000;

    /// Defaults, with both caps overridden by ASYMPT_MAX_TERMS when it is set.
    static OracleLimits from_env();
};

/// Function to average plus a majorant used for the tail bounds:
///   |f(u)| <= scale (1 + u)^degree + singular_scale u^(-singular_power),  u >= 0.
/// The singular part is only consulted by the gamma quadrature.
struct Integrand {
    std::function<double(double)> f;
    double scale = 1.0;
    double degree = 0.0;
    double singular_scale = 0.0;
    double singular_power = 0.0;
};

/// phi at counts 0, 1, 2, ... (inverse-moment convention at k = 0).
Integrand discrete_integrand(const PhiSpec& phi);
/// phi on the half line, for the gamma family.
Integrand continuous_integrand(const PhiSpec& phi);
/// (u - center)^n, used to read central moments off the oracles.
Integrand centered_power(double center, unsigned n);

// Relative tolerances are measured against E|f(U)|, which equals |E f(U)| for
// sign-definite f and stays meaningful for centred moments whose mean vanishes.

/// e^-x sum_k x^k f(k) / k!, summed outward from the mode until the tail bound
/// drops below tol * E|f(U)|.
OracleResult expect_poisson(const Integrand& g, double x, double tol, const OracleLimits& limits = {});
OracleResult expect_poisson(const PhiSpec& phi, double x, double tol, const OracleLimits& limits = {});

/// sum_{k=0}^n C(n,k) p^k q^(n-k) f(k); exact finite sum, tail_bound = 0.
OracleResult expect_binomial(const Integrand& g, long n, double p, const OracleLimits& limits = {});
OracleResult expect_binomial(const PhiSpec& phi, long n, double p, const OracleLimits& limits = {});

/// sum_k C(n+k-1,k) p^n q^k f(k).
OracleResult expect_negbinomial(const Integrand& g, long n, double p, double tol, const OracleLimits& limits = {});
OracleResult expect_negbinomial(const PhiSpec& phi, long n, double p, double tol, const OracleLimits& limits = {});

/// integral of f(u) u^(x-1) e^-u / Gamma(x) over an adaptively widened window
/// around x; requires x >= 1.
OracleResult expect_gamma(const Integrand& g, double x, double tol, const OracleLimits& limits = {});
OracleResult expect_gamma(const PhiSpec& phi, double x, double tol, const OracleLimits& limits = {});

/// Digamma psi(x) for x > 0: upward recurrence past 30, then the Stirling-type series.
double digamma_reference(double x);

} // namespace asympt
