#include "asympt/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <tuple>
#include <utility>
#include <vector>

#include <fmt/format.h>

#include "asympt/compensated.hpp"
#include "asympt/errors.hpp"

namespace asympt {

std::string to_string(OracleMethod m) { return m == OracleMethod::sum ? "sum" : "quadrature"; }

OracleLimits OracleLimits::from_env() {
    OracleLimits limits;
    if (const char* env = std::getenv("ASYMPT_MAX_TERMS"); env != nullptr && *env != '\0') {
        char* end = nullptr;
        const unsigned long long cap = std::strtoull(env, &end, 10);
        if (end == env || *end != '\0' || cap == 0) {
            throw parameter_error(fmt::format("ASYMPT_MAX_TERMS must be a positive integer, got '{}'", env));
        }
        limits.max_terms = static_cast<std::size_t>(cap);
        limits.max_evals = static_cast<std::size_t>(cap);
    }
    return limits;
}

// ---------------------------------------------------------------- integrands

Integrand discrete_integrand(const PhiSpec& phi) {
    Integrand g{[phi](double k) { return phi_value_at_count(phi, k); }};
    if (const auto* p = std::get_if<PowerShift>(&phi.variant())) {
        const double r = p->r.value();
        const double a = p->a.value();
        if (r > 0.0) {
            // (k + a)^-r <= 1 for k >= 1; k = 0 is either zeroed or equals a^-r
            g.scale = a > 0.0 ? std::max(1.0, std::pow(a, -r)) : 1.0;
            g.degree = 0.0;
        } else {
            g.scale = std::pow(1.0 + a, -r);
            g.degree = -r;
        }
    } else if (const auto* l = std::get_if<LogShift>(&phi.variant())) {
        const double beta = l->beta.value();
        g.scale = 1.0 + beta + std::abs(std::log(beta));
        g.degree = 1.0;
    } else {
        g.scale = 1.0;
        g.degree = 2.0;
    }
    return g;
}

Integrand continuous_integrand(const PhiSpec& phi) {
    Integrand g = discrete_integrand(phi);
    g.f = [phi](double u) { return phi_value(phi, u); };
    if (const auto* p = std::get_if<PowerShift>(&phi.variant()); p && p->r.value() > 0.0) {
        // (u + a)^-r <= u^-r
        g.scale = 0.0;
        g.singular_scale = 1.0;
        g.singular_power = p->r.value();
    }
    return g;
}

Integrand centered_power(double center, unsigned n) {
    // |u - c|^n <= (1 + |c|)^n (1 + u)^n for u >= 0
    return Integrand{[center, n](double u) { return std::pow(u - center, static_cast<double>(n)); },
                     std::pow(1.0 + std::abs(center), static_cast<double>(n)), static_cast<double>(n)};
}

// ---------------------------------------------------------------- discrete sums

namespace {

/// A unimodal lattice distribution described by its weight ratios, all of
/// which must be monotone: up(k) = w(k+1)/w(k) decreasing in k, down(k) = w(k-1)/w(k)
/// increasing in k.
struct LatticeLaw {
    const char* name;
    long mode;
    double log_mode_weight;
    long upper; // last support point, or -1 when unbounded
    std::function<double(long)> up;
    std::function<double(long)> down;
};

OracleResult sum_outward(const LatticeLaw& law, const Integrand& g, double tol, const OracleLimits& limits) {
    const double w_mode = std::exp(law.log_mode_weight);
    CompensatedSum<double> mass;
    CompensatedSum<double> total;
    CompensatedSum<double> magnitude; // sum of w |f|, the scale for the relative tolerance
    const double f_mode = g.f(static_cast<double>(law.mode));
    mass += w_mode;
    total += w_mode * f_mode;
    magnitude += w_mode * std::abs(f_mode);
    std::size_t terms = 1;

    long lo = law.mode;
    long hi = law.mode;
    double w_lo = w_mode;
    double w_hi = w_mode;
    auto majorant = [&](long k) { return g.scale * std::pow(1.0 + static_cast<double>(k), g.degree); };
    const bool bounded = law.upper >= 0;

    double value = f_mode;
    double bound = std::numeric_limits<double>::infinity();
    for (;;) {
        if (!bounded || hi < law.upper) {
            w_hi *= law.up(hi);
            ++hi;
            const double f = g.f(static_cast<double>(hi));
            mass += w_hi;
            total += w_hi * f;
            magnitude += w_hi * std::abs(f);
            ++terms;
        }
        if (lo > 0) {
            w_lo *= law.down(lo);
            --lo;
            const double f = g.f(static_cast<double>(lo));
            mass += w_lo;
            total += w_lo * f;
            magnitude += w_lo * std::abs(f);
            ++terms;
        }
        value = total.value() / mass.value();

        // Upper tail: terms beyond hi are dominated by a geometric series.
        double upper_f = 0.0;
        double upper_w = 0.0;
        if (!bounded || hi < law.upper) {
            const double ratio_w = law.up(hi);
            const double growth = std::pow((static_cast<double>(hi) + 2.0) / (static_cast<double>(hi) + 1.0), g.degree);
            const double ratio_f = ratio_w * growth;
            upper_w = ratio_w < 1.0 ? w_hi * ratio_w / (1.0 - ratio_w) : std::numeric_limits<double>::infinity();
            upper_f = ratio_f < 1.0 ? w_hi * majorant(hi) * ratio_f / (1.0 - ratio_f)
                                    : std::numeric_limits<double>::infinity();
        }
        // Lower tail: the lo remaining weights are each below w_lo and shrink geometrically.
        double lower_f = 0.0;
        double lower_w = 0.0;
        if (lo > 0) {
            const double ratio = law.down(lo);
            lower_w = static_cast<double>(lo) * w_lo;
            if (ratio < 1.0) {
                lower_w = std::min(lower_w, w_lo * ratio / (1.0 - ratio));
            }
            lower_f = lower_w * majorant(lo);
        }
        // Normalising by the partial mass moves the error to |value| * missing mass.
        bound = (upper_f + lower_f + std::abs(value) * (upper_w + lower_w)) / mass.value();

        const bool exhausted = (bounded && hi >= law.upper) && lo == 0;
        if (exhausted) {
            bound = 0.0;
            break;
        }
        if (bound <= tol * magnitude.value() / mass.value()) {
            break;
        }
        if (terms >= limits.max_terms) {
            throw convergence_error(fmt::format("{} oracle: tail bound {:.3g} above tolerance after {} terms",
                                                law.name, bound, terms),
                                    value, terms, bound);
        }
    }
    return OracleResult{value, terms, bound, OracleMethod::sum};
}

void require_positive_tol(double tol) {
    if (!(tol > 0.0)) {
        throw contract_violation(fmt::format("oracle tolerance must be positive, got {}", tol));
    }
}

void require_probability(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw parameter_error(fmt::format("p must lie strictly between 0 and 1, got {}", p));
    }
}

void require_count(long n) {
    if (n < 1) {
        throw parameter_error(fmt::format("n must be at least 1, got {}", n));
    }
}

} // namespace

OracleResult expect_poisson(const Integrand& g, double x, double tol, const OracleLimits& limits) {
    if (!(x > 0.0) || !std::isfinite(x)) {
        throw parameter_error(fmt::format("poisson oracle: x must be positive, got {}", x));
    }
    require_positive_tol(tol);
    const long mode = static_cast<long>(std::floor(x));
    const double md = static_cast<double>(mode);
    LatticeLaw law{"poisson",
                   mode,
                   -x + md * std::log(x) - std::lgamma(md + 1.0),
                   -1,
                   [x](long k) { return x / (static_cast<double>(k) + 1.0); },
                   [x](long k) { return static_cast<double>(k) / x; }};
    return sum_outward(law, g, tol, limits);
}

OracleResult expect_poisson(const PhiSpec& phi, double x, double tol, const OracleLimits& limits) {
    return expect_poisson(discrete_integrand(phi), x, tol, limits);
}

OracleResult expect_binomial(const Integrand& g, long n, double p, const OracleLimits& limits) {
    require_count(n);
    require_probability(p);
    const double q = 1.0 - p;
    const double nd = static_cast<double>(n);
    const long mode = std::min(n, static_cast<long>(std::floor((nd + 1.0) * p)));
    const double md = static_cast<double>(mode);
    LatticeLaw law{"binomial",
                   mode,
                   std::lgamma(nd + 1.0) - std::lgamma(md + 1.0) - std::lgamma(nd - md + 1.0) + md * std::log(p) +
                       (nd - md) * std::log1p(-p),
                   n,
                   [=](long k) { return (nd - static_cast<double>(k)) * p / ((static_cast<double>(k) + 1.0) * q); },
                   [=](long k) { return static_cast<double>(k) * q / ((nd - static_cast<double>(k) + 1.0) * p); }};
    if (static_cast<std::size_t>(n) + 1 > limits.max_terms) {
        throw convergence_error(fmt::format("binomial oracle: n = {} exceeds the term cap {}", n, limits.max_terms),
                                std::numeric_limits<double>::quiet_NaN(), 0, std::numeric_limits<double>::infinity());
    }
    // The finite sum always runs to completion, so the tolerance is irrelevant.
    return sum_outward(law, g, 0.0, limits);
}

OracleResult expect_binomial(const PhiSpec& phi, long n, double p, const OracleLimits& limits) {
    return expect_binomial(discrete_integrand(phi), n, p, limits);
}

OracleResult expect_negbinomial(const Integrand& g, long n, double p, double tol, const OracleLimits& limits) {
    require_count(n);
    require_probability(p);
    require_positive_tol(tol);
    const double q = 1.0 - p;
    const double nd = static_cast<double>(n);
    const long mode = n > 1 ? static_cast<long>(std::floor((nd - 1.0) * q / p)) : 0;
    const double md = static_cast<double>(mode);
    LatticeLaw law{"negative binomial",
                   mode,
                   std::lgamma(nd + md) - std::lgamma(md + 1.0) - std::lgamma(nd) + nd * std::log(p) +
                       md * std::log1p(-p),
                   -1,
                   [=](long k) { return q * (nd + static_cast<double>(k)) / (static_cast<double>(k) + 1.0); },
                   [=](long k) { return static_cast<double>(k) / (q * (nd + static_cast<double>(k) - 1.0)); }};
    return sum_outward(law, g, tol, limits);
}

OracleResult expect_negbinomial(const PhiSpec& phi, long n, double p, double tol, const OracleLimits& limits) {
    return expect_negbinomial(discrete_integrand(phi), n, p, tol, limits);
}

// ---------------------------------------------------------------- gamma quadrature

namespace {

/// t - 1 - log t, the Chernoff rate of Gam(x, 1) at u = t x.
double chernoff_rate(double t) { return t - 1.0 - std::log(t); }

/// Bound on E[|f(U)| ; U > c], U ~ Gam(x, 1).
double gamma_upper_tail(const Integrand& g, double x, double c) {
    double bound = 0.0;
    if (g.scale > 0.0) {
        const double s = x + g.degree; // U^d under Gam(x) is Gam(x + d) after reweighting
        if (c <= s) {
            return std::numeric_limits<double>::infinity();
        }
        // (1 + u)^d <= (1 + c)^d (u / c)^d for u >= c
        const double log_moment = std::lgamma(s) - std::lgamma(x);
        bound += g.scale * std::pow((1.0 + c) / c, g.degree) * std::exp(log_moment - s * chernoff_rate(c / s));
    }
    if (g.singular_scale > 0.0) {
        // u^-e <= c^-e on the upper tail
        bound += g.singular_scale * std::pow(c, -g.singular_power) * std::exp(-x * chernoff_rate(c / x));
    }
    return bound;
}

/// Bound on E[|f(U)| ; U < c], U ~ Gam(x, 1), c < x.
double gamma_lower_tail(const Integrand& g, double x, double c) {
    if (c <= 0.0) {
        return 0.0;
    }
    double bound = 0.0;
    if (g.scale > 0.0) {
        bound += g.scale * std::pow(1.0 + c, g.degree) * std::exp(-x * chernoff_rate(c / x));
    }
    if (g.singular_scale > 0.0) {
        const double s = x - g.singular_power;
        if (s <= 0.0 || c >= s) {
            return std::numeric_limits<double>::infinity();
        }
        const double log_moment = std::lgamma(s) - std::lgamma(x);
        bound += g.singular_scale * std::exp(log_moment - s * chernoff_rate(c / s));
    }
    return bound;
}

} // namespace

namespace {

struct QuadResult {
    double value;
    double error;
    double magnitude; // integral of |f|
};

/// Globally adaptive Gauss-Kronrod (7/15) quadrature: the panel with the largest
/// |K15 - G7| is bisected until the summed estimate falls below abs_tol.
template <class F>
QuadResult adaptive_gauss_kronrod(F&& f, double a, double b, double abs_tol, std::size_t max_evals,
                                  std::size_t& evals) {
    static constexpr std::array<double, 8> xgk = {
        0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
        0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
        0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
        0.207784955007898467600689403773245, 0.0};
    static constexpr std::array<double, 8> wgk = {
        0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
        0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
        0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
        0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
    // Gauss weights for the odd-indexed Kronrod nodes and the centre
    static constexpr std::array<double, 4> wg = {0.129484966168869693270611432679082,
                                                 0.279705391489276667901467771423780,
                                                 0.381830050505118944950369775488975,
                                                 0.417959183673469387755102040816327};
    struct Panel {
        double a, b, value, error, magnitude;
    };
    auto rule = [&](double lo, double hi) {
        const double centre = 0.5 * (lo + hi);
        const double half = 0.5 * (hi - lo);
        const double fc = f(centre);
        double kronrod = wgk[7] * fc;
        double gauss = wg[3] * fc;
        double magnitude = wgk[7] * std::abs(fc);
        for (std::size_t i = 0; i < 7; ++i) {
            const double dx = half * xgk[i];
            const double left = f(centre - dx);
            const double right = f(centre + dx);
            const double pair = left + right;
            kronrod += wgk[i] * pair;
            magnitude += wgk[i] * (std::abs(left) + std::abs(right));
            if (i % 2 == 1) {
                gauss += wg[i / 2] * pair;
            }
        }
        evals += 15;
        kronrod *= half;
        gauss *= half;
        magnitude *= half;
        const double noise = 50.0 * std::numeric_limits<double>::epsilon() * magnitude;
        return Panel{lo, hi, kronrod, std::max(std::abs(kronrod - gauss), noise), magnitude};
    };

    std::vector<Panel> panels{rule(a, b)};
    auto totals = [&panels] {
        // panels stay ordered by position, so the sum is reproducible
        CompensatedSum<double> v;
        CompensatedSum<double> e;
        CompensatedSum<double> m;
        for (const auto& p : panels) {
            v += p.value;
            e += p.error;
            m += p.magnitude;
        }
        return std::tuple{v.value(), e.value(), m.value()};
    };
    auto [value, error, magnitude] = totals();
    while (error > abs_tol && evals + 30 <= max_evals) {
        const auto worst = std::max_element(panels.begin(), panels.end(),
                                            [](const Panel& p, const Panel& q) { return p.error < q.error; });
        if (worst->error <= 50.0 * std::numeric_limits<double>::epsilon() * worst->magnitude) {
            break; // every panel is at the rounding floor
        }
        const double mid = 0.5 * (worst->a + worst->b);
        const Panel right = rule(mid, worst->b);
        *worst = rule(worst->a, mid);
        panels.insert(worst + 1, right);
        std::tie(value, error, magnitude) = totals();
    }
    return {value, error, magnitude};
}

} // namespace

OracleResult expect_gamma(const Integrand& g, double x, double tol, const OracleLimits& limits) {
    if (!std::isfinite(x)) {
        throw parameter_error("gamma oracle: x must be finite");
    }
    if (x < 1.0) {
        throw unsupported_error(fmt::format("gamma oracle: shape x = {} below 1 is not supported", x));
    }
    require_positive_tol(tol);
    const double log_norm = std::lgamma(x);
    auto integrand = [&](double u) {
        if (u <= 0.0) {
            return x == 1.0 ? g.f(0.0) : 0.0;
        }
        return g.f(u) * std::exp((x - 1.0) * std::log(u) - u - log_norm);
    };

    std::size_t evals = 0;
    const double sd = std::sqrt(x);
    double width = 8.0;
    for (;;) {
        const double lo = std::max(0.0, x - width * sd);
        const double hi = x + width * sd;
        const double tails = gamma_upper_tail(g, x, hi) + gamma_lower_tail(g, x, lo);
        // A rough first pass fixes the scale for the relative tolerance.
        std::size_t scratch = 0;
        const double scale = adaptive_gauss_kronrod(integrand, lo, hi, 0.0, 15, scratch).magnitude;
        if (tails > tol * scale / 2.0 && std::isfinite(scale)) {
            width *= 1.5;
            if (width > 1e6) {
                throw convergence_error("gamma oracle: tail bound does not shrink", scale, evals, tails);
            }
            continue;
        }
        const auto quad = adaptive_gauss_kronrod(integrand, lo, hi, tol * scale / 2.0, limits.max_evals, evals);
        const double bound = tails + quad.error;
        if (bound > tol * quad.magnitude) {
            throw convergence_error(
                fmt::format("gamma oracle: error bound {:.3g} above tolerance after {} evaluations", bound, evals),
                quad.value, evals, bound);
        }
        return OracleResult{quad.value, evals, bound, OracleMethod::quadrature};
    }
}

OracleResult expect_gamma(const PhiSpec& phi, double x, double tol, const OracleLimits& limits) {
    return expect_gamma(continuous_integrand(phi), x, tol, limits);
}

double digamma_reference(double x) {
    if (!(x > 0.0) || !std::isfinite(x)) {
        throw domain_error(fmt::format("digamma: x must be positive and finite, got {}", x));
    }
    double shift = 0.0;
    while (x <= 30.0) {
        shift -= 1.0 / x;
        x += 1.0;
    }
    // psi(x) ~ log x - 1/(2x) - sum_k B_2k / (2k x^2k)
    const double inv2 = 1.0 / (x * x);
    static constexpr double coeffs[] = {1.0 / 12.0,         -1.0 / 120.0, 1.0 / 252.0, -1.0 / 240.0,
                                        1.0 / 132.0,        -691.0 / 32760.0, 1.0 / 12.0};
    double series = 0.0;
    for (auto it = std::rbegin(coeffs); it != std::rend(coeffs); ++it) {
        series = (series + *it) * inv2;
    }
    return shift + std::log(x) - 0.5 / x - series;
}

} // namespace asympt
