#include "asympt/families.hpp"

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

void require_probability(const Rational& p, const char* family) {
    if (p <= Rational(0) || p >= Rational(1)) {
        throw parameter_error(fmt::format("{}: p must lie strictly between 0 and 1, got {}", family, p.str()));
    }
}

RatSeries exp_s(std::size_t order) { return series_exp(RatSeries::variable(order)); }

} // namespace

FamilySpec::FamilySpec(Variant v) : v_(std::move(v)) {
    std::visit(overloaded{
                   [](const Poisson&) {},
                   [](const Gamma&) {},
                   [](const Binomial& b) { require_probability(b.p, "binomial"); },
                   [](const NegBinomial& b) { require_probability(b.p, "negative binomial"); },
                   [](const CustomIID& c) {
                       if (c.base_mean <= Rational(0)) {
                           throw parameter_error("iid: base mean must be positive, got " + c.base_mean.str());
                       }
                       if (c.base_mgf.order() < 1) {
                           throw parameter_error("iid: base mgf must be known through at least s^1");
                       }
                       if (c.base_mgf[0] != Rational(1)) {
                           throw parameter_error("iid: base mgf must equal 1 at s = 0, got " + c.base_mgf[0].str());
                       }
                   },
               },
               v_);
    const RatSeries g = g_series(*this, 2);
    if (!g[0].is_zero() || g[1] != Rational(1)) {
        throw parameter_error(fmt::format("{}: g'(0) must equal 1 after normalisation, got {}", name(), g[1].str()));
    }
}

FamilySpec FamilySpec::custom_iid_from_pmf(const std::vector<std::pair<Rational, Rational>>& value_prob,
                                           std::size_t order) {
    if (value_prob.empty()) {
        throw parameter_error("iid: empty pmf");
    }
    Rational total;
    Rational mean;
    std::vector<Rational> mgf(order + 1);
    for (const auto& [value, prob] : value_prob) {
        if (value < Rational(0)) {
            throw parameter_error("iid: support must be nonnegative, got " + value.str());
        }
        if (prob < Rational(0)) {
            throw parameter_error("iid: probabilities must be nonnegative, got " + prob.str());
        }
        total += prob;
        mean += prob * value;
        // E exp(sY) = sum_j E[Y^j] s^j / j!
        Rational power(1);
        for (std::size_t j = 0; j <= order; ++j) {
            mgf[j] += prob * power / factorial(static_cast<unsigned>(j));
            power *= value;
        }
    }
    if (total != Rational(1)) {
        throw parameter_error("iid: probabilities sum to " + total.str() + ", not 1");
    }
    return custom_iid(RatSeries(order, std::move(mgf)), mean);
}

std::string FamilySpec::name() const {
    return std::visit(overloaded{
                          [](const Poisson&) { return std::string("poisson"); },
                          [](const Gamma&) { return std::string("gamma"); },
                          [](const Binomial&) { return std::string("binomial"); },
                          [](const NegBinomial&) { return std::string("nb"); },
                          [](const CustomIID&) { return std::string("iid"); },
                      },
                      v_);
}

std::string FamilySpec::spec_string() const {
    return std::visit(overloaded{
                          [](const Poisson&) { return std::string("poisson"); },
                          [](const Gamma&) { return std::string("gamma"); },
                          [](const Binomial& b) { return "binomial:p=" + b.p.str(); },
                          [](const NegBinomial& b) { return "nb:p=" + b.p.str(); },
                          [](const CustomIID& c) {
                              std::string mgf;
                              for (std::size_t i = 0; i <= c.base_mgf.order(); ++i) {
                                  mgf += (i ? ";" : "") + c.base_mgf[i].str();
                              }
                              return "iid:mgf=" + mgf + ",mean=" + c.base_mean.str();
                          },
                      },
                      v_);
}

bool FamilySpec::is_discrete() const {
    return std::holds_alternative<Poisson>(v_) || std::holds_alternative<Binomial>(v_) ||
           std::holds_alternative<NegBinomial>(v_);
}

std::optional<Rational> FamilySpec::p() const {
    if (const auto* b = std::get_if<Binomial>(&v_)) {
        return b->p;
    }
    if (const auto* b = std::get_if<NegBinomial>(&v_)) {
        return b->p;
    }
    return std::nullopt;
}

bool operator==(const FamilySpec& a, const FamilySpec& b) {
    if (a.v_.index() != b.v_.index()) {
        return false;
    }
    return std::visit(overloaded{
                          [](const Poisson&, const Poisson&) { return true; },
                          [](const Gamma&, const Gamma&) { return true; },
                          [](const Binomial& x, const Binomial& y) { return x.p == y.p; },
                          [](const NegBinomial& x, const NegBinomial& y) { return x.p == y.p; },
                          [](const CustomIID& x, const CustomIID& y) {
                              return x.base_mgf == y.base_mgf && x.base_mean == y.base_mean;
                          },
                          [](const auto&, const auto&) { return false; },
                      },
                      a.v_, b.v_);
}

RatSeries g_series(const FamilySpec& family, std::size_t order) {
    if (order < 2) {
        throw contract_violation("g_series: order must be at least 2");
    }
    return std::visit(
        overloaded{
            // e^s - 1
            [&](const Poisson&) { return exp_s(order) - RatSeries::constant(order, Rational(1)); },
            // -log(1 - s)
            [&](const Gamma&) {
                return series_log(RatSeries::constant(order, Rational(1)) - RatSeries::variable(order)) *
                       Rational(-1);
            },
            // log(q + p e^s) / p, indexed by x = np
            [&](const Binomial& b) {
                const Rational q = Rational(1) - b.p;
                return series_log(RatSeries::constant(order, q) + exp_s(order) * b.p) * (Rational(1) / b.p);
            },
            // (p/q) log(p / (1 - q e^s)) = -(p/q) log((1 - q e^s)/p), indexed by x = nq/p
            [&](const NegBinomial& b) {
                const Rational q = Rational(1) - b.p;
                const RatSeries inner =
                    (RatSeries::constant(order, Rational(1)) - exp_s(order) * q) * (Rational(1) / b.p);
                return series_log(inner) * (-b.p / q);
            },
            // log(E e^{sY}) / E Y
            [&](const CustomIID& c) {
                if (c.base_mgf.order() < order) {
                    throw parameter_error(fmt::format("iid: base mgf known through s^{} but s^{} is required",
                                                      c.base_mgf.order(), order));
                }
                const RatSeries mgf(order, c.base_mgf.coefficients());
                return series_log(mgf) * (Rational(1) / c.base_mean);
            },
        },
        family.variant());
}

std::vector<RatPoly> central_moments(const FamilySpec& family, std::size_t nmax) {
    const RatSeries g = g_series(family, std::max<std::size_t>(nmax, 2));
    std::vector<RatPoly> mu;
    mu.reserve(nmax + 1);
    mu.emplace_back(std::vector<Rational>{Rational(1)});
    if (nmax >= 1) {
        mu.emplace_back();
    }
    // kappa_j = x g^(j)(0)
    auto cumulant = [&](std::size_t j) { return RatPoly::monomial(g.derivative_at_zero(j), 1); };
    for (std::size_t n = 2; n <= nmax; ++n) {
        RatPoly acc;
        for (std::size_t j = 0; j + 2 <= n; ++j) {
            if (mu[j].is_zero()) {
                continue;
            }
            acc += binomial(static_cast<unsigned>(n - 1), static_cast<unsigned>(j)) * (mu[j] * cumulant(n - j));
        }
        mu.push_back(std::move(acc));
    }
    return mu;
}

CoeffTable::CoeffTable(unsigned M) : M_(M) {
    if (M < 1) {
        throw contract_violation("coefficient table needs M >= 1");
    }
    rows_.resize(2 * M);
    for (unsigned n = 0; n < rows_.size(); ++n) {
        rows_[n].resize(n + 1);
    }
}

const Rational& CoeffTable::at(unsigned k, unsigned n) const {
    static const Rational zero;
    if (n < 2 || n >= rows_.size() || k > n) {
        return zero;
    }
    return rows_[n][k];
}

void CoeffTable::set(unsigned k, unsigned n, Rational value) {
    if (n < 2 || n >= rows_.size() || k > n) {
        throw contract_violation(fmt::format("coefficient ({}, {}) outside the table for M = {}", k, n, M_));
    }
    rows_[n][k] = std::move(value);
}

CoeffTable ckn_table(const FamilySpec& family, unsigned M) {
    CoeffTable table(M);
    const auto mu = central_moments(family, table.max_n());
    for (unsigned n = 2; n <= table.max_n(); ++n) {
        for (unsigned k = 0; k <= n; ++k) {
            table.set(k, n, mu[n].coeff(n - k + 1));
        }
    }
    return table;
}

CoeffTable bkn_poisson(unsigned M) {
    CoeffTable table(M);
    // b_kk = 1 (k >= 2); b_kn = 0 for n < k or n > 2k-2;
    // b_{k+1,n+1} = n b_{k,n-1} + (n-k+1) b_kn for k <= n <= 2k-1.
    for (unsigned n = 2; n <= table.max_n(); ++n) {
        for (unsigned k = 2; k <= n; ++k) {
            if (k == n) {
                table.set(k, n, Rational(1));
            } else if (n <= 2 * k - 2) {
                const unsigned kp = k - 1;
                const unsigned np = n - 1;
                table.set(k, n, Rational(np) * table.at(kp, np - 1) + Rational(np - kp + 1) * table.at(kp, np));
            }
        }
    }
    return table;
}

Rational family_mean_index(const FamilySpec& family, const NaturalParams& params) {
    auto require_n = [&](const char* name) {
        if (!params.n) {
            throw parameter_error(fmt::format("{}: natural index n is required", name));
        }
        if (*params.n < 1) {
            throw parameter_error(fmt::format("{}: n must be at least 1, got {}", name, *params.n));
        }
        return Rational(*params.n);
    };
    auto require_x = [&](const char* name) {
        if (params.x) {
            if (*params.x <= Rational(0)) {
                throw parameter_error(fmt::format("{}: x must be positive, got {}", name, params.x->str()));
            }
            return *params.x;
        }
        return require_n(name);
    };
    return std::visit(overloaded{
                          [&](const Poisson&) { return require_x("poisson"); },
                          [&](const Gamma&) { return require_x("gamma"); },
                          [&](const Binomial& b) { return require_n("binomial") * b.p; },
                          [&](const NegBinomial& b) { return require_n("nb") * (Rational(1) - b.p) / b.p; },
                          [&](const CustomIID& c) { return require_n("iid") * c.base_mean; },
                      },
                      family.variant());
}

std::optional<long> natural_index_for_mean(const FamilySpec& family, const Rational& x) {
    std::optional<Rational> n;
    if (const auto* b = std::get_if<Binomial>(&family.variant())) {
        n = x / b->p;
    } else if (const auto* b = std::get_if<NegBinomial>(&family.variant())) {
        n = x * b->p / (Rational(1) - b->p);
    } else if (const auto* c = std::get_if<CustomIID>(&family.variant())) {
        n = x / c->base_mean;
    }
    if (!n || !n->is_integer() || *n < Rational(1) || !n->num().fits_slong_p()) {
        return std::nullopt;
    }
    return n->num().get_si();
}

} // namespace asympt
