#include "asympt/verify.hpp"

#include <cmath>
#include <future>

#include <fmt/format.h>

#include "asympt/errors.hpp"

namespace asympt {

std::vector<GridPoint> grid_from_means(const FamilySpec& family, std::span<const double> xs) {
    std::vector<GridPoint> grid;
    for (const double x : xs) {
        if (!(x > 0.0) || !std::isfinite(x)) {
            throw parameter_error(fmt::format("grid: x must be positive, got {}", x));
        }
        GridPoint point{x, std::nullopt};
        if (family.is_discrete() && !std::holds_alternative<Poisson>(family.variant())) {
            point.n = natural_index_for_mean(family, Rational::from_double(x));
            if (!point.n) {
                throw parameter_error(
                    fmt::format("grid: x = {} is not a mean of {} for any integer n", x, family.spec_string()));
            }
        }
        grid.push_back(point);
    }
    return grid;
}

std::vector<GridPoint> grid_from_counts(const FamilySpec& family, std::span<const long> ns) {
    std::vector<GridPoint> grid;
    for (const long n : ns) {
        const Rational x = family_mean_index(family, NaturalParams{n, std::nullopt});
        grid.push_back({x.to_double(), n});
    }
    return grid;
}

OracleResult expect_family(const FamilySpec& family, const Integrand& g, const GridPoint& point, double tol,
                           const OracleLimits& limits) {
    auto natural = [&] {
        if (!point.n) {
            throw parameter_error(fmt::format("{}: the oracle needs the natural index n", family.name()));
        }
        return *point.n;
    };
    if (std::holds_alternative<Poisson>(family.variant())) {
        return expect_poisson(g, point.x, tol, limits);
    }
    if (std::holds_alternative<Gamma>(family.variant())) {
        return expect_gamma(g, point.x, tol, limits);
    }
    if (const auto* b = std::get_if<Binomial>(&family.variant())) {
        return expect_binomial(g, natural(), b->p.to_double(), limits);
    }
    if (const auto* b = std::get_if<NegBinomial>(&family.variant())) {
        return expect_negbinomial(g, natural(), b->p.to_double(), tol, limits);
    }
    throw unsupported_error("no brute-force oracle for custom i.i.d. families");
}

OracleResult expect_family(const FamilySpec& family, const PhiSpec& phi, const GridPoint& point, double tol,
                           const OracleLimits& limits) {
    const Integrand g = std::holds_alternative<Gamma>(family.variant()) ? continuous_integrand(phi)
                                                                          : discrete_integrand(phi);
    return expect_family(family, g, point, tol, limits);
}

std::vector<ErrorRow> error_table(const FamilySpec& family, const PhiSpec& phi, unsigned M,
                                  std::span<const GridPoint> grid, double tol, const OracleLimits& limits) {
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (!(grid[i].x > grid[i - 1].x)) {
            throw contract_violation("error_table: grid must be strictly increasing");
        }
    }
    const Expansion e = build_expansion(family, phi, M);
    auto row_at = [&](const GridPoint& point) {
        const OracleResult oracle = expect_family(family, phi, point, tol / 10.0, limits);
        const double s = evaluate(e, point.x);
        const double g = growth_envelope(phi, point.x);
        const double err = std::abs(oracle.value - s);
        return ErrorRow{point.x, oracle.value, s, err, err * std::pow(point.x, M) / g, g, oracle.tail_bound};
    };

    std::vector<std::future<ErrorRow>> pending;
    pending.reserve(grid.size());
    for (const auto& point : grid) {
        pending.push_back(std::async(std::launch::async, row_at, point));
    }
    std::vector<ErrorRow> rows;
    rows.reserve(grid.size());
    for (std::size_t i = 0; i < pending.size(); ++i) {
        try {
            rows.push_back(pending[i].get());
        } catch (const convergence_error& ex) {
            // drain the remaining rows before reporting
            for (std::size_t j = i + 1; j < pending.size(); ++j) {
                try {
                    pending[j].get();
                } catch (...) {
                }
            }
            throw convergence_error(fmt::format("row {} (x = {}): {}", i, grid[i].x, ex.what()), ex.best_value(),
                                    ex.terms_used(), ex.tail_bound());
        }
    }
    return rows;
}

double decay_slope(std::span<const ErrorRow> rows, SlopeScale scale) {
    std::vector<std::pair<double, double>> points;
    for (const auto& r : rows) {
        if (!(r.abs_err > 0.0) || r.abs_err < 10.0 * r.oracle_bound) {
            continue;
        }
        const double y = scale == SlopeScale::envelope ? r.abs_err / r.envelope : r.abs_err;
        points.emplace_back(std::log(r.x), std::log(y));
    }
    if (points.size() < 3) {
        throw insufficient_data_error(
            fmt::format("decay_slope: {} usable rows, at least 3 are required", points.size()));
    }
    double mx = 0.0;
    double my = 0.0;
    for (const auto& [px, py] : points) {
        mx += px;
        my += py;
    }
    mx /= static_cast<double>(points.size());
    my /= static_cast<double>(points.size());
    double sxy = 0.0;
    double sxx = 0.0;
    for (const auto& [px, py] : points) {
        sxy += (px - mx) * (py - my);
        sxx += (px - mx) * (px - mx);
    }
    if (sxx == 0.0) {
        throw insufficient_data_error("decay_slope: all usable rows share the same x");
    }
    return sxy / sxx;
}

void write_csv(std::ostream& out, std::span<const ErrorRow> rows) {
    out << "x,oracle,expansion,abs_err,scaled_err\n";
    for (const auto& r : rows) {
        out << fmt::format("{},{},{},{},{}\n", r.x, r.oracle, r.expansion, r.abs_err,
                           r.scaled_err);
    }
}

CoeffReport coefficient_check(const CollectedSeries& collected, std::span<const ExpectedCoeff> expected) {
    if (!collected.exact()) {
        throw contract_violation("coefficient_check needs a collected series with exact coefficients");
    }
    CoeffReport report;
    report.pass = true;
    auto find = [&](const Rational& exponent, bool with_log) -> const CollectedTerm* {
        for (const auto& t : collected.terms) {
            if (t.exponent.exact() == exponent && t.with_log == with_log) {
                return &t;
            }
        }
        return nullptr;
    };
    for (const auto& e : expected) {
        const CollectedTerm* t = find(e.exponent, e.with_log);
        std::optional<Rational> actual;
        if (t != nullptr) {
            actual = t->coeff.exact();
        }
        const bool ok = actual ? *actual == e.value : e.value.is_zero();
        report.verdicts.push_back({e.exponent, e.with_log, e.value, actual, ok});
        report.pass = report.pass && ok;
    }
    for (const auto& t : collected.terms) {
        const bool listed = std::any_of(expected.begin(), expected.end(), [&](const ExpectedCoeff& e) {
            return e.exponent == t.exponent.exact() && e.with_log == t.with_log;
        });
        if (!listed) {
            report.verdicts.push_back({t.exponent.exact(), t.with_log, Rational(0), t.coeff.exact(), false});
            report.pass = false;
        }
    }
    return report;
}

std::vector<ExpectedCoeff> relative_coefficients(const Rational& lead_exponent, std::span<const Rational> values) {
    std::vector<ExpectedCoeff> out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        out.push_back({lead_exponent - Rational(i), false, values[i]});
    }
    return out;
}

bool recursion_equivalence(unsigned M) { return bkn_poisson(M) == ckn_table(FamilySpec::poisson(), M); }

} // namespace asympt
