#pragma once

#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "asympt/expansion.hpp"
#include "asympt/families.hpp"
#include "asympt/oracle.hpp"
#include "asympt/phicat.hpp"

namespace asympt {

/// A point of an error grid. Discrete families carry their natural index n.
struct GridPoint {
    double x;
    std::optional<long> n;
};

/// Grid points for the given means; discrete families need x on their lattice.
std::vector<GridPoint> grid_from_means(const FamilySpec& family, std::span<const double> xs);
/// Grid points for the given natural indices of a discrete family.
std::vector<GridPoint> grid_from_counts(const FamilySpec& family, std::span<const long> ns);

/// Brute-force E f(U_x) for any of the four built-in families.
OracleResult expect_family(const FamilySpec& family, const Integrand& g, const GridPoint& point, double tol,
                           const OracleLimits& limits = {});
OracleResult expect_family(const FamilySpec& family, const PhiSpec& phi, const GridPoint& point, double tol,
                           const OracleLimits& limits = {});

struct ErrorRow {
    double x;
    double oracle;
    double expansion;
    double abs_err;
    double scaled_err;   // abs_err * x^M / G(x)
    double envelope;     // G(x)
    double oracle_bound; // tail bound reported by the oracle
};

/// Oracle against S_M at every grid point; the oracles run at relative tolerance tol / 10.
/// Rows are computed concurrently and returned in grid order.
std::vector<ErrorRow> error_table(const FamilySpec& family, const PhiSpec& phi, unsigned M,
                                  std::span<const GridPoint> grid, double tol, const OracleLimits& limits = {});

enum class SlopeScale {
    envelope, ///< fit log(abs_err / G(x))
    absolute, ///< fit log(abs_err)
};

/// Least-squares slope of the log error against log x. Rows whose error is within
/// 10x the oracle bound are ignored; at least three must remain.
double decay_slope(std::span<const ErrorRow> rows, SlopeScale scale = SlopeScale::envelope);

/// `x,oracle,expansion,abs_err,scaled_err` with shortest round-trip decimals.
void write_csv(std::ostream& out, std::span<const ErrorRow> rows);

struct ExpectedCoeff {
    Rational exponent;
    bool with_log = false;
    Rational value;
};

struct CoeffVerdict {
    Rational exponent;
    bool with_log;
    Rational expected;
    std::optional<Rational> actual;
    bool pass;
};

struct CoeffReport {
    std::vector<CoeffVerdict> verdicts;
    bool pass = false;
};

/// Exact comparison of a collected series against expected coefficients. Collected
/// terms missing from the expectation must vanish.
CoeffReport coefficient_check(const CollectedSeries& collected, std::span<const ExpectedCoeff> expected);

/// Expected coefficients relative to the leading power: values[i] multiplies x^(lead - i).
std::vector<ExpectedCoeff> relative_coefficients(const Rational& lead_exponent, std::span<const Rational> values);

/// Ramanujan's b_kn table equals the Poisson c_kn table read off the moments.
bool recursion_equivalence(unsigned M);

} // namespace asympt
