#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "asympt/exactmath.hpp"
#include "asympt/families.hpp"
#include "asympt/phicat.hpp"

namespace asympt {

/// mu_n(x) * phi^(n)(x) / n!
struct ExpansionTerm {
    unsigned n;
    RatPoly mu;
    DerivTerm deriv;

    friend bool operator==(const ExpansionTerm&, const ExpansionTerm&) = default;
};

/// S_M(x) = phi(x) + sum_{n=2}^{2M-2} mu_n(x) phi^(n)(x) / n!, which approximates
/// E phi(U_x) up to O(G(x) x^-M).
struct Expansion {
    FamilySpec family;
    PhiSpec phi;
    unsigned M;
    DerivTerm leading; // phi itself
    std::vector<ExpansionTerm> terms; // ascending n, 2 <= n <= 2M-2
};

Expansion build_expansion(const FamilySpec& family, const PhiSpec& phi, unsigned M);

double evaluate(const Expansion& e, double x);

/// One power of x in a collected series: coeff * x^exponent, times log x when with_log.
/// offset is the integer distance of the exponent below the leading one.
struct CollectedTerm {
    int offset;
    Scalar exponent;
    bool with_log;
    Scalar coeff;
};

/// The expansion re-expanded into descending powers of x, truncated at the
/// O(G(x) x^-M) remainder (offsets > -M kept).
struct CollectedSeries {
    FamilySpec family;
    PhiSpec phi;
    unsigned M;
    Scalar lead_exponent;
    Rational step;
    std::vector<CollectedTerm> terms; // descending exponent, log term first at equal exponent

    bool exact() const;
    double eval(double x) const;
    /// Coefficient at the given offset (log-free unless with_log), zero when absent.
    Scalar coefficient(int offset, bool with_log = false) const;
};

/// Only for phi = (x)^(-r) (shift exactly zero) or x log x; throws unsupported_error otherwise.
CollectedSeries collect_powers(const Expansion& e);

enum class Format { text, latex, json };

Format parse_format(std::string_view name);

std::string render(const Expansion& e, Format format);
std::string render(const CollectedSeries& c, Format format);

/// Rebuilds an expansion from its JSON rendering; the stored terms must match a fresh build.
Expansion parse_expansion_json(std::string_view json);

} // namespace asympt
