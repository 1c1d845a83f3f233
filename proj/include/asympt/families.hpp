#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "asympt/exactmath.hpp"

namespace asympt {

struct Poisson {};
struct Gamma {};
struct Binomial {
    Rational p;
};
struct NegBinomial {
    Rational p;
};
/// Sums of i.i.d. copies of a nonnegative variable Y, given by the Taylor
/// coefficients of E exp(sY) and the mean E Y.
struct CustomIID {
    RatSeries base_mgf;
    Rational base_mean;
};

/// A convolution family U_x indexed by its mean x, with E exp(s U_x) = exp(x g(s)).
/// Construction validates the parameters and that g(0) = 0, g'(0) = 1.
class FamilySpec {
public:
    using Variant = std::variant<Poisson, Binomial, NegBinomial, Gamma, CustomIID>;

    FamilySpec(Variant v); // NOLINT(google-explicit-constructor)

    static FamilySpec poisson() { return FamilySpec(Poisson{}); }
    static FamilySpec gamma() { return FamilySpec(Gamma{}); }
    static FamilySpec binomial(Rational p) { return FamilySpec(Binomial{std::move(p)}); }
    static FamilySpec negbinomial(Rational p) { return FamilySpec(NegBinomial{std::move(p)}); }
    static FamilySpec custom_iid(RatSeries base_mgf, Rational base_mean) {
        return FamilySpec(CustomIID{std::move(base_mgf), std::move(base_mean)});
    }
    /// Custom family whose base variable takes finitely many rational values.
    static FamilySpec custom_iid_from_pmf(const std::vector<std::pair<Rational, Rational>>& value_prob,
                                          std::size_t order);

    const Variant& variant() const { return v_; }
    /// Short name used by the CLI grammar: poisson, binomial, nb, gamma, iid.
    std::string name() const;
    /// Round-trippable CLI form, e.g. `binomial:p=1/3`.
    std::string spec_string() const;
    bool is_discrete() const;
    /// The Binomial/NegBinomial success probability.
    std::optional<Rational> p() const;

    friend bool operator==(const FamilySpec& a, const FamilySpec& b);

private:
    Variant v_;
};

/// Exact Taylor coefficients of g(s) through s^order.
RatSeries g_series(const FamilySpec& family, std::size_t order);

/// mu_0 .. mu_nmax, the central moments E(U_x - x)^n as polynomials in x,
/// from the cumulant recursion mu_n = sum_{j<=n-2} C(n-1,j) mu_j x g^(n-j)(0).
std::vector<RatPoly> central_moments(const FamilySpec& family, std::size_t nmax);

/// c_kn (or b_kn) for 2 <= n <= 2M-1 and 0 <= k <= n, where
/// mu_n = sum_k c_kn x^(n-k+1).
class CoeffTable {
public:
    explicit CoeffTable(unsigned M);

    unsigned M() const { return M_; }
    unsigned max_n() const { return 2 * M_ - 1; }
    /// Zero outside the stored range.
    const Rational& at(unsigned k, unsigned n) const;
    void set(unsigned k, unsigned n, Rational value);

    friend bool operator==(const CoeffTable&, const CoeffTable&) = default;

private:
    unsigned M_;
    std::vector<std::vector<Rational>> rows_; // rows_[n][k]
};

CoeffTable ckn_table(const FamilySpec& family, unsigned M);

/// Ramanujan's b_kn computed by the original integer recursion, independent of
/// any moment machinery.
CoeffTable bkn_poisson(unsigned M);

/// Natural index of a family: n for the discrete families, the mean itself otherwise.
struct NaturalParams {
    std::optional<long> n;
    std::optional<Rational> x;
};

/// The mean x indexing the family (np, nq/p, n E Y, or x itself).
Rational family_mean_index(const FamilySpec& family, const NaturalParams& params);

/// Inverse of family_mean_index for the discrete families; nullopt when x is not on the lattice.
std::optional<long> natural_index_for_mean(const FamilySpec& family, const Rational& x);

} // namespace asympt
