#include <doctest.h>

#include "asympt/errors.hpp"
#include "asympt/families.hpp"
#include "support/generators.hpp"

using namespace asympt;

namespace {

Rational R(long n, long d = 1) { return Rational(n, d); }
RatPoly P(std::vector<Rational> c) { return RatPoly(std::move(c)); }

std::vector<FamilySpec> catalog() {
    return {
        FamilySpec::poisson(),
        FamilySpec::gamma(),
        FamilySpec::binomial(R(1, 3)),
        FamilySpec::binomial(R(1, 2)),
        FamilySpec::binomial(R(4, 5)),
        FamilySpec::negbinomial(R(1, 3)),
        FamilySpec::negbinomial(R(1, 2)),
        FamilySpec::negbinomial(R(7, 8)),
        // three-point base variable
        FamilySpec::custom_iid_from_pmf({{R(0), R(1, 4)}, {R(1), R(1, 2)}, {R(3), R(1, 4)}}, 24),
    };
}

} // namespace

TEST_CASE("g_series examples") {
    CHECK(g_series(FamilySpec::poisson(), 3) == RatSeries(3, {0, 1, R(1, 2), R(1, 6)}));
    CHECK(g_series(FamilySpec::gamma(), 3) == RatSeries(3, {0, 1, R(1, 2), R(1, 3)}));
    CHECK(g_series(FamilySpec::binomial(R(1, 2)), 2) == RatSeries(2, {0, 1, R(1, 4)}));
    CHECK_THROWS_AS(g_series(FamilySpec::poisson(), 1), contract_violation);
}

TEST_CASE("central_moments examples") {
    const auto poisson = central_moments(FamilySpec::poisson(), 4);
    REQUIRE(poisson.size() == 5);
    CHECK(poisson[0] == P({1}));
    CHECK(poisson[1].is_zero());
    CHECK(poisson[2] == P({0, 1}));
    CHECK(poisson[3] == P({0, 1}));
    CHECK(poisson[4] == P({0, 1, 3}));

    const Rational p = R(2, 7);
    const Rational q = R(1) - p;
    const auto binom = central_moments(FamilySpec::binomial(p), 4);
    CHECK(binom[4] == P({0, q * (R(1) - R(6) * p * q), R(3) * q * q}));

    CHECK(central_moments(FamilySpec::gamma(), 4) == std::vector<RatPoly>{P({1}), P({}), P({0, 1}), P({0, 2}),
                                                                           P({0, 6, 3})});

    const auto nb = central_moments(FamilySpec::negbinomial(p), 4);
    CHECK(nb[4] == P({0, (R(6) * q + p * p) / (p * p * p), R(3) / (p * p)}));
}

// Values generated by tests/oracles/derive_values.py (sympy, closed-form mgfs).
TEST_CASE("central_moments match the symbolic oracle") {
    const auto poisson = central_moments(FamilySpec::poisson(), 6);
    CHECK(poisson[5] == P({0, 1, 10}));
    CHECK(poisson[6] == P({0, 1, 25, 15}));

    const auto gamma = central_moments(FamilySpec::gamma(), 6);
    CHECK(gamma[5] == P({0, 24, 20}));
    CHECK(gamma[6] == P({0, 120, 130, 15}));

    const auto nb2 = central_moments(FamilySpec::negbinomial(R(1, 2)), 4);
    CHECK(nb2[2] == P({0, 2}));
    CHECK(nb2[3] == P({0, 6}));
    CHECK(nb2[4] == P({0, 26, 12}));

    const auto nb3 = central_moments(FamilySpec::negbinomial(R(1, 3)), 4);
    CHECK(nb3[2] == P({0, 3}));
    CHECK(nb3[3] == P({0, 15}));
    CHECK(nb3[4] == P({0, 111, 27}));

    const auto b3 = central_moments(FamilySpec::binomial(R(1, 3)), 4);
    CHECK(b3[2] == P({0, R(2, 3)}));
    CHECK(b3[3] == P({0, R(2, 9)}));
    CHECK(b3[4] == P({0, R(-2, 9), R(4, 3)}));
}

TEST_CASE("ckn_table examples") {
    const CoeffTable poisson = ckn_table(FamilySpec::poisson(), 3);
    CHECK(poisson.at(3, 4) == R(3));
    CHECK(poisson.at(4, 4) == R(1));
    CHECK(poisson.max_n() == 5);
    CHECK(poisson.at(9, 4).is_zero());

    const Rational p = R(1, 3);
    const Rational q = R(2, 3);
    CHECK(ckn_table(FamilySpec::binomial(p), 3).at(3, 3) == (q - p) * q);

    const CoeffTable nb = ckn_table(FamilySpec::negbinomial(p), 3);
    CHECK(nb.at(2, 2) == R(1) / p);
    CHECK(nb.at(3, 3) == (R(1) + q) / (p * p));
}

TEST_CASE("bkn_poisson examples") {
    const CoeffTable b = bkn_poisson(3);
    CHECK(b.at(2, 2) == R(1));
    CHECK(b.at(3, 4) == R(3));
    CHECK(b.at(4, 5) == R(10));
    CHECK(b.at(5, 5) == R(1));
    CHECK(b.at(2, 3).is_zero());
}

TEST_CASE("b_kn equals the Poisson c_kn for every M <= 10") {
    for (unsigned M = 1; M <= 10; ++M) {
        CHECK(bkn_poisson(M) == ckn_table(FamilySpec::poisson(), M));
    }
}

TEST_CASE("family_mean_index examples") {
    CHECK(family_mean_index(FamilySpec::binomial(R(1, 2)), {10, std::nullopt}) == R(5));
    CHECK(family_mean_index(FamilySpec::negbinomial(R(1, 2)), {10, std::nullopt}) == R(10));
    CHECK(family_mean_index(FamilySpec::gamma(), {std::nullopt, R(7)}) == R(7));
    CHECK(family_mean_index(FamilySpec::poisson(), {std::nullopt, R(5, 2)}) == R(5, 2));

    CHECK(natural_index_for_mean(FamilySpec::binomial(R(1, 3)), R(5)) == 15);
    CHECK(natural_index_for_mean(FamilySpec::negbinomial(R(1, 3)), R(4)) == 2);
    CHECK_FALSE(natural_index_for_mean(FamilySpec::binomial(R(1, 3)), R(1, 2)).has_value());
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(FamilySpec::binomial(R(0)), parameter_error);
    CHECK_THROWS_AS(FamilySpec::binomial(R(1)), parameter_error);
    CHECK_THROWS_AS(FamilySpec::negbinomial(R(3, 2)), parameter_error);
    CHECK_THROWS_AS(FamilySpec::custom_iid(RatSeries(3, {1, 1, R(1, 2)}), R(0)), parameter_error);
    CHECK_THROWS_AS(FamilySpec::custom_iid(RatSeries(3, {2, 1}), R(1)), parameter_error);
    // declared mean disagrees with the mgf, so g'(0) != 1
    CHECK_THROWS_AS(FamilySpec::custom_iid(RatSeries(3, {1, 1, R(1, 2), R(1, 6)}), R(2)), parameter_error);
    CHECK_THROWS_AS(FamilySpec::custom_iid_from_pmf({{R(0), R(1, 2)}, {R(1), R(1, 3)}}, 6), parameter_error);
}

TEST_CASE("custom i.i.d. families reproduce the built-in ones") {
    SUBCASE("Bernoulli sums are binomial") {
        const Rational p = R(2, 5);
        const FamilySpec bern = FamilySpec::custom_iid_from_pmf({{R(0), R(1) - p}, {R(1), p}}, 12);
        CHECK(central_moments(bern, 10) == central_moments(FamilySpec::binomial(p), 10));
    }
    SUBCASE("exponential sums are gamma") {
        const FamilySpec expo = FamilySpec::custom_iid(RatSeries(12, std::vector<Rational>(13, R(1))), R(1));
        CHECK(central_moments(expo, 10) == central_moments(FamilySpec::gamma(), 10));
    }
    SUBCASE("an mgf known to too low an order is reported") {
        const FamilySpec short_mgf = FamilySpec::custom_iid(RatSeries(3, {1, 1, R(1, 2), R(1, 6)}), R(1));
        CHECK_THROWS_AS(central_moments(short_mgf, 6), parameter_error);
    }
}

TEST_CASE("property: Poisson moment recursion mu_{n+1} = x (mu_n' + n mu_{n-1})") {
    const auto mu = central_moments(FamilySpec::poisson(), 20);
    const RatPoly x = RatPoly::monomial(1, 1);
    for (std::size_t n = 2; n + 1 < mu.size(); ++n) {
        CHECK(mu[n + 1] == x * (mu[n].derivative() + Rational(static_cast<long>(n)) * mu[n - 1]));
    }
}

TEST_CASE("property: gamma moment recursion mu_k = (k-1)(mu_{k-1} + x mu_{k-2})") {
    const auto mu = central_moments(FamilySpec::gamma(), 20);
    const RatPoly x = RatPoly::monomial(1, 1);
    for (std::size_t k = 3; k < mu.size(); ++k) {
        CHECK(mu[k] == Rational(static_cast<long>(k - 1)) * (mu[k - 1] + x * mu[k - 2]));
    }
}

TEST_CASE("property: degree bound, vanishing c_kn and mu_1 = 0 for M <= 10") {
    for (const FamilySpec& family : catalog()) {
        CAPTURE(family.spec_string());
        const auto mu = central_moments(family, 19);
        CHECK(mu[0] == P({1}));
        CHECK(mu[1].is_zero());
        for (std::size_t n = 2; n < mu.size(); ++n) {
            CHECK(mu[n].degree() <= static_cast<int>(n / 2));
        }
        const CoeffTable c = ckn_table(family, 10);
        for (unsigned n = 2; n <= c.max_n(); ++n) {
            for (unsigned k = 0; k <= (n + 1) / 2; ++k) {
                CHECK(c.at(k, n).is_zero());
            }
        }
    }
}

TEST_CASE("property: random binomial and NB parameters keep the structural invariants") {
    asympt::testing::Gen gen(0xfa11);
    for (int trial = 0; trial < 12; ++trial) {
        const Rational p = gen.probability(15);
        for (const FamilySpec& family : {FamilySpec::binomial(p), FamilySpec::negbinomial(p)}) {
            CAPTURE(family.spec_string());
            const auto mu = central_moments(family, 12);
            CHECK(mu[1].is_zero());
            CHECK(mu[2] == P({0, family.name() == "binomial" ? R(1) - p : R(1) / p}));
            for (std::size_t n = 2; n < mu.size(); ++n) {
                CHECK(mu[n].degree() <= static_cast<int>(n / 2));
            }
        }
    }
}

// Each coefficient of mu_n is a polynomial in p; divisibility by q = 1 - p means it
// vanishes at p = 1. Lagrange-extrapolate from interior points to p = 1.
TEST_CASE("property: binomial moment coefficients are divisible by q") {
    constexpr std::size_t nmax = 8;
    constexpr long points = 2 * nmax + 2;
    std::vector<Rational> ps;
    std::vector<std::vector<RatPoly>> moments;
    for (long i = 1; i <= points; ++i) {
        ps.push_back(R(i, points + 1));
        moments.push_back(central_moments(FamilySpec::binomial(ps.back()), nmax));
    }
    auto at_one = [&](std::size_t n, std::size_t power) {
        Rational total;
        for (std::size_t i = 0; i < ps.size(); ++i) {
            Rational w(1);
            for (std::size_t j = 0; j < ps.size(); ++j) {
                if (j != i) {
                    w *= (R(1) - ps[j]) / (ps[i] - ps[j]);
                }
            }
            total += w * moments[i][n].coeff(power);
        }
        return total;
    };
    for (std::size_t n = 2; n <= nmax; ++n) {
        for (std::size_t power = 0; power <= n / 2; ++power) {
            CAPTURE(n);
            CAPTURE(power);
            CHECK(at_one(n, power).is_zero());
        }
    }
    // and the q -> 0 limit is approached linearly at three p close to 1
    for (const Rational& eps : {R(1, 10), R(1, 100), R(1, 1000)}) {
        const auto mu = central_moments(FamilySpec::binomial(R(1) - eps), 6);
        for (std::size_t n = 2; n <= 6; ++n) {
            for (const Rational& c : mu[n].coefficients()) {
                CHECK(c / eps <= R(10000));
                CHECK(c / eps >= R(-10000));
            }
        }
    }
}
