#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <future>

#include <boost/math/special_functions/digamma.hpp>

#include "asympt/errors.hpp"
#include "asympt/families.hpp"
#include "asympt/oracle.hpp"
#include "support/generators.hpp"

using namespace asympt;

namespace {

Rational R(long n, long d = 1) { return Rational(n, d); }

double rel_diff(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

const PhiSpec identity = PhiSpec::power(-1, 0);
const PhiSpec sqrt_phi = PhiSpec::power(R(-1, 2), 0);

} // namespace

// Reference values below come from tests/oracles/derive_values.py (mpmath, 30 digits).

TEST_CASE("expect_poisson examples") {
    const OracleResult mean = expect_poisson(identity, 7.0, 1e-12);
    CHECK(rel_diff(mean.value, 7.0) <= 1e-12);
    CHECK(mean.method == OracleMethod::sum);
    CHECK(mean.terms_used > 0);

    const OracleResult var = expect_poisson(centered_power(50.0, 2), 50.0, 1e-12);
    CHECK(rel_diff(var.value, 50.0) <= 1e-12);

    const OracleResult root = expect_poisson(sqrt_phi, 100.0, 1e-14);
    CHECK(rel_diff(root.value, 9.98744456269114720717857965589) <= 1e-13);
    CHECK(root.tail_bound <= 1e-14 * root.value);
}

TEST_CASE("expect_binomial examples") {
    CHECK(rel_diff(expect_binomial(identity, 10, 0.5).value, 5.0) <= 1e-15);

    const PhiSpec shifted = PhiSpec::power(1, 1);
    const double p = 0.3;
    const OracleResult two_point = expect_binomial(shifted, 1, p);
    CHECK(rel_diff(two_point.value, (1 - p) * 1.0 + p * 0.5) <= 1e-15);
    CHECK(two_point.tail_bound == 0.0);
    CHECK(two_point.terms_used == 2);

    // k = 0 excluded under the inverse-moment convention
    const OracleResult inverse = expect_binomial(PhiSpec::power(1, 0), 20, 1.0 / 3.0);
    CHECK(rel_diff(inverse.value, 0.17089254681842608742) <= 1e-14);

    CHECK_THROWS_AS(expect_binomial(identity, -1, 0.5), parameter_error);
    CHECK_THROWS_AS(expect_binomial(identity, 10, 1.5), parameter_error);
}

TEST_CASE("expect_negbinomial examples") {
    CHECK(rel_diff(expect_negbinomial(identity, 6, 0.5, 1e-13).value, 6.0) <= 1e-12);
    // variance nq/p^2 = 12
    CHECK(rel_diff(expect_negbinomial(centered_power(6.0, 2), 6, 0.5, 1e-13).value, 12.0) <= 1e-12);
    const OracleResult lg = expect_negbinomial(PhiSpec::log(1), 40, 0.5, 1e-14);
    CHECK(rel_diff(lg.value, 3.68920572449393156592671435526) <= 1e-13);
}

TEST_CASE("expect_gamma examples") {
    const OracleResult mean = expect_gamma(identity, 9.0, 1e-12);
    CHECK(mean.method == OracleMethod::quadrature);
    CHECK(rel_diff(mean.value, 9.0) <= 1e-11);
    CHECK(rel_diff(expect_gamma(centered_power(25.0, 3), 25.0, 1e-12).value, 50.0) <= 1e-9);

    const OracleResult xlx = expect_gamma(PhiSpec::xlogx(), 50.0, 1e-13);
    CHECK(rel_diff(xlx.value, 196.09948367139460985) <= 1e-12);
    CHECK(rel_diff(xlx.value, 50.0 * digamma_reference(51.0)) <= 1e-12);

    CHECK_THROWS_AS(expect_gamma(identity, 0.5, 1e-10), unsupported_error);
}

TEST_CASE("digamma_reference") {
    CHECK(digamma_reference(1.0) == doctest::Approx(-0.5772156649015329).epsilon(1e-15));
    CHECK(digamma_reference(2.0) - digamma_reference(1.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(rel_diff(digamma_reference(51.0), 3.9219896734278921970) <= 1e-15);
    CHECK_THROWS_AS(digamma_reference(0.0), domain_error);
    CHECK_THROWS_AS(digamma_reference(-2.5), domain_error);

    asympt::testing::Gen gen(0xd19a);
    for (int i = 0; i < 200; ++i) {
        const double x = std::exp(gen.uniform(std::log(0.05), std::log(1e4)));
        CAPTURE(x);
        const double ref = boost::math::digamma(x);
        // near the positive root of psi a relative check is meaningless
        CHECK(std::abs(digamma_reference(x) - ref) <= 1e-14 * std::max(1.0, std::abs(ref)));
    }
}

TEST_CASE("iteration caps raise convergence_error") {
    const OracleLimits tiny{5, 30};
    try {
        expect_poisson(PhiSpec::log(1), 100.0, 1e-12, tiny);
        FAIL("expected convergence_error");
    } catch (const convergence_error& e) {
        CHECK(e.terms_used() <= 5);
        CHECK(e.tail_bound() > 0.0);
        CHECK(std::isfinite(e.best_value()));
    }
    CHECK_THROWS_AS(expect_negbinomial(PhiSpec::log(1), 40, 0.5, 1e-12, tiny), convergence_error);
    CHECK_THROWS_AS(expect_gamma(PhiSpec::log(1), 50.0, 1e-12, tiny), convergence_error);
    CHECK_THROWS_AS(expect_binomial(PhiSpec::log(1), 100, 0.5, tiny), convergence_error);
}

TEST_CASE("OracleLimits::from_env") {
    ::unsetenv("ASYMPT_MAX_TERMS");
    const OracleLimits defaults = OracleLimits::from_env();
    CHECK(defaults.max_terms == 10'000'000);
    CHECK(defaults.max_evals == 1'000'000);
    ::setenv("ASYMPT_MAX_TERMS", "123", 1);
    const OracleLimits capped = OracleLimits::from_env();
    CHECK(capped.max_terms == 123);
    CHECK(capped.max_evals == 123);
    ::unsetenv("ASYMPT_MAX_TERMS");
}

TEST_CASE("property: oracle central moments agree with the exact moments at x = 50") {
    struct Case {
        FamilySpec family;
        long n;
    };
    const std::vector<Case> cases{{FamilySpec::poisson(), 0},
                                  {FamilySpec::gamma(), 0},
                                  {FamilySpec::binomial(R(1, 2)), 100},
                                  {FamilySpec::binomial(R(1, 3)), 150},
                                  {FamilySpec::negbinomial(R(1, 2)), 50},
                                  {FamilySpec::negbinomial(R(1, 3)), 25}};
    for (const auto& [family, n] : cases) {
        CAPTURE(family.spec_string());
        const auto mu = central_moments(family, 6);
        const double x = 50.0;
        for (unsigned k = 1; k <= 6; ++k) {
            const Integrand g = centered_power(x, k);
            OracleResult r;
            if (std::holds_alternative<Poisson>(family.variant())) {
                r = expect_poisson(g, x, 1e-13);
            } else if (std::holds_alternative<Gamma>(family.variant())) {
                r = expect_gamma(g, x, 1e-13);
            } else if (std::holds_alternative<Binomial>(family.variant())) {
                r = expect_binomial(g, n, family.p()->to_double());
            } else {
                r = expect_negbinomial(g, n, family.p()->to_double(), 1e-13);
            }
            const double exact = mu[k].eval(x);
            CAPTURE(k);
            if (k == 1) {
                CHECK(std::abs(r.value) <= 1e-8 * std::sqrt(mu[2].eval(x)));
            } else {
                CHECK(rel_diff(r.value, exact) <= 1e-8);
            }
        }
    }
}

TEST_CASE("property: binomial symmetry p <-> 1-p, k <-> n-k") {
    asympt::testing::Gen gen(0x5717);
    for (int trial = 0; trial < 25; ++trial) {
        const long n = gen.integer(1, 400);
        const double p = gen.uniform(0.02, 0.98);
        const Integrand direct{[](double k) { return std::sqrt(k) + std::log1p(k); }, 2.0, 0.5};
        const Integrand mirrored{[n](double k) {
                                     const double m = static_cast<double>(n) - k;
                                     return std::sqrt(m) + std::log1p(m);
                                 },
                                 2.0 * std::sqrt(static_cast<double>(n) + 1), 0.0};
        CAPTURE(n);
        CAPTURE(p);
        CHECK(rel_diff(expect_binomial(direct, n, p).value, expect_binomial(mirrored, n, 1.0 - p).value) <= 1e-12);
    }
}

TEST_CASE("property: results are bit-identical across runs and threads") {
    auto run = [] {
        return std::vector<double>{
            expect_poisson(sqrt_phi, 321.5, 1e-13).value,
            expect_binomial(PhiSpec::log(1), 777, 0.37).value,
            expect_negbinomial(PhiSpec::power(1, 1), 123, 0.41, 1e-13).value,
            expect_gamma(PhiSpec::xlogx(), 88.25, 1e-12).value,
        };
    };
    const std::vector<double> first = run();
    auto other = std::async(std::launch::async, run);
    const std::vector<double> second = other.get();
    for (std::size_t i = 0; i < first.size(); ++i) {
        CHECK(std::memcmp(&first[i], &second[i], sizeof(double)) == 0);
    }
}

TEST_CASE("property: halving tol moves the value by at most the previous tail bound") {
    const std::vector<PhiSpec> phis{sqrt_phi, PhiSpec::log(1), PhiSpec::power(R(3, 2), 1), PhiSpec::xlogx()};
    for (const PhiSpec& phi : phis) {
        CAPTURE(phi.spec_string());
        for (const double tol : {1e-6, 1e-9, 1e-12}) {
            CAPTURE(tol);
            const double slack = 8 * std::numeric_limits<double>::epsilon();
            const OracleResult a = expect_poisson(phi, 200.0, tol);
            const OracleResult b = expect_poisson(phi, 200.0, tol / 2);
            CHECK(std::abs(a.value - b.value) <= a.tail_bound + slack * std::abs(a.value));

            const OracleResult c = expect_negbinomial(phi, 150, 0.4, tol);
            const OracleResult d = expect_negbinomial(phi, 150, 0.4, tol / 2);
            CHECK(std::abs(c.value - d.value) <= c.tail_bound + slack * std::abs(c.value));

            const OracleResult e = expect_gamma(phi, 120.0, tol);
            const OracleResult f = expect_gamma(phi, 120.0, tol / 2);
            CHECK(std::abs(e.value - f.value) <= e.tail_bound + slack * std::abs(e.value));
        }
    }
}
