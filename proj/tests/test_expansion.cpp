#include <doctest.h>

#include <cmath>

#include "asympt/errors.hpp"
#include "asympt/expansion.hpp"

using namespace asympt;

namespace {

Rational R(long n, long d = 1) { return Rational(n, d); }

std::vector<FamilySpec> families() {
    return {FamilySpec::poisson(), FamilySpec::gamma(), FamilySpec::binomial(R(1, 3)),
            FamilySpec::negbinomial(R(1, 2))};
}

std::vector<PhiSpec> phis() {
    return {PhiSpec::power(R(-1, 2), 0), PhiSpec::power(1, 1), PhiSpec::power(R(3, 2), 0), PhiSpec::log(1),
            PhiSpec::log(R(5, 2)), PhiSpec::xlogx()};
}

double rel_diff(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// phi(x) + sum_n sum_k c_kn x^(n-k+1) phi^(n)(x) / n!, straight from the coefficient table.
double double_sum(const FamilySpec& family, const PhiSpec& phi, unsigned M, double x) {
    const CoeffTable c = ckn_table(family, M);
    double total = phi_value(phi, x);
    for (unsigned n = 2; n + 2 <= 2 * M; ++n) {
        double mu = 0.0;
        for (unsigned k = 0; k <= n; ++k) {
            mu += c.at(k, n).to_double() * std::pow(x, static_cast<double>(n) - k + 1);
        }
        total += mu * phi_derivative(phi, n, x) / std::tgamma(n + 1.0);
    }
    return total;
}

} // namespace

TEST_CASE("build_expansion examples") {
    SUBCASE("Poisson sqrt, M = 2") {
        const Expansion e = build_expansion(FamilySpec::poisson(), PhiSpec::power(R(-1, 2), 0), 2);
        REQUIRE(e.terms.size() == 1);
        CHECK(e.terms[0].n == 2);
        for (const double x : {4.0, 100.0, 1e4}) {
            CHECK(rel_diff(evaluate(e, x), std::sqrt(x) * (1.0 - 1.0 / (8.0 * x))) < 1e-15);
        }
        CHECK(evaluate(e, 100.0) == doctest::Approx(9.9875).epsilon(1e-15));
    }
    SUBCASE("M = 1 is phi alone") {
        for (const FamilySpec& f : families()) {
            for (const PhiSpec& phi : phis()) {
                const Expansion e = build_expansion(f, phi, 1);
                CHECK(e.terms.empty());
                CHECK(evaluate(e, 37.5) == phi_value(phi, 37.5));
            }
        }
    }
    SUBCASE("binomial inverse moments: n = 2 term") {
        const Rational p = R(1, 3);
        const Rational q = R(2, 3);
        const Rational r = R(5, 2);
        const Rational a = R(1);
        const Expansion e = build_expansion(FamilySpec::binomial(p), PhiSpec::power(r, a), 3);
        REQUIRE(e.terms.size() == 3);
        const ExpansionTerm& t = e.terms[0];
        CHECK(t.n == 2);
        CHECK(t.mu == RatPoly({0, q}));
        CHECK(t.deriv.coeff.exact() == r * (r + R(1)));
        CHECK(t.deriv.exponent.exact() == -r - R(2));
        const double x = 40.0;
        const double expected = (q * r * (r + R(1)) / R(2)).to_double() * x * std::pow(x + 1.0, -r.to_double() - 2);
        CHECK(rel_diff(t.mu.eval(x) * t.deriv.eval(x) / 2.0, expected) < 1e-14);
    }
    CHECK_THROWS_AS(build_expansion(FamilySpec::poisson(), PhiSpec::log(1), 0), contract_violation);
}

TEST_CASE("gamma x log x tracks x psi(x + 1)") {
    const Expansion e = build_expansion(FamilySpec::gamma(), PhiSpec::xlogx(), 3);
    // 50 psi(51), from tests/oracles/derive_values.py
    const double reference = 196.09948367139460985;
    CHECK(std::abs(evaluate(e, 50.0) - reference) <= std::log(50.0) / (50.0 * 50.0));
}

TEST_CASE("collect_powers examples") {
    SUBCASE("Poisson sqrt") {
        const CollectedSeries c = collect_powers(build_expansion(FamilySpec::poisson(), PhiSpec::power(R(-1, 2), 0), 3));
        REQUIRE(c.exact());
        CHECK(c.lead_exponent.exact() == R(1, 2));
        REQUIRE(c.terms.size() == 3);
        CHECK(c.coefficient(0).exact() == R(1));
        CHECK(c.coefficient(-1).exact() == R(-1, 8));
        CHECK(c.coefficient(-2).exact() == R(-7, 128));
        CHECK(c.coefficient(-3).exact().is_zero());
    }
    SUBCASE("binomial sqrt, p = 1/3") {
        const Rational p = R(1, 3);
        const Rational q = R(2, 3);
        const CollectedSeries c = collect_powers(build_expansion(FamilySpec::binomial(p), PhiSpec::power(R(-1, 2), 0), 3));
        CHECK(c.coefficient(0).exact() == R(1));
        CHECK(c.coefficient(-1).exact() == -q / R(8));
        CHECK(c.coefficient(-2).exact() == (q - p) * q / R(16) - R(15) * q * q / R(128));
    }
    SUBCASE("gamma x log x") {
        const CollectedSeries c = collect_powers(build_expansion(FamilySpec::gamma(), PhiSpec::xlogx(), 3));
        CHECK(c.coefficient(0, true).exact() == R(1));
        CHECK(c.coefficient(0).exact().is_zero());
        CHECK(c.coefficient(-1).exact() == R(1, 2));
        CHECK(c.coefficient(-2).exact() == R(-1, 12));
        CHECK(c.terms.size() == 3);
    }
    SUBCASE("shifted or logarithmic phi has no collected form") {
        CHECK_THROWS_AS(collect_powers(build_expansion(FamilySpec::poisson(), PhiSpec::power(1, 1), 3)),
                        unsupported_error);
        CHECK_THROWS_AS(collect_powers(build_expansion(FamilySpec::poisson(), PhiSpec::log(1), 3)),
                        unsupported_error);
    }
    SUBCASE("real exponent falls back to floating coefficients") {
        const double r = 0.7;
        const CollectedSeries c =
            collect_powers(build_expansion(FamilySpec::poisson(), PhiSpec::power(Scalar::real(r), 0), 3));
        CHECK_FALSE(c.exact());
        // Poisson: n = 2 contributes r (r + 1) / 2 at offset -1
        CHECK(c.coefficient(-1).value() == doctest::Approx(r * (r + 1) / 2).epsilon(1e-12));
        const CollectedSeries exact =
            collect_powers(build_expansion(FamilySpec::poisson(), PhiSpec::power(R(7, 10), 0), 3));
        for (int offset = 0; offset > -3; --offset) {
            CHECK(c.coefficient(offset).value() ==
                  doctest::Approx(exact.coefficient(offset).value()).epsilon(1e-12));
        }
    }
}

TEST_CASE("raw n = 2 terms for the log examples") {
    const Rational beta = R(3, 2);
    const double x = 30.0;
    SUBCASE("negative binomial") {
        const Rational p = R(1, 3);
        const Expansion e = build_expansion(FamilySpec::negbinomial(p), PhiSpec::log(beta), 3);
        const ExpansionTerm& t = e.terms.front();
        const double raw = t.mu.eval(x) * t.deriv.eval(x) / 2.0;
        CHECK(rel_diff(raw, -(R(1) / (R(2) * p)).to_double() * x * std::pow(x + 1.5, -2.0)) < 1e-14);
    }
    SUBCASE("binomial") {
        const Rational p = R(1, 4);
        const Expansion e = build_expansion(FamilySpec::binomial(p), PhiSpec::log(beta), 3);
        const ExpansionTerm& t = e.terms.front();
        const double raw = t.mu.eval(x) * t.deriv.eval(x) / 2.0;
        CHECK(rel_diff(raw, -(R(3, 4) / R(2)).to_double() * x * std::pow(x + 1.5, -2.0)) < 1e-14);
    }
    SUBCASE("negative binomial inverse moments: n = 2 coefficient r (r + 1) / (2p)") {
        const Expansion e = build_expansion(FamilySpec::negbinomial(R(1, 2)), PhiSpec::power(1, 1), 3);
        const ExpansionTerm& t = e.terms.front();
        CHECK(t.mu.coeff(1) * t.deriv.coeff.exact() / factorial(2) == R(2));
    }
}

TEST_CASE("render examples") {
    const Expansion sqrt2 = build_expansion(FamilySpec::poisson(), PhiSpec::power(R(-1, 2), 0), 2);
    CHECK(render(collect_powers(sqrt2), Format::text) == "x^(1/2) * (1 - 1/8 * x^-1)");

    const Expansion sqrt3 = build_expansion(FamilySpec::poisson(), PhiSpec::power(R(-1, 2), 0), 3);
    CHECK(render(collect_powers(sqrt3), Format::text) == "x^(1/2) * (1 - 1/8 * x^-1 - 7/128 * x^-2)");
    CHECK(render(collect_powers(sqrt3), Format::latex) ==
          "x^{1/2} \\left(1 - \\frac{1}{8} x^{-1} - \\frac{7}{128} x^{-2}\\right)");

    const Expansion gamma = build_expansion(FamilySpec::gamma(), PhiSpec::xlogx(), 3);
    CHECK(render(collect_powers(gamma), Format::text) == "x * log(x) + 1/2 - 1/12 * x^-1");

    const Expansion nb = build_expansion(FamilySpec::negbinomial(R(1, 2)), PhiSpec::power(1, 1), 3);
    const std::string latex = render(nb, Format::latex);
    CHECK(latex.find("+ 2 x (x + 1)^{-3}") != std::string::npos);
    CHECK(latex.find("O\\left(G(x)\\, x^{-3}\\right)") != std::string::npos);

    const std::string text = render(sqrt2, Format::text);
    CHECK(text == "x^(1/2)\n  - 1/8 * x * x^(-3/2)\n  + O(G(x) * x^-2)");

    const Expansion m1 = build_expansion(FamilySpec::poisson(), PhiSpec::log(1), 1);
    CHECK(render(m1, Format::json) ==
          R"({"family":{"name":"poisson"},"phi":{"name":"log","beta":"1"},"M":1,"terms":[)"
          R"({"n":0,"mu":[["1","1"]],"deriv":{"coeff":"1","shift":"1","exponent":"0","log":true,"log_constant":"0"}}]})");
    CHECK(parse_format("latex") == Format::latex);
    CHECK_THROWS_AS(parse_format("yaml"), parameter_error);
}

TEST_CASE("property: JSON renderings round-trip byte for byte") {
    for (const FamilySpec& f : families()) {
        for (const PhiSpec& phi : phis()) {
            for (unsigned M = 1; M <= 4; ++M) {
                const std::string json = render(build_expansion(f, phi, M), Format::json);
                CAPTURE(json);
                CHECK(render(parse_expansion_json(json), Format::json) == json);
            }
        }
    }
    const std::string good = render(build_expansion(FamilySpec::poisson(), PhiSpec::log(1), 2), Format::json);
    std::string tampered = good;
    tampered.replace(tampered.find("\"-1\""), 4, "\"-2\"");
    CHECK_THROWS_AS(parse_expansion_json(tampered), parameter_error);
    CHECK_THROWS_AS(parse_expansion_json("{not json"), parameter_error);
}

TEST_CASE("property: evaluate equals the c_kn double sum to 1e-12") {
    for (const FamilySpec& f : families()) {
        for (const PhiSpec& phi : phis()) {
            for (unsigned M = 1; M <= 5; ++M) {
                const Expansion e = build_expansion(f, phi, M);
                for (const double x : {10.0, 100.0, 1000.0}) {
                    CAPTURE(f.spec_string());
                    CAPTURE(phi.spec_string());
                    CAPTURE(M);
                    CAPTURE(x);
                    CHECK(rel_diff(evaluate(e, x), double_sum(f, phi, M, x)) < 1e-12);
                }
            }
        }
    }
}

TEST_CASE("property: collected and raw forms differ by the dropped tail only") {
    const std::vector<PhiSpec> collectable{PhiSpec::power(R(-1, 2), 0), PhiSpec::power(1, 0),
                                           PhiSpec::power(R(3, 2), 0), PhiSpec::xlogx()};
    for (const FamilySpec& f : families()) {
        for (const PhiSpec& phi : collectable) {
            for (unsigned M = 2; M <= 4; ++M) {
                const Expansion e = build_expansion(f, phi, M);
                const CollectedSeries c = collect_powers(e);
                CAPTURE(f.spec_string());
                CAPTURE(phi.spec_string());
                CAPTURE(M);
                double previous = 0.0;
                for (const double x : {100.0, 1000.0, 10000.0}) {
                    const double tail = growth_envelope(phi, x) * std::pow(x, -static_cast<double>(M));
                    const double raw = evaluate(e, x);
                    const double gap = std::abs(c.eval(x) - raw);
                    if (gap < 1e-12 * std::abs(raw)) {
                        break; // rounding level from here on
                    }
                    const double scaled = gap / tail;
                    CHECK(scaled < 1e4);
                    if (previous > 0.0) {
                        CHECK(scaled <= previous * 1.5);
                    }
                    previous = scaled;
                }
            }
        }
    }
}
