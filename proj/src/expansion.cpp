#include "asympt/expansion.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <fmt/format.h>

#include "asympt/compensated.hpp"
#include "asympt/errors.hpp"
#include "asympt/json_io.hpp"

namespace asympt {

Expansion build_expansion(const FamilySpec& family, const PhiSpec& phi, unsigned M) {
    if (M < 1) {
        throw contract_violation("build_expansion: M must be at least 1");
    }
    Expansion e{family, phi, M, phi_derivative_symbolic(phi, 0), {}};
    const unsigned nmax = 2 * M - 2;
    if (nmax < 2) {
        return e;
    }
    auto mu = central_moments(family, nmax);
    for (unsigned n = 2; n <= nmax; ++n) {
        e.terms.push_back({n, std::move(mu[n]), phi_derivative_symbolic(phi, n)});
    }
    return e;
}

double evaluate(const Expansion& e, double x) {
    if (!(x > 0.0)) {
        throw domain_error(fmt::format("evaluate: x must be positive, got {}", x));
    }
    CompensatedSum<double> sum;
    sum += phi_value(e.phi, x);
    for (const auto& t : e.terms) {
        sum += t.mu.eval(x) * phi_derivative(e.phi, t.n, x) / factorial(t.n).to_double();
    }
    return sum.value();
}

// ---------------------------------------------------------------- collection

bool CollectedSeries::exact() const {
    return lead_exponent.is_exact() &&
           std::all_of(terms.begin(), terms.end(), [](const CollectedTerm& t) { return t.coeff.is_exact(); });
}

double CollectedSeries::eval(double x) const {
    CompensatedSum<double> sum;
    for (const auto& t : terms) {
        double v = t.coeff.value() * std::pow(x, t.exponent.value());
        if (t.with_log) {
            v *= std::log(x);
        }
        sum += v;
    }
    return sum.value();
}

Scalar CollectedSeries::coefficient(int offset, bool with_log) const {
    for (const auto& t : terms) {
        if (t.offset == offset && t.with_log == with_log) {
            return t.coeff;
        }
    }
    return Scalar(0);
}

CollectedSeries collect_powers(const Expansion& e) {
    Scalar lead;
    if (const auto* p = std::get_if<PowerShift>(&e.phi.variant())) {
        if (p->a.value() != 0.0) {
            throw unsupported_error("collect_powers: phi has a nonzero shift; only the raw form is available");
        }
        lead = -p->r;
    } else if (std::holds_alternative<XLogX>(e.phi.variant())) {
        lead = Scalar(1);
    } else {
        throw unsupported_error("collect_powers: log(x + beta) has a nonzero shift; only the raw form is available");
    }

    const int cutoff = -static_cast<int>(e.M);
    // (offset, with_log) -> coefficient; std::greater gives descending offsets, log first
    std::map<std::pair<int, bool>, Scalar, std::greater<>> acc;
    acc.emplace(std::pair{0, e.leading.with_log}, e.leading.coeff);
    for (const auto& t : e.terms) {
        const Scalar scale = t.deriv.coeff / Scalar(factorial(t.n));
        for (std::size_t j = 0; j < t.mu.coefficients().size(); ++j) {
            const Rational& m = t.mu.coefficients()[j];
            if (m.is_zero()) {
                continue;
            }
            // x^j * x^(lead - n): offset j - n from the leading power
            const int offset = static_cast<int>(j) - static_cast<int>(t.n);
            if (offset <= cutoff) {
                continue;
            }
            const auto key = std::pair{offset, t.deriv.with_log};
            const Scalar contribution = Scalar(m) * scale;
            auto it = acc.find(key);
            if (it == acc.end()) {
                acc.emplace(key, contribution);
            } else {
                it->second = it->second + contribution;
            }
        }
    }

    CollectedSeries out{e.family, e.phi, e.M, lead, Rational(1), {}};
    if (lead.is_exact()) {
        out.step = Rational(mpz_class(1), lead.exact().den());
    }
    for (const auto& [key, coeff] : acc) {
        if (coeff.is_exact() ? coeff.exact().is_zero() : coeff.value() == 0.0) {
            continue;
        }
        out.terms.push_back({key.first, lead + Scalar(key.first), key.second, coeff});
    }
    return out;
}

// ---------------------------------------------------------------- rendering

Format parse_format(std::string_view name) {
    if (name == "text") {
        return Format::text;
    }
    if (name == "latex") {
        return Format::latex;
    }
    if (name == "json") {
        return Format::json;
    }
    throw parameter_error("unknown output format '" + std::string(name) + "'");
}

namespace {

bool is_negative(const Scalar& s) { return s.is_exact() ? s.exact().sign() < 0 : s.value() < 0.0; }
bool is_one(const Scalar& s) { return s.is_exact() ? s.exact() == Rational(1) : s.value() == 1.0; }
bool is_zero(const Scalar& s) { return s.is_exact() ? s.exact().is_zero() : s.value() == 0.0; }

std::string number(const Scalar& s, Format f) {
    if (f == Format::latex && s.is_exact() && !s.exact().is_integer()) {
        const Rational& q = s.exact();
        const std::string sign = q.sign() < 0 ? "-" : "";
        return fmt::format("{}\\frac{{{}}}{{{}}}", sign, mpz_class(abs(q.num())).get_str(), q.den().get_str());
    }
    return s.str();
}

std::string power(const std::string& base, const Scalar& exponent, Format f) {
    if (is_zero(exponent)) {
        return "";
    }
    if (is_one(exponent)) {
        return base;
    }
    if (f == Format::latex) {
        return fmt::format("{}^{{{}}}", base, exponent.str());
    }
    if (exponent.is_exact() && exponent.exact().is_integer()) {
        return fmt::format("{}^{}", base, exponent.str());
    }
    return fmt::format("{}^({})", base, exponent.str());
}

std::string shifted(const Scalar& shift) { return is_zero(shift) ? "x" : fmt::format("x + {}", shift.str()); }

/// magnitude * x^xpow * phi-derivative factors, without sign
std::string product(const Scalar& magnitude, int xpow, const DerivTerm& d, Format f) {
    const std::string sep = f == Format::latex ? " " : " * ";
    const std::string inner = shifted(d.shift);
    const std::string base = is_zero(d.shift) ? inner : "(" + inner + ")";
    std::vector<std::string> factors;
    if (xpow != 0) {
        factors.push_back(power("x", Scalar(xpow), f));
    }
    if (auto p = power(base, d.exponent, f); !p.empty()) {
        factors.push_back(std::move(p));
    }
    if (d.with_log) {
        const std::string log = f == Format::latex ? fmt::format("\\log({})", inner) : fmt::format("log({})", inner);
        if (is_zero(d.log_constant)) {
            factors.push_back(log);
        } else {
            factors.push_back(fmt::format("({} + {})", log, number(d.log_constant, f)));
        }
    }
    std::string body;
    for (const auto& factor : factors) {
        body += (body.empty() ? "" : sep) + factor;
    }
    if (body.empty()) {
        return number(magnitude, f);
    }
    return is_one(magnitude) ? body : number(magnitude, f) + sep + body;
}

struct SignedPiece {
    bool negative;
    std::string body;
};

std::string join(const std::vector<SignedPiece>& pieces, const std::string& line_break) {
    std::string out;
    for (const auto& p : pieces) {
        if (out.empty()) {
            out += (p.negative ? "-" : "") + p.body;
        } else {
            out += line_break + (p.negative ? "- " : "+ ") + p.body;
        }
    }
    return out.empty() ? "0" : out;
}

std::vector<SignedPiece> raw_pieces(const Expansion& e, Format f) {
    std::vector<SignedPiece> pieces;
    pieces.push_back({is_negative(e.leading.coeff), product(is_negative(e.leading.coeff) ? -e.leading.coeff
                                                                                         : e.leading.coeff,
                                                            0, e.leading, f)});
    // descending n, then descending k; c_kn multiplies x^(n-k+1)
    for (auto it = e.terms.rbegin(); it != e.terms.rend(); ++it) {
        const auto& t = *it;
        const Scalar scale = t.deriv.coeff / Scalar(factorial(t.n));
        for (unsigned k = t.n + 1; k-- > 0;) {
            const Rational c = t.mu.coeff(t.n - k + 1);
            if (c.is_zero()) {
                continue;
            }
            const Scalar coeff = Scalar(c) * scale;
            const bool negative = is_negative(coeff);
            pieces.push_back({negative, product(negative ? -coeff : coeff, static_cast<int>(t.n - k + 1), t.deriv, f)});
        }
    }
    return pieces;
}

json_io::json expansion_json(const Expansion& e) {
    json_io::json out;
    out["family"] = json_io::to_json(e.family);
    out["phi"] = json_io::to_json(e.phi);
    out["M"] = e.M;
    auto terms = json_io::json::array();
    auto term_json = [](unsigned n, const RatPoly& mu, const DerivTerm& d) {
        json_io::json t;
        t["n"] = n;
        t["mu"] = json_io::to_json(mu);
        t["deriv"] = json_io::to_json(d);
        return t;
    };
    terms.push_back(term_json(0, RatPoly({Rational(1)}), e.leading));
    for (auto it = e.terms.rbegin(); it != e.terms.rend(); ++it) {
        terms.push_back(term_json(it->n, it->mu, it->deriv));
    }
    out["terms"] = terms;
    return out;
}

std::string collected_body(const CollectedSeries& c, Format f) {
    const std::string sep = f == Format::latex ? " " : " * ";
    const bool relative = !std::holds_alternative<XLogX>(c.phi.variant());
    std::vector<SignedPiece> pieces;
    for (const auto& t : c.terms) {
        const bool negative = is_negative(t.coeff);
        const Scalar mag = negative ? -t.coeff : t.coeff;
        std::vector<std::string> factors;
        if (auto p = power("x", relative ? Scalar(t.offset) : t.exponent, f); !p.empty()) {
            factors.push_back(std::move(p));
        }
        if (t.with_log) {
            factors.emplace_back(f == Format::latex ? "\\log x" : "log(x)");
        }
        std::string body;
        for (const auto& factor : factors) {
            body += (body.empty() ? "" : sep) + factor;
        }
        if (body.empty()) {
            body = number(mag, f);
        } else if (!is_one(mag)) {
            body = number(mag, f) + sep + body;
        }
        pieces.push_back({negative, body});
    }
    const std::string series = join(pieces, " ");
    if (!relative) {
        return series;
    }
    const std::string prefix = power("x", c.lead_exponent, f);
    if (prefix.empty()) {
        return series;
    }
    if (f == Format::latex) {
        return prefix + " \\left(" + series + "\\right)";
    }
    return prefix + " * (" + series + ")";
}

} // namespace

std::string render(const Expansion& e, Format format) {
    switch (format) {
    case Format::json:
        return expansion_json(e).dump();
    case Format::latex:
        return join(raw_pieces(e, format), " ") + fmt::format(" + O\\left(G(x)\\, x^{{-{}}}\\right)", e.M);
    case Format::text:
        break;
    }
    return join(raw_pieces(e, format), "\n  ") + fmt::format("\n  + O(G(x) * x^-{})", e.M);
}

std::string render(const CollectedSeries& c, Format format) {
    if (format == Format::json) {
        json_io::json out;
        out["family"] = json_io::to_json(c.family);
        out["phi"] = json_io::to_json(c.phi);
        out["M"] = c.M;
        out["lead_exponent"] = json_io::to_json(c.lead_exponent);
        out["step"] = c.step.str();
        auto terms = json_io::json::array();
        for (const auto& t : c.terms) {
            json_io::json j;
            j["exponent"] = json_io::to_json(t.exponent);
            j["log"] = t.with_log;
            j["coeff"] = json_io::to_json(t.coeff);
            terms.push_back(j);
        }
        out["terms"] = terms;
        return out.dump();
    }
    return collected_body(c, format);
}

Expansion parse_expansion_json(std::string_view text) {
    json_io::json j;
    try {
        j = json_io::json::parse(text);
    } catch (const nlohmann::json::exception& ex) {
        throw parameter_error(std::string("json: ") + ex.what());
    }
    if (!j.is_object() || !j.contains("family") || !j.contains("phi") || !j.contains("M") || !j.contains("terms")) {
        throw parameter_error("json: expansion needs family, phi, M and terms");
    }
    const auto M = j.at("M").get<int>();
    if (M < 1) {
        throw parameter_error("json: M must be at least 1");
    }
    Expansion e = build_expansion(json_io::family_from_json(j.at("family")), json_io::phi_from_json(j.at("phi")),
                                  static_cast<unsigned>(M));
    const auto& terms = j.at("terms");
    if (!terms.is_array() || terms.size() != e.terms.size() + 1) {
        throw parameter_error("json: term count does not match M");
    }
    for (const auto& t : terms) {
        const auto n = t.at("n").get<unsigned>();
        const RatPoly mu = json_io::poly_from_json(t.at("mu"));
        const DerivTerm d = json_io::deriv_from_json(t.at("deriv"));
        const bool ok = n == 0 ? (mu == RatPoly({Rational(1)}) && d == e.leading)
                               : std::any_of(e.terms.begin(), e.terms.end(), [&](const ExpansionTerm& et) {
                                     return et.n == n && et.mu == mu && et.deriv == d;
                                 });
        if (!ok) {
            throw parameter_error(fmt::format("json: term n = {} does not match the family/phi/M", n));
        }
    }
    return e;
}

} // namespace asympt
