#include "asympt/json_io.hpp"

#include <string>

#include "asympt/errors.hpp"

namespace asympt::json_io {

namespace {

const json& field(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) {
        throw parameter_error(std::string("json: missing field '") + key + "'");
    }
    return j.at(key);
}

Rational rational_from_json(const json& j) {
    if (!j.is_string()) {
        throw parameter_error("json: expected an exact rational string, got " + j.dump());
    }
    return Rational::parse(j.get<std::string>());
}

} // namespace

json to_json(const Scalar& s) {
    if (s.is_exact()) {
        return s.exact().str();
    }
    return s.value();
}

Scalar scalar_from_json(const json& j) {
    if (j.is_string()) {
        return Rational::parse(j.get<std::string>());
    }
    if (j.is_number()) {
        return Scalar::real(j.get<double>());
    }
    throw parameter_error("json: expected a number or rational string, got " + j.dump());
}

json to_json(const RatPoly& p) {
    json out = json::array();
    for (const auto& c : p.coefficients()) {
        out.push_back(json::array({c.num().get_str(), c.den().get_str()}));
    }
    return out;
}

RatPoly poly_from_json(const json& j) {
    if (!j.is_array()) {
        throw parameter_error("json: polynomial must be an array of [num, den] pairs");
    }
    std::vector<Rational> coeffs;
    for (const auto& pair : j) {
        if (!pair.is_array() || pair.size() != 2 || !pair[0].is_string() || !pair[1].is_string()) {
            throw parameter_error("json: malformed polynomial coefficient " + pair.dump());
        }
        coeffs.push_back(Rational::parse(pair[0].get<std::string>() + "/" + pair[1].get<std::string>()));
    }
    return RatPoly(std::move(coeffs));
}

json to_json(const FamilySpec& family) {
    json out;
    out["name"] = family.name();
    if (const auto p = family.p()) {
        out["p"] = p->str();
    }
    if (const auto* c = std::get_if<CustomIID>(&family.variant())) {
        json mgf = json::array();
        for (const auto& a : c->base_mgf.coefficients()) {
            mgf.push_back(a.str());
        }
        out["mgf"] = mgf;
        out["mean"] = c->base_mean.str();
    }
    return out;
}

FamilySpec family_from_json(const json& j) {
    const std::string name = field(j, "name").get<std::string>();
    if (name == "poisson") {
        return FamilySpec::poisson();
    }
    if (name == "gamma") {
        return FamilySpec::gamma();
    }
    if (name == "binomial") {
        return FamilySpec::binomial(rational_from_json(field(j, "p")));
    }
    if (name == "nb") {
        return FamilySpec::negbinomial(rational_from_json(field(j, "p")));
    }
    if (name == "iid") {
        std::vector<Rational> mgf;
        for (const auto& c : field(j, "mgf")) {
            mgf.push_back(rational_from_json(c));
        }
        if (mgf.empty()) {
            throw parameter_error("json: iid mgf must not be empty");
        }
        const std::size_t order = mgf.size() - 1;
        return FamilySpec::custom_iid(RatSeries(order, std::move(mgf)), rational_from_json(field(j, "mean")));
    }
    throw parameter_error("json: unknown family '" + name + "'");
}

json to_json(const PhiSpec& phi) {
    json out;
    out["name"] = phi.name();
    if (const auto* p = std::get_if<PowerShift>(&phi.variant())) {
        out["r"] = to_json(p->r);
        out["a"] = to_json(p->a);
    } else if (const auto* l = std::get_if<LogShift>(&phi.variant())) {
        out["beta"] = to_json(l->beta);
    }
    return out;
}

PhiSpec phi_from_json(const json& j) {
    const std::string name = field(j, "name").get<std::string>();
    if (name == "power") {
        return PhiSpec::power(scalar_from_json(field(j, "r")), scalar_from_json(field(j, "a")));
    }
    if (name == "log") {
        return PhiSpec::log(scalar_from_json(field(j, "beta")));
    }
    if (name == "xlogx") {
        return PhiSpec::xlogx();
    }
    throw parameter_error("json: unknown phi '" + name + "'");
}

json to_json(const DerivTerm& d) {
    json out;
    out["coeff"] = to_json(d.coeff);
    out["shift"] = to_json(d.shift);
    out["exponent"] = to_json(d.exponent);
    out["log"] = d.with_log;
    if (d.with_log) {
        out["log_constant"] = to_json(d.log_constant);
    }
    return out;
}

DerivTerm deriv_from_json(const json& j) {
    DerivTerm d;
    d.coeff = scalar_from_json(field(j, "coeff"));
    d.shift = scalar_from_json(field(j, "shift"));
    d.exponent = scalar_from_json(field(j, "exponent"));
    d.with_log = field(j, "log").get<bool>();
    d.log_constant = d.with_log ? scalar_from_json(field(j, "log_constant")) : Scalar(0);
    return d;
}

} // namespace asympt::json_io
