#include "asympt/spec_parse.hpp"

#include <cmath>
#include <optional>
#include <string>

#include <fmt/format.h>

#include "asympt/errors.hpp"

namespace asympt {
namespace {

// Custom pmf families are expanded far enough for the CLI's largest M.
constexpr std::size_t kPmfOrder = 64;

struct Field {
    std::string_view key;
    std::string_view value;
    std::size_t key_pos;
    std::size_t value_pos;
};

struct Parsed {
    std::string_view name;
    std::vector<Field> fields;
};

class SpecReader {
public:
    SpecReader(std::string_view kind, std::string_view text) : kind_(kind), text_(text) {}

    [[noreturn]] void fail(std::size_t pos, const std::string& message) const {
        throw parameter_error(fmt::format("{} spec '{}': {} at column {}\n  {}\n  {:>{}}", kind_, text_, message,
                                          pos + 1, text_, "^", pos + 1));
    }

    Parsed split() const {
        Parsed out;
        const std::size_t colon = text_.find(':');
        out.name = text_.substr(0, colon);
        if (out.name.empty()) {
            fail(0, "missing name");
        }
        if (colon == std::string_view::npos) {
            return out;
        }
        std::size_t pos = colon + 1;
        if (pos == text_.size()) {
            fail(pos, "expected key=value after ':'");
        }
        while (pos <= text_.size()) {
            std::size_t end = text_.find(',', pos);
            if (end == std::string_view::npos) {
                end = text_.size();
            }
            const std::string_view item = text_.substr(pos, end - pos);
            const std::size_t eq = item.find('=');
            if (eq == std::string_view::npos || eq == 0) {
                fail(pos, "expected key=value");
            }
            if (eq + 1 == item.size()) {
                fail(pos + eq + 1, "missing value");
            }
            for (const auto& f : out.fields) {
                if (f.key == item.substr(0, eq)) {
                    fail(pos, fmt::format("duplicate key '{}'", f.key));
                }
            }
            out.fields.push_back({item.substr(0, eq), item.substr(eq + 1), pos, pos + eq + 1});
            pos = end + 1;
        }
        return out;
    }

    void allow_keys(const Parsed& p, std::initializer_list<std::string_view> keys) const {
        for (const auto& f : p.fields) {
            if (std::find(keys.begin(), keys.end(), f.key) == keys.end()) {
                fail(f.key_pos, fmt::format("unknown key '{}' for {}", f.key, p.name));
            }
        }
    }

    const Field* find(const Parsed& p, std::string_view key) const {
        for (const auto& f : p.fields) {
            if (f.key == key) {
                return &f;
            }
        }
        return nullptr;
    }

    const Field& require(const Parsed& p, std::string_view key) const {
        const Field* f = find(p, key);
        if (f == nullptr) {
            fail(text_.size(), fmt::format("{} requires '{}='", p.name, key));
        }
        return *f;
    }

    Rational number(std::string_view value, std::size_t pos) const {
        try {
            return Rational::parse(value);
        } catch (const std::exception&) {
            fail(pos, fmt::format("'{}' is not a rational number", value));
        }
    }

    std::vector<Rational> numbers(const Field& f) const {
        std::vector<Rational> out;
        std::size_t start = 0;
        while (start <= f.value.size()) {
            std::size_t end = f.value.find(';', start);
            if (end == std::string_view::npos) {
                end = f.value.size();
            }
            out.push_back(number(f.value.substr(start, end - start), f.value_pos + start));
            start = end + 1;
        }
        return out;
    }

    // Re-annotates validation failures from the constructors with the field position.
    template <typename F>
    auto checked(std::size_t pos, F&& build) const {
        try {
            return build();
        } catch (const parameter_error& e) {
            fail(pos, e.what());
        } catch (const domain_error& e) {
            fail(pos, e.what());
        }
    }

private:
    std::string_view kind_;
    std::string_view text_;
};

} // namespace

FamilySpec parse_family(std::string_view text) {
    const SpecReader r("family", text);
    const Parsed p = r.split();
    if (p.name == "poisson" || p.name == "gamma") {
        r.allow_keys(p, {});
        return p.name == "poisson" ? FamilySpec::poisson() : FamilySpec::gamma();
    }
    if (p.name == "binomial" || p.name == "nb" || p.name == "negbinomial") {
        r.allow_keys(p, {"p"});
        const Field& f = r.require(p, "p");
        Rational prob = r.number(f.value, f.value_pos);
        return r.checked(f.value_pos, [&] {
            return p.name == "binomial" ? FamilySpec::binomial(prob) : FamilySpec::negbinomial(prob);
        });
    }
    if (p.name == "iid") {
        r.allow_keys(p, {"mgf", "mean", "values", "probs"});
        if (const Field* mgf = r.find(p, "mgf")) {
            if (r.find(p, "values") != nullptr || r.find(p, "probs") != nullptr) {
                r.fail(mgf->key_pos, "give either mgf/mean or values/probs");
            }
            const Field& mean = r.require(p, "mean");
            std::vector<Rational> coeffs = r.numbers(*mgf);
            const Rational m = r.number(mean.value, mean.value_pos);
            const std::size_t order = coeffs.size() - 1;
            return r.checked(mgf->value_pos,
                             [&] { return FamilySpec::custom_iid(RatSeries(order, std::move(coeffs)), m); });
        }
        if (r.find(p, "mean") != nullptr) {
            r.fail(r.require(p, "mean").key_pos, "mean= goes with mgf=");
        }
        const Field& values = r.require(p, "values");
        const Field& probs = r.require(p, "probs");
        const std::vector<Rational> v = r.numbers(values);
        const std::vector<Rational> w = r.numbers(probs);
        if (v.size() != w.size()) {
            r.fail(probs.value_pos, fmt::format("{} values but {} probabilities", v.size(), w.size()));
        }
        std::vector<std::pair<Rational, Rational>> pmf;
        for (std::size_t i = 0; i < v.size(); ++i) {
            pmf.emplace_back(v[i], w[i]);
        }
        return r.checked(values.value_pos, [&] { return FamilySpec::custom_iid_from_pmf(pmf, kPmfOrder); });
    }
    r.fail(0, fmt::format("unknown family '{}' (expected poisson, gamma, binomial, nb, iid)", p.name));
}

PhiSpec parse_phi(std::string_view text) {
    const SpecReader r("phi", text);
    const Parsed p = r.split();
    if (p.name == "power") {
        r.allow_keys(p, {"r", "a"});
        const Field& rf = r.require(p, "r");
        const Field* af = r.find(p, "a");
        Scalar exponent(r.number(rf.value, rf.value_pos));
        Scalar shift = af != nullptr ? Scalar(r.number(af->value, af->value_pos)) : Scalar(0);
        return r.checked(rf.value_pos, [&] { return PhiSpec::power(exponent, shift); });
    }
    if (p.name == "log") {
        r.allow_keys(p, {"beta"});
        const Field& bf = r.require(p, "beta");
        Scalar beta(r.number(bf.value, bf.value_pos));
        return r.checked(bf.value_pos, [&] { return PhiSpec::log(beta); });
    }
    if (p.name == "xlogx") {
        r.allow_keys(p, {});
        return PhiSpec::xlogx();
    }
    r.fail(0, fmt::format("unknown phi '{}' (expected power, log, xlogx)", p.name));
}

std::vector<double> parse_grid(std::string_view text) {
    const SpecReader r("grid", text);
    auto value = [&](std::string_view s, std::size_t pos) {
        const double v = r.number(s, pos).to_double();
        if (!(v > 0.0)) {
            r.fail(pos, "grid points must be positive");
        }
        return v;
    };
    std::vector<double> out;
    const std::size_t c1 = text.find(':');
    if (c1 == std::string_view::npos) {
        std::size_t start = 0;
        while (start <= text.size()) {
            std::size_t end = text.find(',', start);
            if (end == std::string_view::npos) {
                end = text.size();
            }
            out.push_back(value(text.substr(start, end - start), start));
            start = end + 1;
        }
        return out;
    }
    const std::size_t c2 = text.find(':', c1 + 1);
    if (c2 == std::string_view::npos) {
        r.fail(text.size(), "expected start:end:xF");
    }
    const double lo = value(text.substr(0, c1), 0);
    const double hi = value(text.substr(c1 + 1, c2 - c1 - 1), c1 + 1);
    const std::string_view step = text.substr(c2 + 1);
    if (step.size() < 2 || step[0] != 'x') {
        r.fail(c2 + 1, "step must be xF, e.g. x2");
    }
    const double factor = value(step.substr(1), c2 + 2);
    if (!(factor > 1.0)) {
        r.fail(c2 + 2, "factor must exceed 1");
    }
    if (hi < lo) {
        r.fail(c1 + 1, "end is below start");
    }
    for (double v = lo; v <= hi * (1.0 + 1e-12); v *= factor) {
        out.push_back(v);
    }
    return out;
}

} // namespace asympt
