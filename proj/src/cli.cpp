#include "asympt/cli.hpp"

#include <algorithm>
#include <fstream>
#include <optional>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "asympt/errors.hpp"
#include "asympt/expansion.hpp"
#include "asympt/families.hpp"
#include "asympt/json_io.hpp"
#include "asympt/oracle.hpp"
#include "asympt/spec_parse.hpp"
#include "asympt/verify.hpp"

namespace asympt::cli {
namespace {

using json_io::json;

/// Everything the subcommands need, validated by CLI11 before dispatch.
struct RunConfig {
    std::string family;
    std::string phi;
    unsigned M = 3;
    unsigned nmax = 6;
    std::string grid;
    std::string ngrid;
    std::optional<double> x;
    std::optional<long> n;
    double tol = 1e-12;
    std::string format = "text";
    std::string output;
    bool poisson_recursion = false;
    bool collect = false;
};

class usage_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

int cmd_coeffs(const RunConfig& cfg, std::ostream& out) {
    const FamilySpec family = parse_family(cfg.family);
    if (cfg.poisson_recursion && !std::holds_alternative<Poisson>(family.variant())) {
        throw unsupported_error("--poisson-recursion only applies to the poisson family");
    }
    const CoeffTable table = cfg.poisson_recursion ? bkn_poisson(cfg.M) : ckn_table(family, cfg.M);
    const char* letter = cfg.poisson_recursion ? "b" : "c";
    json entries = json::array();
    for (unsigned n = 2; n <= table.max_n(); ++n) {
        for (unsigned k = 0; k <= n; ++k) {
            const Rational& v = table.at(k, n);
            if (v.is_zero()) {
                continue;
            }
            if (cfg.format == "json") {
                entries.push_back({{"k", k}, {"n", n}, {"value", v.str()}});
            } else {
                out << fmt::format("{}[{},{}] = {}\n", letter, k, n, v.str());
            }
        }
    }
    if (cfg.format == "json") {
        const json doc{{"family", json_io::to_json(family)}, {"M", cfg.M}, {"table", letter}, {"entries", entries}};
        out << doc.dump() << "\n";
    }
    return exit_ok;
}

int cmd_moments(const RunConfig& cfg, std::ostream& out) {
    const FamilySpec family = parse_family(cfg.family);
    const std::vector<RatPoly> mu = central_moments(family, cfg.nmax);
    if (cfg.format == "json") {
        json moments = json::array();
        for (const auto& p : mu) {
            moments.push_back(json_io::to_json(p));
        }
        out << json{{"family", json_io::to_json(family)}, {"moments", moments}}.dump() << "\n";
        return exit_ok;
    }
    for (std::size_t n = 0; n < mu.size(); ++n) {
        out << fmt::format("mu[{}] = {}\n", n, mu[n].str());
    }
    return exit_ok;
}

int cmd_expand(const RunConfig& cfg, std::ostream& out) {
    const FamilySpec family = parse_family(cfg.family);
    const PhiSpec phi = parse_phi(cfg.phi);
    const Format format = parse_format(cfg.format);
    if (cfg.x && format == Format::json) {
        throw usage_error("--x cannot be combined with --format json");
    }
    const Expansion e = build_expansion(family, phi, cfg.M);
    std::optional<double> value;
    if (cfg.collect) {
        const CollectedSeries c = collect_powers(e);
        out << render(c, format) << "\n";
        if (cfg.x) {
            value = c.eval(*cfg.x);
        }
    } else {
        out << render(e, format) << "\n";
        if (cfg.x) {
            value = evaluate(e, *cfg.x);
        }
    }
    if (value) {
        out << fmt::format("S_{}({}) = {}\n", cfg.M, *cfg.x, *value);
    }
    return exit_ok;
}

std::vector<GridPoint> grid_points(const FamilySpec& family, const RunConfig& cfg) {
    if (!cfg.grid.empty() && !cfg.ngrid.empty()) {
        throw usage_error("give either --grid or --ngrid");
    }
    if (cfg.grid.empty() && cfg.ngrid.empty()) {
        throw usage_error("--grid or --ngrid is required");
    }
    if (!cfg.grid.empty()) {
        const std::vector<double> xs = parse_grid(cfg.grid);
        return grid_from_means(family, xs);
    }
    std::vector<long> ns;
    for (const double v : parse_grid(cfg.ngrid)) {
        if (v != std::floor(v)) {
            throw usage_error(fmt::format("--ngrid: {} is not an integer", v));
        }
        ns.push_back(static_cast<long>(v));
    }
    if (!family.is_discrete() || std::holds_alternative<Poisson>(family.variant())) {
        std::vector<double> xs(ns.begin(), ns.end());
        return grid_from_means(family, xs);
    }
    return grid_from_counts(family, ns);
}

int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const FamilySpec family = parse_family(cfg.family);
    const PhiSpec phi = parse_phi(cfg.phi);
    const std::vector<GridPoint> grid = grid_points(family, cfg);
    if (grid.size() < 3) {
        throw insufficient_data_error(fmt::format("a decay slope needs at least 3 grid points, got {}", grid.size()));
    }
    const std::vector<ErrorRow> rows = error_table(family, phi, cfg.M, grid, cfg.tol, OracleLimits::from_env());
    write_csv(out, rows);
    double slope = 0.0;
    try {
        slope = decay_slope(rows);
    } catch (const insufficient_data_error& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    }
    const bool pass = slope <= -static_cast<double>(cfg.M) + 0.3;
    out << fmt::format("slope={:.6f} pass={}\n", slope, pass);
    return pass ? exit_ok : exit_fail;
}

int cmd_oracle(const RunConfig& cfg, std::ostream& out) {
    const FamilySpec family = parse_family(cfg.family);
    const PhiSpec phi = parse_phi(cfg.phi);
    if (cfg.x.has_value() == cfg.n.has_value()) {
        throw usage_error("give exactly one of --x and --n");
    }
    GridPoint point{};
    if (cfg.n) {
        const std::vector<long> ns{*cfg.n};
        const bool counted = family.is_discrete() && !std::holds_alternative<Poisson>(family.variant());
        point = counted ? grid_from_counts(family, ns).front()
                        : GridPoint{static_cast<double>(*cfg.n), std::nullopt};
    } else {
        const std::vector<double> xs{*cfg.x};
        point = grid_from_means(family, xs).front();
    }
    const OracleResult r = expect_family(family, phi, point, cfg.tol, OracleLimits::from_env());
    if (cfg.format == "json") {
        json doc{{"family", json_io::to_json(family)}, {"phi", json_io::to_json(phi)}, {"x", point.x}};
        if (point.n) {
            doc["n"] = *point.n;
        }
        doc["value"] = r.value;
        doc["terms_used"] = r.terms_used;
        doc["tail_bound"] = r.tail_bound;
        doc["method"] = to_string(r.method);
        out << doc.dump() << "\n";
        return exit_ok;
    }
    out << fmt::format("value = {}\nterms_used = {}\ntail_bound = {}\nmethod = {}\n", r.value,
                       r.terms_used, r.tail_bound, to_string(r.method));
    return exit_ok;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    CLI::App app{"Asymptotic expansions of E phi(U_x) for convolution families, with brute-force checks", "asympt"};
    app.require_subcommand(1);

    auto family_opt = [&](CLI::App* sub) {
        sub->add_option("--family", cfg.family, "poisson | gamma | binomial:p=q | nb:p=q | iid:...")->required();
    };
    auto phi_opt = [&](CLI::App* sub) {
        sub->add_option("--phi", cfg.phi, "power:r=q,a=q | log:beta=q | xlogx")->required();
    };
    auto m_opt = [&](CLI::App* sub) {
        sub->add_option("--M", cfg.M, "expansion order M (1..30)")->check(CLI::Range(1, 30));
    };
    auto output_opt = [&](CLI::App* sub) { sub->add_option("-o,--output", cfg.output, "write output to a file"); };

    CLI::App* coeffs = app.add_subcommand("coeffs", "c_kn table (b_kn with --poisson-recursion)");
    family_opt(coeffs);
    m_opt(coeffs);
    coeffs->add_flag("--poisson-recursion", cfg.poisson_recursion, "use Ramanujan's b_kn recursion");
    coeffs->add_option("--format", cfg.format)->check(CLI::IsMember({"text", "json"}));
    output_opt(coeffs);

    CLI::App* moments = app.add_subcommand("moments", "central moments mu_0..mu_nmax as polynomials in x");
    family_opt(moments);
    moments->add_option("--nmax", cfg.nmax, "highest moment")->check(CLI::Range(0, 60));
    moments->add_option("--format", cfg.format)->check(CLI::IsMember({"text", "json"}));
    output_opt(moments);

    CLI::App* expand = app.add_subcommand("expand", "render S_M(x)");
    family_opt(expand);
    phi_opt(expand);
    m_opt(expand);
    expand->add_flag("--collect", cfg.collect, "re-expand in descending powers of x");
    expand->add_option("--format", cfg.format)->check(CLI::IsMember({"text", "latex", "json"}));
    expand->add_option("--x", cfg.x, "also evaluate at this x");
    output_opt(expand);

    CLI::App* verify = app.add_subcommand("verify", "error table against the oracle and decay-slope verdict");
    family_opt(verify);
    phi_opt(verify);
    m_opt(verify);
    verify->add_option("--grid", cfg.grid, "x grid: start:end:xF or a,b,c");
    verify->add_option("--ngrid", cfg.ngrid, "natural-index grid: start:end:xF or a,b,c");
    verify->add_option("--tol", cfg.tol, "relative error budget")->check(CLI::PositiveNumber);
    verify->add_option("--format", cfg.format)->check(CLI::IsMember({"csv", "text"}));
    output_opt(verify);

    CLI::App* oracle = app.add_subcommand("oracle", "brute-force E phi(U)");
    family_opt(oracle);
    phi_opt(oracle);
    oracle->add_option("--x", cfg.x, "mean");
    oracle->add_option("--n", cfg.n, "natural index (trials, successes)");
    oracle->add_option("--tol", cfg.tol, "relative tolerance")->check(CLI::PositiveNumber);
    oracle->add_option("--format", cfg.format)->check(CLI::IsMember({"text", "json"}));
    output_opt(oracle);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_usage;
    }

    std::ofstream file;
    if (!cfg.output.empty()) {
        file.open(cfg.output);
        if (!file) {
            err << "error: cannot open " << cfg.output << " for writing\n";
            return exit_usage;
        }
    }
    std::ostream& sink = cfg.output.empty() ? out : file;

    try {
        if (coeffs->parsed()) {
            return cmd_coeffs(cfg, sink);
        }
        if (moments->parsed()) {
            return cmd_moments(cfg, sink);
        }
        if (expand->parsed()) {
            return cmd_expand(cfg, sink);
        }
        if (verify->parsed()) {
            return cmd_verify(cfg, sink, err);
        }
        return cmd_oracle(cfg, sink);
    } catch (const unsupported_error& e) {
        err << "unsupported: " << e.what() << "\n";
        return exit_unsupported;
    } catch (const convergence_error& e) {
        err << fmt::format("convergence failure: {} (best value {} after {} terms, tail bound {:.3g})\n",
                           e.what(), e.best_value(), e.terms_used(), e.tail_bound());
        return exit_convergence;
    } catch (const parameter_error& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const usage_error& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const insufficient_data_error& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const domain_error& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return exit_fail;
    }
}

} // namespace asympt::cli
