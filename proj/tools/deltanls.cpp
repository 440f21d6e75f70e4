// deltanls: command-line front end.
//
//   deltanls solve    --p 4 --q 3 --omega 1 --out gs.csv
//   deltanls minimize --p 4 --q 3 --mass 1 --out min.csv
//   deltanls phase    --p 6 --q 4 --mass-min 0.1 --mass-max 3 --steps 30
//   deltanls verify   [--only matching] [--tolerance-scale 1e-3]
//
// Any flag can also come from --config file.json, whose keys are the flag
// names without dashes ("mass-min" or "mass_min"); "command" picks the
// subcommand. Flags on the command line win over the file.
//
// Exit codes: 0 ok, 1 bad parameters, 2 regime refusal, 3 no convergence,
// 4 verification failure.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "deltanls/deltanls.hpp"

namespace {

using nlohmann::json;
using namespace deltanls;

constexpr int kOk = 0;
constexpr int kParameter = 1;
constexpr int kRegime = 2;
constexpr int kNoConvergence = 3;
constexpr int kVerifyFailed = 4;
constexpr const char* kVersion = "1.0.0";

struct RunConfig {
    std::optional<double> p, q, mass, omega;
    double mass_min = 0.0, mass_max = 0.0;
    std::size_t steps = 0;
    std::optional<std::size_t> grid_n;
    std::optional<double> half_width;
    std::optional<double> tol;
    int max_iter = 20000;
    std::string out;
    std::string format = "csv";
    std::vector<std::string> only;
    double tolerance_scale = 1.0;
};

json null_or(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json meta(const std::string& command) {
    return {{"tool", "deltanls"}, {"version", kVersion}, {"command", command}};
}

json params_json(const EnergyParams& params) {
    return {{"p", null_or(params.standard_power())}, {"q", null_or(params.point_power())}, {"label", params.label()}};
}

json regime_json(const RegimeClassification& r) {
    return {{"verdict", std::string(to_string(r.verdict))},
            {"infimum", std::string(to_string(r.infimum))},
            {"critical_mass", null_or(r.critical_mass)}};
}

Grid grid_for(const RunConfig& cfg, double omega_hint) {
    const double width = cfg.half_width.value_or(std::max(40.0, 25.0 / std::sqrt(omega_hint)));
    return Grid(width, cfg.grid_n.value_or(8001));
}

// Writes the profile to cfg.out (CSV plus JSON sidecar, or one JSON file),
// or the summary alone to stdout when no path was given.
void emit(const RunConfig& cfg, const GridFunction& profile, json summary) {
    if (cfg.out.empty()) {
        std::cout << summary.dump(2) << '\n';
        return;
    }
    const std::filesystem::path path(cfg.out);
    if (cfg.format == "json") {
        summary["profile"] = io::profile_json(profile);
        io::write_json(path, summary);
        return;
    }
    auto out = io::open_output(path);
    io::write_profile_csv(out, profile);
    io::write_json(io::sidecar_path(path), summary);
}

EnergyParams params_of(const RunConfig& cfg) { return EnergyParams::make(cfg.p, cfg.q); }

int cmd_solve(const RunConfig& cfg) {
    const EnergyParams params = params_of(cfg);
    if (cfg.mass.has_value() == cfg.omega.has_value()) throw ParameterError("solve needs exactly one of --mass, --omega");
    const GroundStateSolution gs = cfg.omega ? ground_state(params, *cfg.omega) : ground_state_at_mass(params, *cfg.mass);
    const GridFunction profile = sample(gs.profile, grid_for(cfg, gs.omega));

    json summary{{"schema", io::kSchemaVersion},
                 {"params", params_json(params)},
                 {"omega", gs.omega},
                 {"mass", gs.mass},
                 {"energy", gs.energy},
                 {"origin_value", gs.norms.origin},
                 {"kinetic", gs.norms.kinetic},
                 {"regime", regime_json(classify_regime(params, MassConstraint{gs.mass}))},
                 {"grid", {{"half_width", profile.grid().half_width()}, {"count", profile.grid().count()}}},
                 {"meta", meta("solve")}};
    summary["t_bar"] = gs.matching ? json(gs.matching->t_bar) : json(nullptr);
    summary["shift_a"] = gs.matching ? json(gs.matching->shift_a) : json(nullptr);
    emit(cfg, profile, std::move(summary));
    return kOk;
}

int cmd_minimize(const RunConfig& cfg) {
    const EnergyParams params = params_of(cfg);
    if (!cfg.mass) throw ParameterError("minimize needs --mass");
    if (cfg.omega) throw ParameterError("minimize takes --mass, not --omega");
    const MassConstraint mass{*cfg.mass};

    MinimizerOptions opts;
    opts.max_iterations = cfg.max_iter;
    if (cfg.tol) opts.gradient_tolerance = *cfg.tol;
    if (cfg.grid_n || cfg.half_width) {
        const Grid fallback = default_grid(params, mass.value());
        opts.grid = Grid(cfg.half_width.value_or(fallback.half_width()), cfg.grid_n.value_or(fallback.count()));
    }
    const MinimizerResult r = minimize(params, mass, opts);

    json summary{{"schema", io::kSchemaVersion},
                 {"params", params_json(params)},
                 {"mass", mass.value()},
                 {"energy", r.energy},
                 {"multiplier_estimate", r.multiplier_estimate},
                 {"el_residual", r.el_residual},
                 {"interior_residual", r.pointwise_residual.interior},
                 {"jump_residual", r.pointwise_residual.jump},
                 {"iterations", r.iterations},
                 {"converged", r.converged},
                 {"grid", {{"half_width", r.profile.grid().half_width()}, {"count", r.profile.grid().count()}}},
                 {"meta", meta("minimize")}};
    try {
        const GroundStateSolution gs = ground_state_at_mass(params, mass.value());
        summary["analytic"] = {{"energy", gs.energy}, {"omega", gs.omega}};
    } catch (const std::exception&) {
        summary["analytic"] = nullptr;
    }
    emit(cfg, r.profile, std::move(summary));
    if (!r.converged) {
        std::cerr << "minimize: no convergence after " << r.iterations << " iterations (residual "
                  << io::format_double(r.el_residual) << ")\n";
        return kNoConvergence;
    }
    return kOk;
}

int cmd_phase(const RunConfig& cfg) {
    const EnergyParams params = params_of(cfg);
    const auto rows = phase_sweep(params, cfg.mass_min, cfg.mass_max, cfg.steps);
    if (cfg.format == "json") {
        const json doc{{"schema", io::kSchemaVersion},
                       {"params", params_json(params)},
                       {"rows", io::phase_json(rows)},
                       {"meta", meta("phase")}};
        if (cfg.out.empty())
            std::cout << doc.dump(2) << '\n';
        else
            io::write_json(cfg.out, doc);
        return kOk;
    }
    if (cfg.out.empty()) {
        io::write_phase_csv(std::cout, rows);
    } else {
        auto out = io::open_output(cfg.out);
        io::write_phase_csv(out, rows);
    }
    return kOk;
}

int cmd_verify(const RunConfig& cfg) {
    const auto results = verify::run(cfg.only, cfg.tolerance_scale);
    json checks = json::array();
    std::vector<std::string> failed;
    for (const auto& r : results) {
        checks.push_back({{"name", r.name},
                          {"description", r.description},
                          {"passed", r.passed},
                          {"measured", std::isfinite(r.measured) ? json(r.measured) : json(nullptr)},
                          {"tolerance", r.tolerance},
                          {"bound", r.lower_bound ? "lower" : "upper"},
                          {"slack", std::isfinite(r.measured) ? json(r.slack()) : json(nullptr)}});
        if (!r.passed) failed.push_back(r.name);
    }
    const json doc{{"schema", io::kSchemaVersion},
                   {"passed", failed.empty()},
                   {"tolerance_scale", cfg.tolerance_scale},
                   {"checks", checks},
                   {"meta", meta("verify")}};
    if (cfg.out.empty())
        std::cout << doc.dump(2) << '\n';
    else
        io::write_json(cfg.out, doc);
    if (!failed.empty()) {
        std::cerr << "verify: failed:";
        for (const auto& n : failed) std::cerr << ' ' << n;
        std::cerr << '\n';
        return kVerifyFailed;
    }
    return kOk;
}

// Turns the --config file into ordinary arguments placed ahead of the real
// ones, so later (command-line) values override it.
std::vector<std::string> expand_config(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    std::string path;
    for (std::size_t i = 1; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            path = args[i + 1];
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
            break;
        }
        if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
            break;
        }
    }
    if (path.empty()) return args;

    std::ifstream in(path);
    if (!in) throw ParameterError("cannot read config file " + path);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParameterError("config file " + path + " is not valid JSON: " + e.what());
    }
    if (!doc.is_object()) throw ParameterError("config file must hold a JSON object");

    static const std::vector<std::string> commands{"solve", "minimize", "phase", "verify"};
    const bool has_command = args.size() > 1 && std::find(commands.begin(), commands.end(), args[1]) != commands.end();
    std::vector<std::string> flags;
    std::string command;
    for (const auto& [key, value] : doc.items()) {
        if (key == "command") {
            command = value.get<std::string>();
            continue;
        }
        std::string flag = "--" + key;
        std::replace(flag.begin(), flag.end(), '_', '-');
        auto scalar = [&](const json& v) {
            if (v.is_string()) return v.get<std::string>();
            if (v.is_number_float()) return io::format_double(v.get<double>());
            return v.dump();
        };
        if (value.is_array()) {
            for (const auto& v : value) flags.insert(flags.end(), {flag, scalar(v)});
        } else if (value.is_boolean()) {
            if (value.get<bool>()) flags.push_back(flag);
        } else if (!value.is_null()) {
            flags.insert(flags.end(), {flag, scalar(value)});
        }
    }

    std::vector<std::string> out{args[0]};
    if (has_command) {
        out.push_back(args[1]);
    } else if (!command.empty()) {
        out.push_back(command);
    }
    out.insert(out.end(), flags.begin(), flags.end());
    out.insert(out.end(), args.begin() + (has_command ? 2 : 1), args.end());
    return out;
}

void add_power_flags(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--p", cfg.p, "standard power p in (2, 6]");
    sub->add_option("--q", cfg.q, "point power q in (2, 4]");
}

void add_output_flags(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--out", cfg.out, "output path");
    sub->add_option("--format", cfg.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
}

}  // namespace

int main(int argc, char** argv) {
    RunConfig cfg;
    CLI::App app{"Ground states of 1D NLS energies with a point nonlinearity at the origin", "deltanls"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.add_option("--config", "JSON file whose keys mirror the flags");

    auto* solve = app.add_subcommand("solve", "closed-form ground state at given mass or frequency");
    add_power_flags(solve, cfg);
    solve->add_option("--mass", cfg.mass, "prescribed mass");
    solve->add_option("--omega", cfg.omega, "frequency");
    solve->add_option("--grid-n", cfg.grid_n, "nodes of the output grid (odd)");
    solve->add_option("--half-width", cfg.half_width, "half width of the output grid");
    add_output_flags(solve, cfg);

    auto* mini = app.add_subcommand("minimize", "discrete mass-constrained minimization");
    add_power_flags(mini, cfg);
    mini->add_option("--mass", cfg.mass, "prescribed mass");
    mini->add_option("--omega", cfg.omega, "rejected; minimize takes a mass");
    mini->add_option("--grid-n", cfg.grid_n, "grid nodes (odd)");
    mini->add_option("--half-width", cfg.half_width, "grid half width");
    mini->add_option("--tol", cfg.tol, "stopping tolerance on the Euler-Lagrange residual");
    mini->add_option("--max-iter", cfg.max_iter, "iteration budget");
    add_output_flags(mini, cfg);

    auto* phase = app.add_subcommand("phase", "regime table over a mass sweep");
    add_power_flags(phase, cfg);
    phase->add_option("--mass-min", cfg.mass_min, "smallest mass")->required();
    phase->add_option("--mass-max", cfg.mass_max, "largest mass")->required();
    phase->add_option("--steps", cfg.steps, "number of evenly spaced masses (>= 2)")->required();
    add_output_flags(phase, cfg);

    auto* ver = app.add_subcommand("verify", "run the invariant checks");
    ver->add_option("--only", cfg.only, "run only checks whose name contains this")
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    ver->add_option("--tolerance-scale", cfg.tolerance_scale, "multiply every tolerance");
    ver->add_option("--out", cfg.out, "report path (default stdout)");

    try {
        std::vector<std::string> args = expand_config(argc, argv);
        std::reverse(args.begin(), args.end());
        args.pop_back();
        app.parse(std::move(args));
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kParameter;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kParameter;
    }

    try {
        if (*solve) return cmd_solve(cfg);
        if (*mini) return cmd_minimize(cfg);
        if (*phase) return cmd_phase(cfg);
        if (*ver) return cmd_verify(cfg);
    } catch (const RegimeError& e) {
        std::cerr << "refused: " << e.what() << '\n';
        std::cout << "verdict: " << to_string(e.classification().verdict) << '\n';
        return kRegime;
    } catch (const ParameterError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kParameter;
    } catch (const RangeError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kParameter;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kParameter;
    }
    return kParameter;
}
