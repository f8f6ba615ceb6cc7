// nosetori: equilibria, linearization, integration and spectra of
// thermostated integrable systems.
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "nosetori/config.hpp"
#include "nosetori/equilibria.hpp"
#include "nosetori/experiments.hpp"
#include "nosetori/io.hpp"
#include "nosetori/linear_analysis.hpp"
#include "nosetori/spectral.hpp"

using namespace nosetori;
using nlohmann::json;

namespace {

constexpr int kConfigError = 2;
constexpr int kNumericalError = 3;

/// Flags that mirror ExperimentConfig fields; each one set on the command
/// line overrides the value from --config.
struct Overrides {
    std::string config_path;
    std::optional<std::string> potential, thermostat, scheme, start, system_kind;
    std::optional<double> T, a, mu, h, B, delta, parameter;
    std::optional<int> xi, eta;
    std::optional<std::string> out;

    void attach(CLI::App* cmd, bool integrator) {
        cmd->add_option("-c,--config", config_path, "experiment config (JSON)")->check(CLI::ExistingFile);
        cmd->add_option("--system", system_kind, "rotational | homogeneous");
        cmd->add_option("--potential", potential, "quartic | lennard_jones | spherical_pendulum");
        cmd->add_option("--thermostat", thermostat, "nose | winkler | tanh_logistic | variable_mass");
        cmd->add_option("--param", parameter, "Winkler exponent or tanh saturation scale");
        cmd->add_option("--T", T, "temperature");
        cmd->add_option("--a", a, "thermostat coupling a = 1/Q");
        cmd->add_option("--mu", mu, "angular momentum p_theta");
        cmd->add_option("--xi", xi, "homogeneous momentum exponent");
        cmd->add_option("--eta", eta, "homogeneous position exponent");
        if (integrator) {
            cmd->add_option("--scheme", scheme, "crfr4 | rk4");
            cmd->add_option("--step", h, "step size h");
            cmd->add_option("--span", B, "time span B");
            cmd->add_option("--start", start, "equilibrium | perturbed | homogeneous");
            cmd->add_option("--delta", delta, "displacement for a perturbed start");
        }
    }

    ExperimentConfig build(bool require_integrator, bool coupling_unused = false) const {
        json j = json::object();
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            try {
                in >> j;
            } catch (const json::exception& e) {
                throw ConfigError(config_path + ": " + e.what());
            }
        }
        auto& sys = j["system"];
        if (system_kind) sys["kind"] = *system_kind;
        if (potential) sys["potential"]["kind"] = *potential;
        if (thermostat) sys["thermostat"]["kind"] = *thermostat;
        if (parameter) sys["thermostat"]["parameter"] = *parameter;
        if (!sys.contains("thermostat")) sys["thermostat"]["kind"] = "nose";
        if (T) sys["T"] = *T;
        if (a) sys["a"] = *a;
        if (mu) sys["mu"] = *mu;
        if (coupling_unused && !sys.contains("a")) sys["a"] = 0.0;
        if (xi) sys["homogeneous"]["xi"] = *xi;
        if (eta) sys["homogeneous"]["eta"] = *eta;
        if (scheme) j["integrator"]["scheme"] = *scheme;
        if (h) j["integrator"]["h"] = *h;
        if (B) j["integrator"]["B"] = *B;
        if (start) j["start"]["kind"] = *start;
        if (delta) j["start"]["delta"] = *delta;
        return config_from_json(j, require_integrator);
    }
};

void emit(const std::optional<std::string>& path, const std::string& text) {
    if (path)
        write_text_file(*path, text);
    else
        std::cout << text;
}

std::vector<double> parse_values(const std::string& list) {
    std::vector<double> out;
    std::stringstream ss(list);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(cell, &used));
            if (used != cell.size()) throw std::invalid_argument(cell);
        } catch (const std::exception&) {
            throw ConfigError("bad value '" + cell + "' in --values");
        }
    }
    return out;
}

Trajectory<double> load_trajectory(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open " + path);
    char head[8] = {};
    in.read(head, 8);
    in.clear();
    in.seekg(0);
    if (std::string(head, 8) == "NSTRAJ01") return read_trajectory_binary(in);
    return read_trajectory_csv(in);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"nosetori: thermostated integrable systems laboratory"};
    app.require_subcommand(1);
    Overrides ov;

    auto* eq_cmd = app.add_subcommand("equilibrium", "solve the relative-equilibrium conditions");
    ov.attach(eq_cmd, false);
    eq_cmd->add_option("-o,--out", ov.out, "write the JSON record here");

    auto* lin_cmd = app.add_subcommand("linearize", "normal-mode frequencies at the equilibrium");
    ov.attach(lin_cmd, false);
    lin_cmd->add_option("-o,--out", ov.out, "write the JSON record here");

    auto* run_cmd = app.add_subcommand("run", "integrate and run the configured analyses");
    ov.attach(run_cmd, true);
    std::optional<std::string> run_dir;
    run_cmd->add_option("-o,--out", run_dir, "artifact directory (overrides output.directory)");

    auto* sweep_cmd = app.add_subcommand("sweep-eta", "eta = omega1/omega2 over a parameter grid");
    ov.attach(sweep_cmd, false);
    std::string variable = "T";
    std::string values;
    std::vector<double> range;
    bool log_spacing = false;
    sweep_cmd->add_option("--variable", variable, "T | mu | a")->check(CLI::IsMember({"T", "mu", "a"}));
    sweep_cmd->add_option("--values", values, "comma-separated grid");
    sweep_cmd->add_option("--range", range, "lo hi count")->expected(3);
    sweep_cmd->add_flag("--log", log_spacing, "geometric spacing for --range");
    sweep_cmd->add_option("-o,--out", ov.out, "write CSV here");

    auto* spec_cmd = app.add_subcommand("spectrum", "amplitude spectrum of a trajectory series");
    std::string input;
    std::string series = "s";
    bool keep_mean = false;
    std::optional<std::string> spec_out;
    spec_cmd->add_option("-i,--input", input, "trajectory CSV or NSTRAJ01 dump")->required();
    spec_cmd->add_option("--series", series, "r, p_r, theta, p_theta, s, S, H or T_inst");
    spec_cmd->add_flag("--keep-mean", keep_mean, "do not subtract the series mean");
    spec_cmd->add_option("-o,--out", spec_out, "write CSV here");

    auto* rep_cmd = app.add_subcommand("reproduce", "regenerate the data behind a figure");
    std::string figure;
    std::string rep_dir;
    rep_cmd->add_option("figure", figure, "fig1 | fig2 | fig3 | fig4 | fig2-logistic | fig3-logistic")->required();
    rep_cmd->add_option("-o,--out", rep_dir, "artifact directory (default: artifacts/<figure>)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kConfigError;
    }

    try {
        if (*eq_cmd) {
            const auto cfg = ov.build(false, true);
            if (cfg.system.kind != "rotational") throw ConfigError("equilibrium needs a rotational system");
            const auto pot = build_potential(cfg.system.potential);
            const auto eq = solve_equilibrium(pot, cfg.system.T, cfg.system.mu);
            const auto th = Thermostat<double>::nose(cfg.system.a, cfg.system.T);
            emit(ov.out, equilibrium_json(cfg.system.potential.kind, eq, equilibrium_residuals(pot, th, eq)).dump(2) + "\n");
        } else if (*lin_cmd) {
            const auto cfg = ov.build(false);
            if (cfg.system.kind != "rotational") throw ConfigError("linearize needs a rotational system");
            const auto pot = build_potential(cfg.system.potential);
            const auto eq = solve_equilibrium(pot, cfg.system.T, cfg.system.mu);
            json j = linear_model_json(linearize(pot, build_thermostat(cfg.system), eq));
            j["r_star"] = eq.r_star;
            j["s0"] = eq.s0;
            emit(ov.out, j.dump(2) + "\n");
        } else if (*run_cmd) {
            auto cfg = ov.build(true);
            if (run_dir) cfg.output.directory = *run_dir;
            const auto result = run_experiment(cfg);
            std::cout << result.summary.dump(2) << "\n";
        } else if (*sweep_cmd) {
            const auto cfg = ov.build(false);
            if (cfg.system.kind != "rotational") throw ConfigError("sweep-eta needs a rotational system");
            std::vector<double> grid;
            if (!values.empty()) {
                grid = parse_values(values);
            } else if (range.size() == 3) {
                const int count = static_cast<int>(range[2]);
                if (count < 2) throw ConfigError("--range count must be at least 2");
                if (log_spacing && !(range[0] > 0.0 && range[1] > 0.0))
                    throw ConfigError("--log needs a positive range");
                for (int i = 0; i < count; ++i) {
                    const double t = static_cast<double>(i) / (count - 1);
                    grid.push_back(log_spacing ? range[0] * std::pow(range[1] / range[0], t)
                                               : range[0] + t * (range[1] - range[0]));
                }
            } else {
                throw ConfigError("sweep-eta needs --values or --range");
            }
            const auto pot = build_potential(cfg.system.potential);
            const auto th = build_thermostat(cfg.system);
            const auto points = variable == "T"    ? eta_of_T(pot, th, grid, cfg.system.mu)
                                : variable == "mu" ? eta_of_mu(pot, th, grid)
                                                   : eta_of_a(pot, th, grid, cfg.system.mu);
            std::ostringstream out;
            write_sweep_csv(out, points);
            emit(ov.out, out.str());
        } else if (*spec_cmd) {
            const auto traj = load_trajectory(input);
            const auto spec = amplitude_spectrum(trajectory_series(traj, series), traj.sample_spacing, !keep_mean);
            std::ostringstream out;
            write_spectrum_csv(out, spec);
            emit(spec_out, out.str());
        } else if (*rep_cmd) {
            const std::string dir = rep_dir.empty() ? "artifacts/" + figure : rep_dir;
            const auto m = reproduce_figure(figure, dir);
            std::cout << m.dump(2) << "\n";
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::out_of_range& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const NoSolution& e) {
        std::cerr << "no solution: " << e.what() << "\n";
        return kNumericalError;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kNumericalError;
    }
    return 0;
}
