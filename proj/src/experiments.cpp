#include "nosetori/experiments.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>
#include <variant>

#include "nosetori/io.hpp"

namespace nosetori {

using nlohmann::json;

namespace {

constexpr const char* kGenerator = "nosetori 0.1.0";

using AnySystem = std::variant<RotationalSystem<double>, HomogeneousSystem<double>>;

AnySystem build_system(const SystemConfig& cfg) {
    if (cfg.kind == "homogeneous") return HomogeneousSystem<double>(cfg.homogeneous, build_thermostat(cfg));
    return RotationalSystem<double>(build_potential(cfg.potential), build_thermostat(cfg));
}

std::string csv_table(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows) {
    std::ostringstream out;
    auto put = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
        out << '\n';
    };
    put(header);
    for (const auto& r : rows) put(r);
    return out.str();
}

std::string fmt(double v) { return format_double(v); }
std::string fmt(Eigen::Index v) { return std::to_string(v); }

std::vector<double> log_grid(double lo, double hi, int count) {
    std::vector<double> out;
    for (int i = 0; i < count; ++i)
        out.push_back(std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * i / (count - 1)));
    return out;
}

json manifest(const std::string& id, const json& parameters, const std::vector<std::string>& files) {
    return {{"figure", id},
            {"generator", kGenerator},
            {"parameters", parameters},
            {"config_hash", config_hash(parameters)},
            {"deterministic", true},
            {"files", files}};
}

ThermostatFactory nose_factory() {
    return [](double a, double T) { return Thermostat<double>::nose(a, T); };
}

ThermostatFactory logistic_factory(double d) {
    return [d](double a, double T) { return Thermostat<double>::tanh_logistic(d, a, T); };
}

std::string dump_manifest(const std::filesystem::path& dir, const json& m) {
    write_text_file(dir / "manifest.json", m.dump(2) + "\n");
    return "manifest.json";
}

json reproduce_fig1(const std::filesystem::path& dir, unsigned workers) {
    const std::vector<double> couplings = {0.01, 0.1, 1.0};
    const int points = 81;
    json params = {{"potential", "quartic"}, {"thermostat", "nose"}, {"mu", 1.0},
                   {"a", couplings},         {"ln_T", {-2.0, 2.0}},  {"points", points}};
    const auto pot = Potential<double>::quartic();
    std::vector<double> temps;
    for (int i = 0; i < points; ++i) temps.push_back(std::exp(-2.0 + 4.0 * i / (points - 1)));

    std::vector<std::vector<SweepPoint>> curves(couplings.size());
    parallel_for(
        couplings.size(),
        [&](std::size_t i) { curves[i] = eta_of_T(pot, Thermostat<double>::nose(couplings[i], 1.0), temps, 1.0); },
        workers);

    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < couplings.size(); ++i)
        for (const auto& p : curves[i])
            rows.push_back({fmt(couplings[i]), fmt(std::log(p.x)), fmt(p.x), fmt(p.omega1), fmt(p.omega2),
                            fmt(p.eta), p.degenerate ? "1" : "0", p.status});
    write_text_file(dir / "fig1_eta.csv",
                    csv_table({"a", "ln_T", "T", "omega1", "omega2", "eta", "degenerate", "status"}, rows));
    const std::vector<std::string> files = {"fig1_eta.csv", "manifest.json"};
    return manifest("fig1", params, files);
}

json reproduce_fig2(const std::string& id, const std::filesystem::path& dir, unsigned workers, bool logistic) {
    const double a = 1e-2, T = 1.0, h = 1.0 / 32.0, B = 1024.0, d = 1.0;
    const std::vector<int> exps = {2, 4, 6, 8, 10};
    json params = {{"a", a},   {"T", T}, {"h", h}, {"B", B}, {"exponents", exps},
                   {"thermostat", logistic ? "tanh_logistic" : "nose"}, {"start", "x=0,S=0,s=1,H=T/lambda"}};
    if (logistic) params["d"] = d;
    const auto factory = logistic ? logistic_factory(d) : nose_factory();

    std::vector<std::pair<int, int>> cells;
    for (int xi : exps)
        for (int eta : exps) cells.emplace_back(xi, eta);
    std::vector<HomogeneousRatioPoint> points(cells.size());
    parallel_for(
        cells.size(),
        [&](std::size_t i) {
            points[i] = homogeneous_ratio_point(cells[i].first, cells[i].second, a, T, h, B, factory);
        },
        workers);

    std::vector<std::vector<std::string>> rows;
    for (const auto& p : points)
        rows.push_back({std::to_string(p.xi), std::to_string(p.eta), fmt(p.lambda), fmt(p.omega_int),
                        fmt(p.paper_ratio), fmt(p.nose_ratio), fmt(p.measured.k1), fmt(p.measured.k2),
                        fmt(p.measured.eta_hat), fmt(p.measured.lower), fmt(p.measured.upper),
                        p.measured.brackets(p.paper_ratio) ? "1" : "0", p.measured.brackets(p.nose_ratio) ? "1" : "0"});
    write_text_file(dir / "fig2_points.csv",
                    csv_table({"xi", "eta", "lambda", "omega_int", "paper_ratio", "nose_ratio", "k1", "k2",
                               "ratio_hat", "lower", "upper", "paper_in_band", "nose_in_band"},
                              rows));

    std::vector<std::vector<std::string>> theory;
    for (int i = 0; i <= 200; ++i) {
        const double lambda = 1.0 + 4.0 * i / 200.0;
        const double omega_int = lambda * std::pow(T / lambda, (lambda - 1.0) / lambda);
        const double paper = paper_thermostat_frequency((lambda - 1.0) * T, 1.0, T, 1.0, a) / omega_int;
        const double nose = nose_frequency_approx(1, T, 1.0, a) / omega_int;
        theory.push_back({fmt(lambda), fmt(paper), fmt(nose)});
    }
    write_text_file(dir / "fig2_theory.csv", csv_table({"lambda", "paper_ratio", "nose_ratio"}, theory));
    const std::vector<std::string> files = {"fig2_points.csv", "fig2_theory.csv", "manifest.json"};
    return manifest(id, params, files);
}

json reproduce_fig3(const std::string& id, const std::filesystem::path& dir, unsigned workers, bool logistic) {
    const double T = 0.5, mu = 1.0, h = 1.0 / 16.0, d = 1.0;
    const std::vector<double> couplings = {0.01, 0.03, 0.1, 0.3, 1.0, 3.0, 10.0, 30.0};
    const std::vector<double> spans = {256.0, 1024.0};
    const std::vector<double> deltas = {1e-6, 1e-2};
    json params = {{"potential", "lennard_jones"}, {"T", T},          {"mu", mu},        {"h", h},
                   {"B", spans},                   {"delta", deltas}, {"a", couplings},
                   {"thermostat", logistic ? "tanh_logistic" : "nose"}};
    if (logistic) params["d"] = d;
    const auto factory = logistic ? logistic_factory(d) : nose_factory();
    const auto pot = Potential<double>::lennard_jones();

    struct Job {
        double delta, B, a;
    };
    std::vector<Job> jobs;
    for (double delta : deltas)
        for (double B : spans)
            for (double a : couplings) jobs.push_back({delta, B, a});
    std::vector<RotationalRatioPoint> points(jobs.size());
    parallel_for(
        jobs.size(),
        [&](std::size_t i) {
            points[i] = rotational_ratio_point(pot, factory(jobs[i].a, T), mu, jobs[i].delta, h, jobs[i].B);
        },
        workers);

    std::vector<std::vector<std::string>> rows;
    for (const auto& p : points)
        rows.push_back({fmt(p.delta), fmt(p.B), fmt(p.a), fmt(p.theory.eta), fmt(p.measured.k1), fmt(p.measured.k2),
                        fmt(p.measured.eta_hat), fmt(p.measured.lower), fmt(p.measured.upper),
                        fmt(p.measured.uncertainty), p.measured.brackets(p.theory.eta) ? "1" : "0"});
    write_text_file(dir / "fig3_points.csv",
                    csv_table({"delta", "B", "a", "eta_theory", "k1", "k2", "eta_hat", "lower", "upper",
                               "uncertainty", "in_band"},
                              rows));

    const auto eq = solve_equilibrium(pot, T, mu);
    std::vector<std::vector<std::string>> theory;
    for (double a : log_grid(1e-2, 1e2, 161)) {
        const auto m = linearize(pot, factory(a, T), eq);
        theory.push_back({fmt(a), fmt(m.omega1), fmt(m.omega2), fmt(m.eta)});
    }
    write_text_file(dir / "fig3_theory.csv", csv_table({"a", "omega1", "omega2", "eta"}, theory));
    const std::vector<std::string> files = {"fig3_points.csv", "fig3_theory.csv", "manifest.json"};
    return manifest(id, params, files);
}

json reproduce_fig4(const std::filesystem::path& dir, unsigned workers) {
    const double T = 0.5, mu = 1.0, h = 1.0 / 16.0, B = 1024.0;
    const std::vector<std::pair<double, double>> panels = {{1.0, 1e-6}, {19.0, 1e-2}};
    json params = {{"potential", "lennard_jones"}, {"thermostat", "nose"}, {"T", T}, {"mu", mu}, {"h", h}, {"B", B},
                   {"panels", json::array({{{"a", 1.0}, {"delta", 1e-6}}, {{"a", 19.0}, {"delta", 1e-2}}})}};
    const auto pot = Potential<double>::lennard_jones();
    const auto eq = solve_equilibrium(pot, T, mu);

    std::vector<std::string> orbit(panels.size()), drift(panels.size());
    parallel_for(
        panels.size(),
        [&](std::size_t i) {
            RotationalSystem<double> sys(pot, Thermostat<double>::nose(panels[i].first, T));
            const auto traj = integrate(sys, IntegratorSpec{Scheme::CRFR4, h, static_cast<std::size_t>(B / h)},
                                        perturbed_start(pot, eq, panels[i].second));
            std::vector<std::vector<std::string>> rows;
            for (Eigen::Index k = 0; k < traj.size(); ++k) {
                const auto x = traj.state(k);
                rows.push_back({fmt(traj.times(k)), fmt(x(idx::s)), fmt(x(idx::S)),
                                fmt(x(idx::r) * std::cos(x(idx::theta))), fmt(x(idx::r) * std::sin(x(idx::theta)))});
            }
            orbit[i] = csv_table({"t", "s", "S", "x", "y"}, rows);
            std::ostringstream out;
            write_drift_csv(out, drift_report(sys, traj));
            drift[i] = out.str();
        },
        workers);

    std::vector<std::string> files;
    for (std::size_t i = 0; i < panels.size(); ++i) {
        const std::string stem = "fig4_panel" + std::to_string(i + 1);
        write_text_file(dir / (stem + "_orbit.csv"), orbit[i]);
        write_text_file(dir / (stem + "_drift.csv"), drift[i]);
        files.push_back(stem + "_orbit.csv");
        files.push_back(stem + "_drift.csv");
    }
    files.push_back("manifest.json");
    return manifest("fig4", params, files);
}

}  // namespace

unsigned worker_count() {
    if (const char* env = std::getenv("NOSETORI_WORKERS")) {
        char* end = nullptr;
        const long n = std::strtol(env, &end, 10);
        if (end && *end == '\0' && n > 0) return static_cast<unsigned>(n);
        throw ConfigError("NOSETORI_WORKERS must be a positive integer");
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body, unsigned workers) {
    const std::size_t threads = std::min<std::size_t>(std::max(1u, workers), n);
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) {
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            }
        });
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

PhaseState<double> homogeneous_start(const HomogeneousSpec& spec, double T) {
    const double p = std::pow(spec.normalization() * T / spec.lambda(), 1.0 / spec.xi);
    return make_state<double>(0.0, p, 0.0, 0.0, 1.0, 0.0);
}

std::size_t spectral_steps(double h, double B) {
    const double n = std::round(B / h);
    if (!(n >= 4.0) || std::abs(n * h - B) > 1e-9 * B) throw ConfigError("B must be a multiple of h with B/h >= 4");
    return static_cast<std::size_t>(n) - 1;
}

HomogeneousRatioPoint homogeneous_ratio_point(int xi, int eta, double a, double T, double h, double B,
                                              const ThermostatFactory& make_thermostat) {
    const HomogeneousSpec spec(1, xi, eta);
    const auto th = make_thermostat(a, T);
    HomogeneousSystem<double> sys(spec, th);
    const auto traj = integrate(sys, IntegratorSpec{Scheme::CRFR4, h, spectral_steps(h, B)}, homogeneous_start(spec, T));

    HomogeneousRatioPoint out;
    out.xi = xi;
    out.eta = eta;
    out.lambda = spec.lambda();
    out.omega_int = homogeneous_internal_frequency(spec, T);
    const double action = std::pow(T / spec.lambda(), 1.0 / spec.lambda());
    const double s0 = homogeneous_s0(spec, Eigen::VectorXd::Constant(1, action), T);  // = 1 for this start
    out.paper_ratio =
        paper_thermostat_frequency(homogeneous_G22(spec, T, s0), s0, T, th.omega2(s0), a) / out.omega_int;
    out.nose_ratio = nose_frequency_approx(1, T, s0, a) / out.omega_int;
    out.measured = measure_frequency_ratio(traj, {"s"}, {"x"}, 3);
    return out;
}

RotationalRatioPoint rotational_ratio_point(const Potential<double>& pot, const Thermostat<double>& th, double mu,
                                            double delta, double h, double B) {
    const auto eq = solve_equilibrium(pot, th.temperature(), mu);
    RotationalSystem<double> sys(pot, th);
    const auto traj = integrate(sys, IntegratorSpec{Scheme::CRFR4, h, spectral_steps(h, B)},
                                perturbed_start(pot, eq, delta));
    RotationalRatioPoint out;
    out.a = th.coupling();
    out.delta = delta;
    out.B = B;
    out.theory = linearize(pot, th, eq);
    out.measured = measure_frequency_ratio(traj, {"s"}, {"r"}, 3);
    return out;
}

PhaseState<double> start_state(const ExperimentConfig& cfg) {
    const auto& sys = cfg.system;
    const auto& st = cfg.start;
    if (st.kind == "explicit") return Eigen::Map<const PhaseState<double>>(st.state.data());
    if (sys.kind == "homogeneous") {
        if (st.kind == "perturbed") throw ConfigError("perturbed starts need a rotational system");
        return homogeneous_start(sys.homogeneous, sys.T);
    }
    if (st.kind == "homogeneous") throw ConfigError("start kind 'homogeneous' needs a homogeneous system");
    const auto pot = build_potential(sys.potential);
    const auto eq = solve_equilibrium(pot, sys.T, sys.mu);
    if (st.kind == "equilibrium") return lift_to_phase(eq);
    return perturbed_start(pot, eq, st.delta, ReducedVector<double>(Eigen::Map<const Eigen::Vector4d>(st.direction.data())));
}

RunResult run_experiment(const ExperimentConfig& cfg) {
    const std::filesystem::path dir = cfg.output.directory;
    const AnySystem system = build_system(cfg.system);
    const auto x0 = start_state(cfg);
    const IntegratorSpec spec{cfg.integrator.scheme, cfg.integrator.h, cfg.integrator.n_steps()};

    RunResult result;
    result.trajectory = std::visit(
        [&](const auto& sys) { return integrate(sys, spec, x0, cfg.integrator.sample_stride); }, system);
    const auto& traj = result.trajectory;
    json summary = {{"samples", traj.size()}, {"sample_spacing", traj.sample_spacing}};

    for (const auto& format : cfg.output.formats) {
        std::ostringstream out;
        if (format == "csv") {
            write_trajectory_csv(out, traj);
            write_text_file(dir / "trajectory.csv", out.str());
            result.files.push_back("trajectory.csv");
        } else {
            write_trajectory_binary(out, traj);
            write_text_file(dir / "trajectory.bin", out.str());
            result.files.push_back("trajectory.bin");
        }
    }

    for (const auto& an : cfg.analyses) {
        if (an.kind == "drift") {
            const auto drift = std::visit([&](const auto& sys) { return drift_report(sys, traj); }, system);
            std::ostringstream out;
            write_drift_csv(out, drift);
            write_text_file(dir / "drift.csv", out.str());
            result.files.push_back("drift.csv");
            summary["drift"] = {{"max_abs_energy_drift", drift.max_abs_energy_drift},
                                {"max_abs_ptheta_drift", drift.max_abs_ptheta_drift}};
        } else if (an.kind == "spectrum") {
            const auto spec_out = amplitude_spectrum(trajectory_series(traj, an.series), traj.sample_spacing, an.demean);
            std::ostringstream out;
            write_spectrum_csv(out, spec_out);
            const std::string name = "spectrum_" + an.series + ".csv";
            write_text_file(dir / name, out.str());
            result.files.push_back(name);
            const auto peak = dominant_peak(spec_out);
            summary["spectrum"][an.series] = {{"peak_bin", peak.k},
                                              {"peak_frequency", spec_out.frequencies(peak.k)},
                                              {"peak_amplitude", peak.amplitude}};
        } else if (an.kind == "ratio") {
            const auto est = measure_frequency_ratio(traj, {an.thermostat_series}, {an.internal_series}, 3);
            json r = ratio_json(est);
            if (cfg.system.kind == "rotational" && cfg.system.a > 0.0) {
                const auto pot = build_potential(cfg.system.potential);
                const auto m = linearize(pot, build_thermostat(cfg.system), solve_equilibrium(pot, cfg.system.T, cfg.system.mu));
                r["eta_theory"] = m.eta;
                r["theory_in_band"] = est.brackets(m.eta);
            }
            summary["ratio"] = r;
        } else if (an.kind == "birkhoff") {
            summary["birkhoff"][an.series] = birkhoff_average(trajectory_series(traj, an.series), traj.sample_spacing);
        } else if (an.kind == "sweep") {
            if (cfg.system.kind != "rotational") throw ConfigError("sweeps need a rotational system");
            const auto pot = build_potential(cfg.system.potential);
            const auto th = build_thermostat(cfg.system);
            const auto points = an.variable == "T"    ? eta_of_T(pot, th, an.values, cfg.system.mu)
                                : an.variable == "mu" ? eta_of_mu(pot, th, an.values)
                                                      : eta_of_a(pot, th, an.values, cfg.system.mu);
            std::ostringstream out;
            write_sweep_csv(out, points);
            const std::string name = "sweep_" + an.variable + ".csv";
            write_text_file(dir / name, out.str());
            result.files.push_back(name);
        }
    }

    write_text_file(dir / "summary.json", summary.dump(2) + "\n");
    result.files.push_back("summary.json");
    result.files.push_back("manifest.json");
    const json config = to_json(cfg);
    json physics = config;
    physics.erase("output");
    const json m = {{"command", "run"},       {"generator", kGenerator}, {"config", config},
                    {"config_hash", config_hash(physics)}, {"deterministic", true}, {"files", result.files}};
    write_text_file(dir / "manifest.json", m.dump(2) + "\n");
    result.summary = summary;
    return result;
}

const std::vector<std::string>& figure_ids() {
    static const std::vector<std::string> ids = {"fig1", "fig2", "fig3", "fig4", "fig2-logistic", "fig3-logistic"};
    return ids;
}

json reproduce_figure(const std::string& id, const std::filesystem::path& dir, unsigned workers) {
    json m;
    if (id == "fig1")
        m = reproduce_fig1(dir, workers);
    else if (id == "fig2")
        m = reproduce_fig2(id, dir, workers, false);
    else if (id == "fig2-logistic")
        m = reproduce_fig2(id, dir, workers, true);
    else if (id == "fig3")
        m = reproduce_fig3(id, dir, workers, false);
    else if (id == "fig3-logistic")
        m = reproduce_fig3(id, dir, workers, true);
    else if (id == "fig4")
        m = reproduce_fig4(dir, workers);
    else {
        std::string list;
        for (const auto& f : figure_ids()) list += (list.empty() ? "" : ", ") + f;
        throw ConfigError("unknown figure id '" + id + "' (expected one of: " + list + ")");
    }
    dump_manifest(dir, m);
    return m;
}

}  // namespace nosetori
