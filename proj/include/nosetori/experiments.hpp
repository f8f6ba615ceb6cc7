#pragma once

#include <cstddef>
#include <exception>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nosetori/config.hpp"
#include "nosetori/diagnostics.hpp"
#include "nosetori/equilibria.hpp"
#include "nosetori/linear_analysis.hpp"
#include "nosetori/spectral.hpp"
#include "nosetori/system.hpp"

namespace nosetori {

/// NOSETORI_WORKERS if set to a positive integer, else the hardware
/// concurrency (at least 1).
unsigned worker_count();

/// Runs body(i) for i in [0, n) on up to `workers` threads.  Each index is
/// claimed by exactly one thread; the first exception is rethrown after all
/// workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body, unsigned workers = worker_count());

using ThermostatFactory = std::function<Thermostat<double>(double a, double T)>;

/// x = 0, S = 0, s = 1 and p_x chosen so that h(x, p_x) = T / lambda.
PhaseState<double> homogeneous_start(const HomogeneousSpec& spec, double T);

/// Thermostat/internal frequency ratio of one weighted-homogeneous oscillator.
struct HomogeneousRatioPoint {
    int xi = 0;
    int eta = 0;
    double lambda = 0.0;
    double omega_int = 0.0;
    double paper_ratio = 0.0;  ///< sqrt(a) sqrt(lambda T) / (s0 omega_int)
    double nose_ratio = 0.0;   ///< Nose's estimate over omega_int
    RatioEstimate measured;
};

HomogeneousRatioPoint homogeneous_ratio_point(int xi, int eta, double a, double T, double h, double B,
                                              const ThermostatFactory& make_thermostat);

/// Measured vs. linearized frequency ratio near a relative equilibrium.
struct RotationalRatioPoint {
    double a = 0.0;
    double delta = 0.0;
    double B = 0.0;
    LinearModel<double> theory;
    RatioEstimate measured;
};

RotationalRatioPoint rotational_ratio_point(const Potential<double>& pot, const Thermostat<double>& th, double mu,
                                            double delta, double h, double B);

/// N = B / h samples (n_steps = N - 1), so that bins sit at 2 pi k / B.
std::size_t spectral_steps(double h, double B);

struct RunResult {
    Trajectory<double> trajectory;
    nlohmann::json summary;
    std::vector<std::string> files;
};

/// Integrates per config, runs the listed analyses, writes artifacts and a
/// manifest into cfg.output.directory.
RunResult run_experiment(const ExperimentConfig& cfg);

/// Initial state per cfg.start.
PhaseState<double> start_state(const ExperimentConfig& cfg);

const std::vector<std::string>& figure_ids();

/// Writes theory curves, measured points and a manifest for one figure.
nlohmann::json reproduce_figure(const std::string& figure_id, const std::filesystem::path& directory,
                                unsigned workers = worker_count());

}  // namespace nosetori
