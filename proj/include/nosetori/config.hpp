#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nosetori/homogeneous.hpp"
#include "nosetori/integrators.hpp"
#include "nosetori/potential.hpp"
#include "nosetori/thermostat.hpp"

namespace nosetori {

struct PotentialConfig {
    std::string kind = "quartic";  ///< quartic | lennard_jones | spherical_pendulum | custom
    std::map<int, double> coefficients;         // custom only
    std::optional<Interval> domain;             // custom (required) or lennard_jones
    std::string metric = "plane";               ///< plane | sphere | custom
    std::map<int, double> metric_coefficients;  // custom metric only

    friend bool operator==(const PotentialConfig&, const PotentialConfig&) = default;
};

struct ThermostatConfig {
    std::string kind = "nose";  ///< nose | winkler | tanh_logistic | variable_mass | generalized
    double parameter = 1.0;     ///< Winkler exponent e or tanh saturation d
    std::map<int, std::map<int, double>> omegas;  // generalized: k -> Laurent coefficients of Omega_k(s)

    friend bool operator==(const ThermostatConfig&, const ThermostatConfig&) = default;
};

struct SystemConfig {
    std::string kind = "rotational";  ///< rotational | homogeneous
    PotentialConfig potential;
    HomogeneousSpec homogeneous;
    ThermostatConfig thermostat;
    double T = 0.0;
    double a = 0.0;
    double mu = 0.0;  // rotational only

    friend bool operator==(const SystemConfig&, const SystemConfig&) = default;
};

struct IntegratorConfig {
    Scheme scheme = Scheme::CRFR4;
    double h = 0.0;
    double B = 0.0;  ///< time span; n_steps = B / h
    std::size_t sample_stride = 1;

    std::size_t n_steps() const;
    friend bool operator==(const IntegratorConfig&, const IntegratorConfig&) = default;
};

struct StartConfig {
    /// equilibrium | perturbed | explicit | homogeneous  (x = 0, S = 0, s = 1, H = T / lambda)
    std::string kind = "equilibrium";
    double delta = 0.0;
    std::array<double, 4> direction = {1.0, 1.0, 0.0, 0.0};
    std::array<double, 6> state = {};

    friend bool operator==(const StartConfig&, const StartConfig&) = default;
};

struct AnalysisConfig {
    std::string kind;  ///< drift | spectrum | ratio | birkhoff | sweep
    std::string series = "s";            // spectrum, birkhoff
    bool demean = true;                  // spectrum
    std::string thermostat_series = "s"; // ratio
    std::string internal_series = "r";   // ratio
    std::string variable = "T";          ///< sweep: T | mu | a
    std::vector<double> values;          // sweep

    friend bool operator==(const AnalysisConfig&, const AnalysisConfig&) = default;
};

struct OutputConfig {
    std::string directory = "out";
    std::vector<std::string> formats = {"csv"};  ///< csv | binary

    friend bool operator==(const OutputConfig&, const OutputConfig&) = default;
};

struct ExperimentConfig {
    SystemConfig system;
    IntegratorConfig integrator;
    StartConfig start;
    std::vector<AnalysisConfig> analyses;
    OutputConfig output;

    friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

nlohmann::json to_json(const ExperimentConfig& cfg);

/// Strict parse: unknown enumerants and missing physical parameters
/// (T, a, mu, h, B) are ConfigErrors.  `require_integrator` relaxes h and B
/// for commands that never integrate.
ExperimentConfig config_from_json(const nlohmann::json& j, bool require_integrator = true);
ExperimentConfig load_config(const std::string& path, bool require_integrator = true);

Potential<double> build_potential(const PotentialConfig& cfg);
Thermostat<double> build_thermostat(const SystemConfig& cfg);
Scheme parse_scheme(const std::string& name);

/// 64-bit FNV-1a of the canonical JSON dump, as 16 hex digits.
std::string config_hash(const nlohmann::json& j);

}  // namespace nosetori
