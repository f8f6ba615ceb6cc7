#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "nosetori/potential.hpp"
#include "nosetori/system.hpp"
#include "nosetori/thermostat.hpp"

namespace testing {

using namespace nosetori;

// All randomized checks draw from this fixed seed.
inline constexpr std::uint64_t kSeed = 20240611;

inline std::mt19937_64& rng() {
    static std::mt19937_64 gen(kSeed);
    return gen;
}

inline double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng()); }

struct NamedPotential {
    const char* name;
    Potential<double> pot;
    double r_lo, r_hi;  // sampling box inside J
};

inline std::vector<NamedPotential> shipped_potentials() {
    return {{"quartic", Potential<double>::quartic(), 0.2, 2.0},
            {"lennard_jones", Potential<double>::lennard_jones(), 1.13, 1.25},
            {"spherical_pendulum", Potential<double>::spherical_pendulum(), 0.1, 0.9}};
}

struct NamedThermostat {
    const char* name;
    Thermostat<double> th;
};

inline std::vector<NamedThermostat> shipped_thermostats(double a = 0.3, double T = 0.7) {
    return {{"nose", Thermostat<double>::nose(a, T)},
            {"winkler_e2", Thermostat<double>::winkler(2.0, a, T)},
            {"tanh_logistic", Thermostat<double>::tanh_logistic(0.8, a, T)},
            {"variable_mass", Thermostat<double>::variable_mass(a, T)}};
}

inline PhaseState<double> random_state(const NamedPotential& p) {
    return make_state<double>(uniform(p.r_lo, p.r_hi), uniform(-1, 1), uniform(-3, 3), uniform(-1.5, 1.5),
                              uniform(0.5, 2.0), uniform(-1, 1));
}

/// J grad H by centered differences.
template <typename EnergyFn>
PhaseTangent<double> fd_hamiltonian_field(EnergyFn&& H, const PhaseState<double>& x, double eps = 1e-5) {
    PhaseTangent<double> grad;
    for (int i = 0; i < 6; ++i) {
        PhaseState<double> xp = x, xm = x;
        xp(i) += eps;
        xm(i) -= eps;
        grad(i) = (H(xp) - H(xm)) / (2 * eps);
    }
    PhaseTangent<double> f;
    f(idx::r) = grad(idx::p_r);
    f(idx::p_r) = -grad(idx::r);
    f(idx::theta) = grad(idx::p_theta);
    f(idx::p_theta) = -grad(idx::theta);
    f(idx::s) = grad(idx::S);
    f(idx::S) = -grad(idx::s);
    return f;
}

/// 6x6 Jacobian of a map by centered differences.
template <typename Map>
Eigen::Matrix<double, 6, 6> fd_jacobian(Map&& m, const PhaseState<double>& x, double eps = 1e-6) {
    Eigen::Matrix<double, 6, 6> J;
    for (int i = 0; i < 6; ++i) {
        PhaseState<double> xp = x, xm = x;
        xp(i) += eps;
        xm(i) -= eps;
        J.col(i) = (m(xp) - m(xm)) / (2 * eps);
    }
    return J;
}

}  // namespace testing
