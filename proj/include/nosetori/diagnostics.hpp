#pragma once

#include <cstddef>

#include <Eigen/Core>

#include "nosetori/homogeneous.hpp"
#include "nosetori/integrators.hpp"

namespace nosetori {

/// Suprema of |H(t) - H(0)| and |p_theta(t) - p_theta(0)| plus the series.
struct DriftReport {
    double max_abs_energy_drift = 0.0;
    double max_abs_ptheta_drift = 0.0;
    Eigen::VectorXd times;
    Eigen::VectorXd energy_drift;
    Eigen::VectorXd ptheta_drift;
};

DriftReport drift_from_series(const Eigen::VectorXd& times, const Eigen::VectorXd& energy,
                              const Eigen::VectorXd& ptheta);

/// Recomputes H and p_theta at every sample of the trajectory.
template <typename System>
DriftReport drift_report(const System& sys, const Trajectory<double>& traj) {
    const Eigen::Index n = traj.size();
    Eigen::VectorXd energy(n), ptheta(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto x = traj.state(i);
        energy(i) = sys.energy(x);
        ptheta(i) = x(idx::p_theta);
    }
    return drift_from_series(traj.times, energy, ptheta);
}

/// Forward-window time average (1/B) int_0^B f dt by the trapezoid rule on
/// the uniform sample grid.  A single sample averages to itself.
double birkhoff_average(const Eigen::VectorXd& series, double spacing);

double birkhoff_average(const Trajectory<double>& traj, const std::string& observable);

struct TemperatureIdentity {
    double time_average = 0.0;
    double kappa = 0.0;        ///< lambda G(I0) = <I, dG(I)>
    double difference = 0.0;   ///< time_average - kappa
    double period = 0.0;       ///< 2 pi / (dG/dI) at I0
    double envelope = 0.0;     ///< sup_t |int_0^t (T_inst - kappa)| over the first period
    double window = 0.0;       ///< B
};

/// Integrates the unthermostated (s = 1, S inert) homogeneous oscillator on
/// the torus of action I0 for n_steps of size h and compares the average
/// instantaneous temperature with lambda G(I0).
TemperatureIdentity mean_temperature_identity_check(const HomogeneousSpec& spec, double action, double h,
                                                    std::size_t n_steps, Scheme scheme = Scheme::CRFR4);

}  // namespace nosetori
