#include "nosetori/diagnostics.hpp"

#include <cmath>
#include <numbers>

#include "nosetori/system.hpp"
#include "nosetori/thermostat.hpp"

namespace nosetori {

DriftReport drift_from_series(const Eigen::VectorXd& times, const Eigen::VectorXd& energy,
                              const Eigen::VectorXd& ptheta) {
    if (times.size() != energy.size() || times.size() != ptheta.size())
        throw std::invalid_argument("drift series lengths differ");
    DriftReport report;
    report.times = times;
    if (times.size() == 0) return report;
    report.energy_drift = energy.array() - energy(0);
    report.ptheta_drift = ptheta.array() - ptheta(0);
    report.max_abs_energy_drift = report.energy_drift.cwiseAbs().maxCoeff();
    report.max_abs_ptheta_drift = report.ptheta_drift.cwiseAbs().maxCoeff();
    return report;
}

double birkhoff_average(const Eigen::VectorXd& series, double spacing) {
    const Eigen::Index n = series.size();
    if (n == 0) throw std::invalid_argument("empty series has no time average");
    if (n == 1) return series(0);
    (void)spacing;  // uniform grid: the spacing cancels
    const double interior = series.segment(1, n - 2).sum();
    return (interior + 0.5 * (series(0) + series(n - 1))) / static_cast<double>(n - 1);
}

double birkhoff_average(const Trajectory<double>& traj, const std::string& observable) {
    return birkhoff_average(traj.observable(observable), traj.sample_spacing);
}

TemperatureIdentity mean_temperature_identity_check(const HomogeneousSpec& spec, double action, double h,
                                                    std::size_t n_steps, Scheme scheme) {
    if (spec.n != 1) throw ConfigError("temperature identity check is defined for n = 1");
    if (!(action > 0.0)) throw DomainError("action must be positive");
    const double lambda = spec.lambda();
    const double energy = std::pow(action, lambda);
    const double c = spec.normalization();

    HomogeneousSystem<double> sys(spec, Thermostat<double>::nose(0.0, 1.0));
    const auto x0 = make_state<double>(0.0, std::pow(c * energy, 1.0 / spec.xi), 0.0, 0.0, 1.0, 0.0);
    const auto traj = integrate(sys, IntegratorSpec{scheme, h, n_steps}, x0);

    TemperatureIdentity out;
    out.kappa = lambda * energy;
    out.time_average = birkhoff_average(traj, "T_inst");
    out.difference = out.time_average - out.kappa;
    out.period = 2.0 * std::numbers::pi / (lambda * std::pow(action, lambda - 1.0));
    out.window = h * static_cast<double>(n_steps);

    const Eigen::VectorXd dev = traj.observable("T_inst").array() - out.kappa;
    const auto per_steps = static_cast<Eigen::Index>(std::ceil(out.period / h));
    double running = 0.0;
    for (Eigen::Index i = 1; i <= std::min<Eigen::Index>(per_steps, dev.size() - 1); ++i) {
        running += 0.5 * h * (dev(i - 1) + dev(i));
        out.envelope = std::max(out.envelope, std::abs(running));
    }
    return out;
}

}  // namespace nosetori
