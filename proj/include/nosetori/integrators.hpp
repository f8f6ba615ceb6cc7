#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "nosetori/errors.hpp"
#include "nosetori/phase_state.hpp"

namespace nosetori {

enum class Scheme { CRFR4, RK4 };

inline std::string to_string(Scheme scheme) { return scheme == Scheme::CRFR4 ? "crfr4" : "rk4"; }

struct IntegratorSpec {
    Scheme scheme = Scheme::CRFR4;
    double step = 1.0 / 32.0;
    std::size_t n_steps = 1;
};

/// Candy-Rozmus / Forest-Ruth fourth-order composition coefficients.
/// Drift weights c1..c4 and kick weights d1..d3 each sum to one.
struct Crfr4Coefficients {
    static inline const double cbrt2 = std::cbrt(2.0);
    static inline const double c1 = 1.0 / (2.0 * (2.0 - cbrt2));
    static inline const double c2 = (1.0 - cbrt2) * c1;
    static inline const double c3 = c2;
    static inline const double c4 = c1;
    static inline const double d1 = 2.0 * c1;
    static inline const double d2 = -2.0 * cbrt2 * c1;
    static inline const double d3 = d1;
};

struct Unsplittable {
    std::string reason;
};

/// Exact flows of the two halves H = H1 + H2; flow_a drifts under the
/// kinetic + T ln s part, flow_b kicks under the potential + controller part.
template <typename System>
class SplitFlows {
public:
    using State = typename System::State;
    using Scalar = typename State::Scalar;

    explicit SplitFlows(const System& sys) : sys_(&sys) {}

    State flow_a(const State& x, Scalar h) const { return sys_->drift(x, h); }
    State flow_b(const State& x, Scalar h) const { return sys_->kick(x, h); }

private:
    const System* sys_;
};

/// Relative mismatch between (flow_a + flow_b) generators, by central
/// differences, and the canonical vector field at x.
template <typename System>
double split_consistency_residual(const System& sys, const typename System::State& x, double h = 1e-6) {
    using State = typename System::State;
    using Scalar = typename State::Scalar;
    const Scalar hh(h);
    const State ga = (sys.drift(x, hh) - sys.drift(x, -hh)) / (Scalar(2) * hh);
    const State gb = (sys.kick(x, hh) - sys.kick(x, -hh)) / (Scalar(2) * hh);
    const State f = sys.vector_field(x);
    // theta has no conjugate coupling in kick; compare all six components
    return static_cast<double>((ga + gb - f).norm() / std::max<Scalar>(Scalar(1), f.norm()));
}

/// Splitting for CRFR4, or Unsplittable when either half lacks a closed-form
/// flow.  The sign convention of the (s, S) pair is confirmed against the
/// canonical equations at a sample state before the flows are handed out.
template <typename System>
std::variant<SplitFlows<System>, Unsplittable> split_flows(const System& sys) {
    if (auto reason = sys.unsplittable_reason()) return Unsplittable{*reason};
    const double residual = split_consistency_residual(sys, sys.sample_state());
    if (!(residual < 1e-6))
        throw std::logic_error("split flows disagree with the canonical vector field (residual " +
                               std::to_string(residual) + ")");
    return SplitFlows<System>(sys);
}

template <typename System>
typename System::State crfr4_step(const SplitFlows<System>& flows, const typename System::State& x,
                                  typename System::State::Scalar h) {
    using K = Crfr4Coefficients;
    using Scalar = typename System::State::Scalar;
    auto y = flows.flow_a(x, Scalar(K::c1) * h);
    y = flows.flow_b(y, Scalar(K::d1) * h);
    y = flows.flow_a(y, Scalar(K::c2) * h);
    y = flows.flow_b(y, Scalar(K::d2) * h);
    y = flows.flow_a(y, Scalar(K::c3) * h);
    y = flows.flow_b(y, Scalar(K::d3) * h);
    return flows.flow_a(y, Scalar(K::c4) * h);
}

template <typename System>
typename System::State rk4_step(const System& sys, const typename System::State& x,
                                typename System::State::Scalar h) {
    using Scalar = typename System::State::Scalar;
    const auto k1 = sys.vector_field(x);
    const auto k2 = sys.vector_field(x + (h / Scalar(2)) * k1);
    const auto k3 = sys.vector_field(x + (h / Scalar(2)) * k2);
    const auto k4 = sys.vector_field(x + h * k3);
    return x + (h / Scalar(6)) * (k1 + Scalar(2) * k2 + Scalar(2) * k3 + k4);
}

/// One step of the requested scheme.  CRFR4 on an unsplittable system is a
/// configuration error.
template <typename System>
typename System::State step(const System& sys, Scheme scheme, const typename System::State& x,
                            typename System::State::Scalar h) {
    if (scheme == Scheme::RK4) return rk4_step(sys, x, h);
    auto split = split_flows(sys);
    if (auto* bad = std::get_if<Unsplittable>(&split))
        throw ConfigError("CRFR4 requested but the system is unsplittable: " + bad->reason);
    return crfr4_step(std::get<SplitFlows<System>>(split), x, h);
}

/// Uniformly sampled trajectory; row i of `states` is the state at times(i).
template <typename Scalar>
struct Trajectory {
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> times;
    Eigen::Matrix<Scalar, Eigen::Dynamic, 6> states;
    std::vector<std::string> observable_names;
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> observables;
    double sample_spacing = 0.0;

    Eigen::Index size() const { return times.size(); }

    PhaseState<Scalar> state(Eigen::Index i) const { return states.row(i).transpose(); }

    /// Column of a named observable; throws if absent.
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> observable(const std::string& name) const {
        for (std::size_t j = 0; j < observable_names.size(); ++j)
            if (observable_names[j] == name) return observables.col(static_cast<Eigen::Index>(j));
        throw std::out_of_range("trajectory has no observable '" + name + "'");
    }
};

/// Named scalar functions recorded at every sample.
template <typename Scalar>
struct Observer {
    std::vector<std::string> names;
    std::function<Eigen::Matrix<Scalar, Eigen::Dynamic, 1>(const PhaseState<Scalar>&)> evaluate;
};

/// Energy, angular momentum and instantaneous temperature.
template <typename System>
Observer<typename System::State::Scalar> standard_observer(const System& sys) {
    using Scalar = typename System::State::Scalar;
    return {{"H", "p_theta", "T_inst"}, [&sys](const PhaseState<Scalar>& x) {
                Eigen::Matrix<Scalar, Eigen::Dynamic, 1> v(3);
                v << sys.energy(x), x(idx::p_theta), sys.temperature(x);
                return v;
            }};
}

/// Advances n_steps fixed steps from x0, recording every sample_stride-th
/// state (including the initial one).  Domain errors carry the step index.
template <typename System>
Trajectory<typename System::State::Scalar> integrate(const System& sys, const IntegratorSpec& spec,
                                                     const typename System::State& x0, std::size_t sample_stride = 1,
                                                     const Observer<typename System::State::Scalar>* observer = nullptr) {
    using Scalar = typename System::State::Scalar;
    if (spec.n_steps < 1) throw ConfigError("n_steps must be at least 1");
    if (sample_stride < 1) throw ConfigError("sample_stride must be at least 1");
    if (!(spec.step > 0.0) || !std::isfinite(spec.step)) throw ConfigError("step size must be positive");

    std::variant<SplitFlows<System>, Unsplittable> split = Unsplittable{"unused"};
    if (spec.scheme == Scheme::CRFR4) {
        split = split_flows(sys);
        if (auto* bad = std::get_if<Unsplittable>(&split))
            throw ConfigError("CRFR4 requested but the system is unsplittable: " + bad->reason);
    }

    const auto obs = observer ? *observer : standard_observer(sys);
    const std::size_t n_samples = spec.n_steps / sample_stride + 1;
    Trajectory<Scalar> traj;
    traj.times.resize(static_cast<Eigen::Index>(n_samples));
    traj.states.resize(static_cast<Eigen::Index>(n_samples), 6);
    traj.observable_names = obs.names;
    traj.observables.resize(static_cast<Eigen::Index>(n_samples), static_cast<Eigen::Index>(obs.names.size()));
    traj.sample_spacing = spec.step * static_cast<double>(sample_stride);

    const Scalar h(spec.step);
    auto record = [&](Eigen::Index row, std::size_t step_index, const PhaseState<Scalar>& x) {
        traj.times(row) = Scalar(static_cast<double>(step_index)) * h;
        traj.states.row(row) = x.transpose();
        if (!obs.names.empty()) traj.observables.row(row) = obs.evaluate(x).transpose();
    };

    PhaseState<Scalar> x = x0;
    try {
        sys.check_domain(x);
        record(0, 0, x);
    } catch (const DomainError& e) {
        throw IntegrationError(e.what(), 0);
    }
    Eigen::Index row = 1;
    for (std::size_t n = 1; n <= spec.n_steps; ++n) {
        try {
            x = spec.scheme == Scheme::CRFR4 ? crfr4_step(std::get<SplitFlows<System>>(split), x, h)
                                             : rk4_step(sys, x, h);
            if (!x.allFinite()) throw DomainError("state became non-finite");
            if (n % sample_stride == 0) record(row++, n, x);
        } catch (const IntegrationError&) {
            throw;
        } catch (const DomainError& e) {
            throw IntegrationError(e.what(), n);
        }
    }
    return traj;
}

}  // namespace nosetori
