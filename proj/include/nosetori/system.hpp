#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <utility>

#include "nosetori/errors.hpp"
#include "nosetori/homogeneous.hpp"
#include "nosetori/phase_state.hpp"
#include "nosetori/potential.hpp"
#include "nosetori/thermostat.hpp"

namespace nosetori {

template <typename Scalar>
void check_rotational_domain(const Potential<Scalar>& pot, const PhaseState<Scalar>& x) {
    const double r = static_cast<double>(x(idx::r));
    const double s = static_cast<double>(x(idx::s));
    if (!std::isfinite(r) || !(r > 0.0) || !pot.domain().closure_contains(r))
        throw DomainError("r = " + std::to_string(r) + " outside the potential domain");
    if (pot.metric_kind() == MetricKind::Sphere && !(r < 1.0))
        throw DomainError("r = " + std::to_string(r) + " outside the sphere chart");
    if (!std::isfinite(s) || !(s > 0.0)) throw DomainError("thermostat coordinate s must be positive");
}

/// ((c p_r)^2 + (p_theta / r)^2) / (2 s^2)
template <typename Scalar>
Scalar kinetic_energy(const Potential<Scalar>& pot, const PhaseState<Scalar>& x) {
    const Scalar r = x(idx::r);
    const Scalar cp = pot.metric(r) * x(idx::p_r);
    const Scalar l = x(idx::p_theta) / r;
    const Scalar s = x(idx::s);
    return (cp * cp + l * l) / (Scalar(2) * s * s);
}

/// Extended Hamiltonian  K/s^2 + v(r) + F(s, aS)/a + T ln s.
template <typename Scalar>
Scalar hamiltonian_energy(const Potential<Scalar>& pot, const Thermostat<Scalar>& th, const PhaseState<Scalar>& x) {
    using std::log;
    check_rotational_domain(pot, x);
    const Scalar s = x(idx::s);
    return kinetic_energy(pot, x) + pot.value(x(idx::r)) + th.energy(s, x(idx::S)) + th.temperature() * log(s);
}

/// Canonical Hamilton equations for hamiltonian_energy.
template <typename Scalar>
PhaseTangent<Scalar> equations_of_motion(const Potential<Scalar>& pot, const Thermostat<Scalar>& th,
                                         const PhaseState<Scalar>& x) {
    check_rotational_domain(pot, x);
    const Scalar r = x(idx::r);
    const Scalar pr = x(idx::p_r);
    const Scalar pt = x(idx::p_theta);
    const Scalar s = x(idx::s);
    const Scalar S = x(idx::S);
    const Scalar s2 = s * s;
    const Scalar c = pot.metric(r);
    const Scalar dc = pot.metric_d1(r);
    const Scalar kin = kinetic_energy(pot, x);

    PhaseTangent<Scalar> dx;
    dx(idx::r) = c * c * pr / s2;
    dx(idx::p_r) = -(c * dc * pr * pr / s2 - pt * pt / (r * r * r * s2) + pot.d1(r));
    dx(idx::theta) = pt / (r * r * s2);
    dx(idx::p_theta) = Scalar(0);
    dx(idx::s) = th.d_momentum(s, S);
    dx(idx::S) = (Scalar(2) * kin - th.temperature()) / s - th.d_position(s, S);
    return dx;
}

/// <p, dH/dp> of the physical Hamiltonian at the rescaled momenta p/s.
template <typename Scalar>
Scalar instantaneous_temperature(const Potential<Scalar>& pot, const PhaseState<Scalar>& x) {
    check_rotational_domain(pot, x);
    return Scalar(2) * kinetic_energy(pot, x);
}

/// Rotationally invariant mechanical system on a surface of revolution,
/// coupled to one thermostat.
template <typename Scalar>
class RotationalSystem {
public:
    using State = PhaseState<Scalar>;

    RotationalSystem(Potential<Scalar> pot, Thermostat<Scalar> th) : pot_(std::move(pot)), th_(std::move(th)) {}

    const Potential<Scalar>& potential() const { return pot_; }
    const Thermostat<Scalar>& thermostat() const { return th_; }

    Scalar energy(const State& x) const { return hamiltonian_energy(pot_, th_, x); }
    PhaseTangent<Scalar> vector_field(const State& x) const { return equations_of_motion(pot_, th_, x); }
    Scalar temperature(const State& x) const { return instantaneous_temperature(pot_, x); }
    void check_domain(const State& x) const { check_rotational_domain(pot_, x); }

    /// Empty when the kinetic/potential splitting has exact flows, else the reason.
    std::optional<std::string> unsplittable_reason() const {
        if (!th_.elementary()) return "thermostat '" + th_.name() + "' couples s and S in F(s, S)";
        if (pot_.metric_kind() == MetricKind::Custom) return std::string("custom metric has no closed-form drift");
        return std::nullopt;
    }

    /// A generic in-domain state used for self-checks.
    State sample_state() const {
        const Scalar r = Scalar(representative_point(pot_.domain()));
        return make_state<Scalar>(r, Scalar(0.1), Scalar(0.3), Scalar(0.4), Scalar(1.1), Scalar(0.2));
    }

    /// Exact time-h flow of H1 = K(r, p_r, p_theta)/s^2 + T ln s.  s and p_theta
    /// are constants of this flow; (r, theta, p_r) follow the free geodesic and
    /// S drifts at the constant rate (2K - T)/s.
    State drift(const State& x, Scalar h) const {
        using std::atan2;
        using std::cos;
        using std::hypot;
        using std::sin;
        using std::sqrt;
        check_domain(x);
        State y = x;
        const Scalar r = x(idx::r);
        const Scalar pr = x(idx::p_r);
        const Scalar pt = x(idx::p_theta);
        const Scalar s = x(idx::s);
        const Scalar s2 = s * s;
        const Scalar kin = kinetic_energy(pot_, x);

        if (pot_.metric_kind() == MetricKind::Plane) {
            // straight line in the frame where theta = 0
            const Scalar tau = h / s2;
            const Scalar X = r + pr * tau;
            const Scalar Y = (pt / r) * tau;
            const Scalar r_new = hypot(X, Y);
            y(idx::r) = r_new;
            y(idx::theta) = x(idx::theta) + atan2(Y, X);
            y(idx::p_r) = (pr * X + (pt / r) * Y) / r_new;
        } else {
            // great circle on the unit sphere, n = (sin phi, 0, -cos phi) at theta = 0
            const Scalar cphi = sqrt(Scalar(1) - r * r);
            const Scalar phidot = pot_.metric(r) * pr / s2;
            const Scalar thetadot = pt / (r * r * s2);
            Eigen::Matrix<Scalar, 3, 1> n(r, Scalar(0), -cphi);
            Eigen::Matrix<Scalar, 3, 1> u(phidot * cphi, r * thetadot, phidot * r);
            const Scalar w = u.norm();
            Eigen::Matrix<Scalar, 3, 1> n1, u1;
            if (w * std::abs(static_cast<double>(h)) < Scalar(1e-300)) {
                n1 = n;
                u1 = u;
            } else {
                const Scalar cw = cos(w * h);
                const Scalar sw = sin(w * h);
                n1 = n * cw + u * (sw / w);
                u1 = u * cw - n * (w * sw);
            }
            if (!(n1.z() < Scalar(0))) throw DomainError("orbit left the sphere chart (crossed the equator)");
            const Scalar r_new = hypot(n1.x(), n1.y());
            const Scalar th_loc = atan2(n1.y(), n1.x());
            const Scalar c_new = -n1.z();
            const Eigen::Matrix<Scalar, 3, 1> e_phi(c_new * cos(th_loc), c_new * sin(th_loc), r_new);
            const Scalar phidot_new = u1.dot(e_phi);
            y(idx::r) = r_new;
            y(idx::theta) = x(idx::theta) + th_loc;
            y(idx::p_r) = s2 * phidot_new / pot_.metric(r_new);
        }
        y(idx::S) = x(idx::S) + h * (Scalar(2) * kin - th_.temperature()) / s;
        return y;
    }

    /// Exact time-h flow of H2 = v(r) + Phi(S): positions frozen.
    State kick(const State& x, Scalar h) const {
        check_domain(x);
        State y = x;
        y(idx::p_r) = x(idx::p_r) - h * pot_.d1(x(idx::r));
        y(idx::s) = x(idx::s) + h * th_.d_momentum(x(idx::s), x(idx::S));
        if (!(y(idx::s) > Scalar(0))) throw DomainError("thermostat coordinate s became non-positive");
        return y;
    }

private:
    Potential<Scalar> pot_;
    Thermostat<Scalar> th_;
};

/// One-degree-of-freedom weighted-homogeneous oscillator (p^xi + x^eta)/c
/// coupled to a thermostat, using the (r, p_r) slots for (x, p_x).
template <typename Scalar>
class HomogeneousSystem {
public:
    using State = PhaseState<Scalar>;

    HomogeneousSystem(HomogeneousSpec spec, Thermostat<Scalar> th)
        : spec_(spec), th_(std::move(th)), c_(Scalar(spec.normalization())) {
        if (spec_.n != 1) throw ConfigError("homogeneous dynamics is implemented for n = 1");
    }

    const HomogeneousSpec& spec() const { return spec_; }
    const Thermostat<Scalar>& thermostat() const { return th_; }

    void check_domain(const State& x) const {
        if (!x.allFinite()) throw DomainError("non-finite state");
        if (!(x(idx::s) > Scalar(0))) throw DomainError("thermostat coordinate s must be positive");
    }

    /// (p/s)^xi / c + x^eta / c + Phi(s, S) + T ln s
    Scalar energy(const State& x) const {
        using std::log;
        using std::pow;
        check_domain(x);
        const Scalar s = x(idx::s);
        return (pow(x(idx::p_r) / s, spec_.xi) + pow(x(idx::r), spec_.eta)) / c_ + th_.energy(s, x(idx::S)) +
               th_.temperature() * log(s);
    }

    PhaseTangent<Scalar> vector_field(const State& x) const {
        using std::pow;
        check_domain(x);
        const Scalar q = x(idx::r);
        const Scalar p = x(idx::p_r);
        const Scalar s = x(idx::s);
        const Scalar S = x(idx::S);
        PhaseTangent<Scalar> dx = PhaseTangent<Scalar>::Zero();
        dx(idx::r) = Scalar(spec_.xi) * pow(p, spec_.xi - 1) / (c_ * pow(s, spec_.xi));
        dx(idx::p_r) = -Scalar(spec_.eta) * pow(q, spec_.eta - 1) / c_;
        dx(idx::s) = th_.d_momentum(s, S);
        dx(idx::S) = (temperature(x) - th_.temperature()) / s - th_.d_position(s, S);
        return dx;
    }

    /// xi (p/s)^xi / c
    Scalar temperature(const State& x) const {
        using std::pow;
        return Scalar(spec_.xi) * pow(x(idx::p_r) / x(idx::s), spec_.xi) / c_;
    }

    std::optional<std::string> unsplittable_reason() const {
        if (!th_.elementary()) return "thermostat '" + th_.name() + "' couples s and S in F(s, S)";
        return std::nullopt;
    }

    State sample_state() const {
        return make_state<Scalar>(Scalar(0.3), Scalar(0.7), Scalar(0), Scalar(0), Scalar(1.1), Scalar(0.2));
    }

    /// H1 = (p/s)^xi / c + T ln s: x and S move, p and s are frozen.
    State drift(const State& x, Scalar h) const {
        using std::pow;
        check_domain(x);
        State y = x;
        const Scalar s = x(idx::s);
        const Scalar p = x(idx::p_r);
        y(idx::r) = x(idx::r) + h * Scalar(spec_.xi) * pow(p, spec_.xi - 1) / (c_ * pow(s, spec_.xi));
        y(idx::S) = x(idx::S) + h * (temperature(x) - th_.temperature()) / s;
        return y;
    }

    /// H2 = x^eta / c + Phi(S): p and s move.
    State kick(const State& x, Scalar h) const {
        using std::pow;
        check_domain(x);
        State y = x;
        y(idx::p_r) = x(idx::p_r) - h * Scalar(spec_.eta) * pow(x(idx::r), spec_.eta - 1) / c_;
        y(idx::s) = x(idx::s) + h * th_.d_momentum(x(idx::s), x(idx::S));
        if (!(y(idx::s) > Scalar(0))) throw DomainError("thermostat coordinate s became non-positive");
        return y;
    }

private:
    HomogeneousSpec spec_;
    Thermostat<Scalar> th_;
    Scalar c_;
};

}  // namespace nosetori
