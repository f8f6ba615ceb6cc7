#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "nosetori/errors.hpp"
#include "nosetori/homogeneous.hpp"
#include "nosetori/phase_state.hpp"
#include "nosetori/potential.hpp"
#include "nosetori/system.hpp"

namespace nosetori {

/// Relative equilibrium of the rotationally invariant system:
///   T = r* v'(r*),  tau^2 = r*^3 v'(r*),  s0 = |mu| / tau.
template <typename Scalar>
struct EquilibriumPoint {
    Scalar r_star;
    Scalar tau;
    Scalar s0;
    Scalar mu;
    Scalar T;
};

namespace detail {

/// Root of a strictly increasing g on [lo, hi] with g(lo) < 0 < g(hi):
/// bisection to a narrow bracket, then safeguarded Newton.
template <typename Scalar, typename G, typename DG>
Scalar bracketed_root(G&& g, DG&& dg, Scalar lo, Scalar hi, double tol) {
    using std::abs;
    for (int i = 0; i < 200 && (hi - lo) > Scalar(1e-6) * (abs(lo) + abs(hi)); ++i) {
        const Scalar mid = (lo + hi) / Scalar(2);
        if (g(mid) < Scalar(0))
            lo = mid;
        else
            hi = mid;
    }
    Scalar x = (lo + hi) / Scalar(2);
    for (int i = 0; i < 50; ++i) {
        const Scalar gx = g(x);
        if (abs(gx) < Scalar(tol)) break;
        if (gx < Scalar(0))
            lo = x;
        else
            hi = x;
        Scalar next = x - gx / dg(x);
        if (!(next > lo && next < hi)) next = (lo + hi) / Scalar(2);
        if (next == x) break;
        x = next;
    }
    return x;
}

/// Log-grid scan of the interval for the first sign change of g.
template <typename Scalar, typename G>
std::optional<std::pair<Scalar, Scalar>> scan_bracket(G&& g, const Interval& j, int samples = 2000) {
    auto [lo, hi] = sampling_window(j);
    const double llo = std::log(lo);
    const double lhi = std::log(hi);
    Scalar prev_r = Scalar(lo);
    Scalar prev_g = g(prev_r);
    if (prev_g == Scalar(0)) return std::make_pair(prev_r, prev_r);
    for (int i = 1; i < samples; ++i) {
        const Scalar r = Scalar(std::exp(llo + (lhi - llo) * i / (samples - 1)));
        const Scalar gr = g(r);
        if ((prev_g < Scalar(0)) != (gr < Scalar(0))) return std::make_pair(prev_r, r);
        prev_r = r;
        prev_g = gr;
    }
    return std::nullopt;
}

inline std::string format_range(double lo, double hi) {
    std::ostringstream out;
    out << "(" << lo << ", " << hi << ")";
    return out.str();
}

}  // namespace detail

/// Unique r* in J with r* v'(r*) = T.  The bracket is auto-detected on a log
/// grid over J unless one is supplied.
template <typename Scalar>
EquilibriumPoint<Scalar> solve_equilibrium(const Potential<Scalar>& pot, Scalar T, Scalar mu,
                                           std::optional<Interval> bracket = std::nullopt) {
    using std::abs;
    using std::sqrt;
    if (mu == Scalar(0)) throw ConfigError("angular momentum mu must be non-zero");
    const auto [t_min, t_max] = pot.temperature_range();
    const double t = static_cast<double>(T);
    if (!(t > t_min && t < t_max))
        throw NoSolution("temperature outside " + detail::format_range(t_min, t_max), t_min, t_max);

    auto g = [&](Scalar r) { return pot.temperature_at(r) - T; };
    auto dg = [&](Scalar r) { return pot.d1(r) + r * pot.d2(r); };

    std::pair<Scalar, Scalar> br;
    if (bracket) {
        if (!(bracket->lo >= pot.domain().lo && bracket->hi <= pot.domain().hi))
            throw ConfigError("bracket must lie inside the potential domain");
        const auto [lo, hi] = sampling_window(*bracket);
        br = {Scalar(lo), Scalar(hi)};
        if (!(g(br.first) < Scalar(0) && g(br.second) > Scalar(0)))
            throw NoSolution("bracket does not enclose the root", t_min, t_max);
    } else {
        auto found = detail::scan_bracket<Scalar>(g, pot.domain());
        if (!found) throw NoSolution("temperature outside " + detail::format_range(t_min, t_max), t_min, t_max);
        br = *found;
    }
    const Scalar r = detail::bracketed_root<Scalar>(g, dg, br.first, br.second, 1e-15);
    const Scalar tau = sqrt(pot.tau_squared_at(r));
    return {r, tau, abs(mu) / tau, mu, T};
}

/// Radius on the equilibrium branch with r^3 v'(r) = tau^2.
template <typename Scalar>
Scalar radius_for_tau(const Potential<Scalar>& pot, Scalar tau) {
    auto g = [&](Scalar r) { return pot.tau_squared_at(r) - tau * tau; };
    auto dg = [&](Scalar r) { return r * r * (Scalar(3) * pot.d1(r) + r * pot.d2(r)); };
    auto found = detail::scan_bracket<Scalar>(g, pot.domain());
    if (!found) throw DomainError("tau outside the range of the equilibrium branch");
    return detail::bracketed_root<Scalar>(g, dg, found->first, found->second, 1e-15);
}

/// (r*, 0, 0, mu, s0, 0)
template <typename Scalar>
PhaseState<Scalar> lift_to_phase(const EquilibriumPoint<Scalar>& eq) {
    return make_state<Scalar>(eq.r_star, Scalar(0), Scalar(0), eq.mu, eq.s0, Scalar(0));
}

/// Reduced coordinates X = (rho, u, p_rho, U) about the relative equilibrium,
/// matching the layout of the 4x4 linearization.
template <typename Scalar>
using ReducedVector = Eigen::Matrix<Scalar, 4, 1>;

/// Maps reduced coordinates to a phase state through the symplectic change
/// of variables r = r*(1 + rho), s = s0 / (1 - u), S = (1-u)^2 U / s0 - ...,
/// where r* is re-evaluated at |p_theta| / s along the equilibrium branch.
template <typename Scalar>
PhaseState<Scalar> from_reduced(const Potential<Scalar>& pot, const EquilibriumPoint<Scalar>& eq,
                                 const ReducedVector<Scalar>& X) {
    using std::abs;
    const Scalar rho = X(0), u = X(1), p_rho = X(2), U = X(3);
    const Scalar tau_u = eq.tau * (Scalar(1) - u);
    const Scalar rs = (u == Scalar(0)) ? eq.r_star : radius_for_tau(pot, tau_u);
    const Scalar W = rs * pot.d2(rs) + Scalar(3) * pot.d1(rs);
    const Scalar drs_dtau = Scalar(2) * tau_u / (rs * rs * W);
    const Scalar one_u2 = (Scalar(1) - u) * (Scalar(1) - u);
    PhaseState<Scalar> x;
    x(idx::r) = rs * (Scalar(1) + rho);
    x(idx::p_r) = p_rho / rs;
    x(idx::theta) = Scalar(0);
    x(idx::p_theta) = eq.mu;
    x(idx::s) = eq.s0 / (Scalar(1) - u);
    x(idx::S) = one_u2 * U / eq.s0 - p_rho * drs_dtau * (Scalar(1) + rho) * one_u2 / (rs * eq.s0 * eq.s0);
    return x;
}

/// Direction of the default displacement: equal weight in rho and u.
template <typename Scalar>
ReducedVector<Scalar> default_displacement() {
    ReducedVector<Scalar> d(Scalar(1), Scalar(1), Scalar(0), Scalar(0));
    return d.normalized();
}

/// Lift displaced by delta along a unit direction in reduced coordinates.
template <typename Scalar>
PhaseState<Scalar> perturbed_start(const Potential<Scalar>& pot, const EquilibriumPoint<Scalar>& eq, Scalar delta,
                                   ReducedVector<Scalar> direction = default_displacement<Scalar>()) {
    if (!(delta >= Scalar(0))) throw ConfigError("delta must be non-negative");
    if (delta == Scalar(0)) return lift_to_phase(eq);
    if (direction.norm() == Scalar(0)) throw ConfigError("displacement direction must be non-zero");
    return from_reduced(pot, eq, ReducedVector<Scalar>(delta * direction.normalized()));
}

struct EquilibriumResiduals {
    double temperature;  ///< |T - r* v'(r*)|
    double tau;          ///< |tau^2 - r*^3 v'(r*)|
    double stationarity; ///< max non-theta component of the vector field at the lift
};

template <typename Scalar>
EquilibriumResiduals equilibrium_residuals(const Potential<Scalar>& pot, const Thermostat<Scalar>& th,
                                           const EquilibriumPoint<Scalar>& eq) {
    using std::abs;
    const auto f = equations_of_motion(pot, th, lift_to_phase(eq));
    double stat = 0.0;
    for (Eigen::Index i : {idx::r, idx::p_r, idx::p_theta, idx::s, idx::S})
        stat = std::max(stat, std::abs(static_cast<double>(f(i))));
    return {static_cast<double>(abs(eq.T - pot.temperature_at(eq.r_star))),
            static_cast<double>(abs(eq.tau * eq.tau - pot.tau_squared_at(eq.r_star))), stat};
}

/// s0(I) = (lambda G(I) / T)^{1/lambda},  G(I) = sum_i I_i^lambda.
inline double homogeneous_s0(const HomogeneousSpec& spec, const Eigen::VectorXd& actions, double T) {
    if (actions.size() != spec.n) throw ConfigError("action vector length must equal n");
    if ((actions.array() < 0.0).any()) throw DomainError("actions must be non-negative");
    const double lambda = spec.lambda();
    const double G = actions.array().pow(lambda).sum();
    if (!(G > 0.0)) throw DomainError("G(I) must be positive");
    return std::pow(lambda * G / T, 1.0 / lambda);
}

}  // namespace nosetori
