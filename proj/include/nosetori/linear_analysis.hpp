#pragma once

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "nosetori/equilibria.hpp"
#include "nosetori/errors.hpp"
#include "nosetori/homogeneous.hpp"
#include "nosetori/potential.hpp"
#include "nosetori/thermostat.hpp"

namespace nosetori {

/// Coefficients of the quadratic part of the reduced Hamiltonian at the
/// relative equilibrium:  kinetic block [[A, B], [B, E]], potential diag(C, D).
template <typename Scalar>
struct LinearCoefficients {
    Scalar A, B, C, D, E;
};

template <typename Scalar>
struct LinearModel {
    LinearCoefficients<Scalar> coeffs;
    Scalar omega1;  ///< slower normal mode
    Scalar omega2;  ///< faster normal mode
    Scalar eta;     ///< omega1 / omega2
    bool hessian_posdef = false;
    bool degenerate = false;  ///< omega1 == omega2 up to roundoff
};

/// W = r v'' + 3 v';  C = r W;  D = 2 r v' (W - 2 v') / W;
/// A = (c / (r s0))^2 + 4 a Om2 v'^2 / (s0^2 W^2);  B = -2 a Om2 v' / (s0^2 W);
/// E = a Om2 / s0^2.
template <typename Scalar>
LinearCoefficients<Scalar> linear_coefficients(const Potential<Scalar>& pot, const Thermostat<Scalar>& th,
                                               const EquilibriumPoint<Scalar>& eq) {
    const Scalar r = eq.r_star;
    const Scalar s0 = eq.s0;
    const Scalar v1 = pot.d1(r);
    const Scalar W = r * pot.d2(r) + Scalar(3) * v1;
    const Scalar a_om = th.coupling() * th.omega2(s0);
    const Scalar cr = pot.metric(r) / (r * s0);
    LinearCoefficients<Scalar> k;
    k.C = r * W;
    k.D = Scalar(2) * r * v1 * (W - Scalar(2) * v1) / W;
    k.A = cr * cr + Scalar(4) * a_om * v1 * v1 / (s0 * s0 * W * W);
    k.B = Scalar(-2) * a_om * v1 / (s0 * s0 * W);
    k.E = a_om / (s0 * s0);
    return k;
}

/// Linearized vector field on X = (rho, u, p_rho, U).
template <typename Scalar>
Eigen::Matrix<Scalar, 4, 4> reduced_matrix(const LinearCoefficients<Scalar>& k) {
    Eigen::Matrix<Scalar, 4, 4> m = Eigen::Matrix<Scalar, 4, 4>::Zero();
    m(0, 2) = k.A;
    m(0, 3) = k.B;
    m(1, 2) = k.B;
    m(1, 3) = k.E;
    m(2, 0) = -k.C;
    m(3, 1) = -k.D;
    return m;
}

/// Coefficients (b, c) of the characteristic polynomial x^4 + b x^2 + c.
template <typename Scalar>
std::pair<Scalar, Scalar> characteristic_coefficients(const LinearCoefficients<Scalar>& k) {
    return {k.D * k.E + k.A * k.C, k.C * k.D * (k.A * k.E - k.B * k.B)};
}

/// Squared frequencies z1 <= z2 solving z^2 - b z + c = 0 (z = omega^2 = -x^2),
/// using the sign-matched root and Vieta for the other.  A slightly negative
/// discriminant from roundoff is clamped to zero.
template <typename Scalar>
std::pair<Scalar, Scalar> squared_frequencies(Scalar b, Scalar c, bool* degenerate = nullptr) {
    using std::abs;
    using std::sqrt;
    Scalar disc = b * b - Scalar(4) * c;
    const Scalar scale = b * b;
    bool degen = false;
    if (disc < Scalar(0) && disc > Scalar(-64) * Eigen::NumTraits<Scalar>::epsilon() * scale) disc = Scalar(0);
    if (disc < Scalar(0)) throw HessianIndefinite("characteristic polynomial has complex roots in x^2");
    if (disc <= Scalar(64) * Eigen::NumTraits<Scalar>::epsilon() * scale) degen = true;
    if (degenerate) *degenerate = degen;
    if (b == Scalar(0)) return {Scalar(0), Scalar(0)};
    const Scalar q = (b + (b > Scalar(0) ? sqrt(disc) : -sqrt(disc))) / Scalar(2);
    Scalar z_big = q;
    Scalar z_small = c / q;
    if (z_small > z_big) std::swap(z_small, z_big);
    return {z_small, z_big};
}

/// Normal-mode frequencies of the relative equilibrium.
template <typename Scalar>
LinearModel<Scalar> normal_modes(const LinearCoefficients<Scalar>& k) {
    using std::sqrt;
    LinearModel<Scalar> m;
    m.coeffs = k;
    const auto [b, c] = characteristic_coefficients(k);
    if (!(k.C > Scalar(0)) || !(k.D > Scalar(0)))
        throw HessianIndefinite("potential block not positive (H1/H2 violated at r*)");
    if (!(c > Scalar(0)) || !(b > Scalar(0)))
        throw HessianIndefinite("reduced Hessian not positive definite (needs a > 0 and H1/H2)");
    bool degen = false;
    const auto [z1, z2] = squared_frequencies(b, c, &degen);
    if (!(z1 > Scalar(0))) throw HessianIndefinite("non-positive squared frequency");
    m.omega1 = sqrt(z1);
    m.omega2 = sqrt(z2);
    m.eta = m.omega1 / m.omega2;
    m.hessian_posdef = true;
    m.degenerate = degen;
    return m;
}

template <typename Scalar>
LinearModel<Scalar> linearize(const Potential<Scalar>& pot, const Thermostat<Scalar>& th,
                              const EquilibriumPoint<Scalar>& eq) {
    if (!(th.coupling() > Scalar(0))) throw HessianIndefinite("linearization requires a > 0");
    return normal_modes(linear_coefficients(pot, th, eq));
}

/// One row of a parameter sweep.  status is "ok" or the error message.
struct SweepPoint {
    double x = 0.0;
    double omega1 = NAN;
    double omega2 = NAN;
    double eta = NAN;
    bool degenerate = false;
    std::string status = "ok";
};

namespace detail {
template <typename F>
SweepPoint sweep_point(double x, F&& model) {
    SweepPoint p;
    p.x = x;
    try {
        const auto m = model();
        p.omega1 = static_cast<double>(m.omega1);
        p.omega2 = static_cast<double>(m.omega2);
        p.eta = static_cast<double>(m.eta);
        p.degenerate = m.degenerate;
    } catch (const std::exception& e) {
        p.status = e.what();
    }
    return p;
}
}  // namespace detail

/// eta over a grid of angular momenta at fixed (T, a) taken from `th`.
template <typename Scalar>
std::vector<SweepPoint> eta_of_mu(const Potential<Scalar>& pot, const Thermostat<Scalar>& th,
                                  const std::vector<double>& mus) {
    std::vector<SweepPoint> out;
    out.reserve(mus.size());
    for (double mu : mus)
        out.push_back(detail::sweep_point(mu, [&] {
            return linearize(pot, th, solve_equilibrium(pot, th.temperature(), Scalar(mu)));
        }));
    return out;
}

/// eta over a grid of temperatures at fixed (mu, a).
template <typename Scalar>
std::vector<SweepPoint> eta_of_T(const Potential<Scalar>& pot, const Thermostat<Scalar>& th,
                                 const std::vector<double>& temperatures, Scalar mu) {
    std::vector<SweepPoint> out;
    out.reserve(temperatures.size());
    for (double T : temperatures)
        out.push_back(detail::sweep_point(T, [&] {
            const auto th_T = th.with_temperature(Scalar(T));
            return linearize(pot, th_T, solve_equilibrium(pot, Scalar(T), mu));
        }));
    return out;
}

/// eta over a grid of couplings at fixed (T, mu).
template <typename Scalar>
std::vector<SweepPoint> eta_of_a(const Potential<Scalar>& pot, const Thermostat<Scalar>& th,
                                 const std::vector<double>& couplings, Scalar mu) {
    std::vector<SweepPoint> out;
    out.reserve(couplings.size());
    const auto eq = solve_equilibrium(pot, th.temperature(), mu);
    for (double a : couplings)
        out.push_back(detail::sweep_point(a, [&] { return linearize(pot, th.with_coupling(Scalar(a)), eq); }));
    return out;
}

/// Nose's estimate of the thermostat frequency: sqrt(a) sqrt(2 n T / ((n+1) s0^2)).
inline double nose_frequency_approx(int n, double T, double s0, double a) {
    if (n < 1) throw ConfigError("n must be at least 1");
    return std::sqrt(a) * std::sqrt(2.0 * n * T / ((n + 1) * s0 * s0));
}

/// sqrt(a) sqrt(Omega2(s0) (G22 + s0^2 T)) / s0^2.
inline double paper_thermostat_frequency(double G22, double s0, double T, double omega2_at_s0, double a) {
    const double inner = G22 + s0 * s0 * T;
    if (!(inner > 0.0)) throw DomainError("G22 + s0^2 T must be positive");
    return std::sqrt(a) * std::sqrt(omega2_at_s0 * inner) / (s0 * s0);
}

/// G22 = (lambda - 1) T s0^2 on the equilibrium set of a homogeneous system.
inline double homogeneous_G22(const HomogeneousSpec& spec, double T, double s0) {
    return (spec.lambda() - 1.0) * T * s0 * s0;
}

/// Internal frequency dG/dI = lambda I^{lambda-1} at G = T / lambda.
inline double homogeneous_internal_frequency(const HomogeneousSpec& spec, double T) {
    if (spec.n != 1) throw ConfigError("internal frequency is defined for n = 1");
    const double lambda = spec.lambda();
    const double I = std::pow(T / lambda, 1.0 / lambda);
    return lambda * std::pow(I, lambda - 1.0);
}

}  // namespace nosetori
