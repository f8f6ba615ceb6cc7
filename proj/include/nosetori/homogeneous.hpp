#pragma once

#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "nosetori/errors.hpp"

namespace nosetori {

/// c = (pi eta / (2 B(1 + 1/xi, 1/eta)))^lambda, with the Beta function taken
/// through log-Gamma.  This makes h = (p^xi + x^eta) / c equal to I^lambda in
/// action-angle variables.
inline double homogeneous_normalization(int xi, int eta) {
    if (xi <= 0 || eta <= 0 || xi % 2 || eta % 2) throw ConfigError("xi and eta must be positive even integers");
    const double a = 1.0 + 1.0 / xi;
    const double b = 1.0 / eta;
    const double log_beta = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
    const double lambda = 1.0 / (1.0 / xi + 1.0 / eta);
    return std::exp(lambda * (std::log(std::numbers::pi * eta / 2.0) - log_beta));
}

/// Weighted-homogeneous Hamiltonian sum_i (p_i^xi + q_i^eta) / c with n degrees
/// of freedom; G(I) = sum_i I_i^lambda with 1/lambda = 1/xi + 1/eta.
struct HomogeneousSpec {
    int n = 1;
    int xi = 2;
    int eta = 2;

    HomogeneousSpec() = default;
    HomogeneousSpec(int dof, int xi_exp, int eta_exp) : n(dof), xi(xi_exp), eta(eta_exp) {
        if (n < 1) throw ConfigError("homogeneous system needs n >= 1");
        homogeneous_normalization(xi, eta);  // validates exponents
    }

    double lambda() const { return 1.0 / (1.0 / xi + 1.0 / eta); }
    double normalization() const { return homogeneous_normalization(xi, eta); }

    /// h(x, p) for one degree of freedom.
    double energy(double x, double p) const { return (std::pow(p, xi) + std::pow(x, eta)) / normalization(); }

    friend bool operator==(const HomogeneousSpec&, const HomogeneousSpec&) = default;
};

struct ActionCheck {
    double action = 0.0;    ///< (1/2pi) \oint p dx
    double expected = 0.0;  ///< E^{1/lambda}
    double quadrature_error = 0.0;
};

/// Action of the level curve h = E of a one-degree-of-freedom homogeneous
/// system, by quadrature of the area it encloses.
inline ActionCheck homogeneous_action_check(const HomogeneousSpec& spec, double energy, double tol = 1e-12) {
    if (spec.n != 1) throw ConfigError("action check is defined for n = 1");
    if (!(energy > 0.0)) throw DomainError("energy must be positive");
    const double c = spec.normalization();
    const double ce = c * energy;
    const double x_max = std::pow(ce, 1.0 / spec.eta);
    const double p_max = std::pow(ce, 1.0 / spec.xi);
    // p(x) = p_max (1 - y^eta)^{1/xi} with x = x_max y; four symmetric quarters.
    // Boost passes tc = 1 - y (> 0) on the right half
    auto profile = [&](double y, double tc) {
        const double one_minus = tc > 0 ? -std::expm1(spec.eta * std::log1p(-tc)) : -std::expm1(spec.eta * std::log(y));
        return std::pow(one_minus, 1.0 / spec.xi);
    };
    boost::math::quadrature::tanh_sinh<double> integrator;
    double q_error = 0.0;
    const double q = integrator.integrate(profile, 0.0, 1.0, tol, &q_error);
    const double action = 4.0 * x_max * p_max * q / (2.0 * std::numbers::pi);
    const double error = 4.0 * x_max * p_max * q_error / (2.0 * std::numbers::pi);
    if (!(error <= 1e3 * tol * std::max(1.0, action)))
        throw QuadratureError("action quadrature did not converge", error);
    return {action, std::pow(energy, 1.0 / spec.lambda()), error};
}

}  // namespace nosetori
