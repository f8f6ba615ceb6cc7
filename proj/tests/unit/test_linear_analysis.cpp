#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <algorithm>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <numbers>

#include "helpers.hpp"
#include "nosetori/linear_analysis.hpp"

using namespace nosetori;
using namespace testing;

namespace {

std::vector<double> sorted_frequencies(const Eigen::Matrix4d& m) {
    Eigen::EigenSolver<Eigen::Matrix4d> es(m);
    std::vector<double> w;
    for (int i = 0; i < 4; ++i)
        if (es.eigenvalues()(i).imag() > 0) w.push_back(es.eigenvalues()(i).imag());
    std::sort(w.begin(), w.end());
    return w;
}

}  // namespace

TEST_CASE("quartic reference frequencies") {
    const auto q = Potential<double>::quartic();
    const auto m = linearize(q, Thermostat<double>::nose(0.01, 1.0), solve_equilibrium(q, 1.0, 1.0));
    CHECK(m.omega1 == doctest::Approx(0.05986).epsilon(1e-4));
    CHECK(m.omega2 == doctest::Approx(2.18324).epsilon(1e-5));
    CHECK(m.eta == doctest::Approx(0.02742).epsilon(1e-3));
    CHECK(m.hessian_posdef);
    CHECK_FALSE(m.degenerate);
}

TEST_CASE("normal modes match the full six-dimensional linearization") {
    // Jacobian of the canonical field at the lift: theta and p_theta give a
    // zero pair, the rest must be +-i omega1, +-i omega2.
    for (const auto& p : shipped_potentials())
        for (const auto& t : shipped_thermostats()) {
            const double r = 0.5 * (p.r_lo + p.r_hi);
            const auto th = t.th.with_temperature(p.pot.temperature_at(r));
            const auto eq = solve_equilibrium(p.pot, th.temperature(), 0.8);
            const auto J = fd_jacobian([&](const PhaseState<double>& x) { return equations_of_motion(p.pot, th, x); },
                                       lift_to_phase(eq), 1e-6);
            Eigen::EigenSolver<Eigen::Matrix<double, 6, 6>> es(J);
            std::vector<double> w;
            for (int i = 0; i < 6; ++i)
                if (es.eigenvalues()(i).imag() > 1e-4) w.push_back(es.eigenvalues()(i).imag());
            std::sort(w.begin(), w.end());
            const auto m = linearize(p.pot, th, eq);
            CAPTURE(std::string(p.name));
            CAPTURE(std::string(t.name));
            REQUIRE(w.size() == 2);
            CHECK(w[0] == doctest::Approx(m.omega1).epsilon(1e-6));
            CHECK(w[1] == doctest::Approx(m.omega2).epsilon(1e-6));
        }
}

TEST_CASE("eigenvalues of the reduced matrix solve the biquadratic") {
    for (const auto& p : shipped_potentials())
        for (const auto& t : shipped_thermostats())
            for (int i = 0; i < 25; ++i) {
                const double r = uniform(p.r_lo, p.r_hi);
                const double a = std::exp(uniform(std::log(1e-3), std::log(10.0)));
                const auto th = t.th.with_temperature(p.pot.temperature_at(r)).with_coupling(a);
                const auto eq = solve_equilibrium(p.pot, th.temperature(), uniform(0.2, 3.0));
                const auto k = linear_coefficients(p.pot, th, eq);
                const auto m = normal_modes(k);
                const auto w = sorted_frequencies(reduced_matrix(k));
                REQUIRE(w.size() == 2);
                CHECK(w[0] == doctest::Approx(m.omega1).epsilon(1e-9));
                CHECK(w[1] == doctest::Approx(m.omega2).epsilon(1e-9));
            }
}

TEST_CASE("characteristic polynomial") {
    const LinearCoefficients<double> k{0.7, -0.2, 1.3, 0.4, 0.9};
    const auto [b, c] = characteristic_coefficients(k);
    const Eigen::Matrix4d M = reduced_matrix(k);
    for (double x : {-1.5, -0.3, 0.2, 0.8, 2.0}) {
        const double det = (x * Eigen::Matrix4d::Identity() - M).determinant();
        CHECK(det == doctest::Approx(x * x * x * x + b * x * x + c).epsilon(1e-12));
    }
}

TEST_CASE("decoupled and coupled closed forms") {
    // B = 0 decouples: omega^2 = AC and DE
    const auto m = normal_modes(LinearCoefficients<double>{1.0, 0.0, 0.01, 0.05, 1.0});
    CHECK(m.omega1 == doctest::Approx(0.1).epsilon(1e-14));
    CHECK(m.omega2 == doctest::Approx(std::sqrt(0.05)).epsilon(1e-14));

    // z^2 - 5z + 4 = 0 -> z = 1, 4
    const auto [z1, z2] = squared_frequencies(5.0, 4.0);
    CHECK(z1 == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(z2 == doctest::Approx(4.0).epsilon(1e-15));

    // tiny root stays accurate where the textbook formula cancels
    const auto [t1, t2] = squared_frequencies(1.0, 1e-17);
    CHECK(t1 == doctest::Approx(1e-17).epsilon(1e-12));
    CHECK(t2 == doctest::Approx(1.0));

    bool degenerate = false;
    const auto [d1, d2] = squared_frequencies(2.0, 1.0, &degenerate);
    CHECK(degenerate);
    CHECK(d1 == d2);
    CHECK_THROWS_AS(squared_frequencies(1.0, 1.0), HessianIndefinite);
    CHECK_THROWS_AS(normal_modes(LinearCoefficients<double>{1.0, 0.0, -1.0, 1.0, 1.0}), HessianIndefinite);
}

TEST_CASE("linearization needs a positive coupling") {
    const auto q = Potential<double>::quartic();
    const auto eq = solve_equilibrium(q, 1.0, 1.0);
    CHECK_THROWS_AS(linearize(q, Thermostat<double>::nose(0.0, 1.0), eq), HessianIndefinite);
}

TEST_CASE("eta does not depend on mu for constant thermostat mass") {
    for (const auto& p : shipped_potentials()) {
        const double r = 0.5 * (p.r_lo + p.r_hi);
        const double T = p.pot.temperature_at(r);
        const auto pts = eta_of_mu(p.pot, Thermostat<double>::nose(0.3, T), {0.5, 1.0, 2.0, 5.0});
        for (const auto& pt : pts) {
            REQUIRE(pt.status == "ok");
            CHECK(pt.eta == doctest::Approx(pts[0].eta).epsilon(1e-13));
        }
        CHECK(pts[3].omega2 == doctest::Approx(pts[0].omega2 / 10).epsilon(1e-12));
    }
    // Omega_2(s) = 1 + s^2 breaks the scaling
    const auto q = Potential<double>::quartic();
    const auto vm = eta_of_mu(q, Thermostat<double>::variable_mass(0.3, 1.0), {0.5, 5.0});
    CHECK(std::abs(vm[0].eta - vm[1].eta) > 1e-3);
}

TEST_CASE("small coupling limit") {
    for (const auto& p : shipped_potentials()) {
        const double r = 0.5 * (p.r_lo + p.r_hi);
        const auto th = Thermostat<double>::variable_mass(1.0, p.pot.temperature_at(r));
        const auto eq = solve_equilibrium(p.pot, th.temperature(), 1.1);
        const auto k0 = linear_coefficients(p.pot, th, eq);
        // omega1^2 -> a D Omega_2(s0) / s0^2, omega2^2 -> C (c / (r s0))^2
        const double cr = p.pot.metric(eq.r_star) / (eq.r_star * eq.s0);
        const double slow = std::sqrt(k0.D * th.omega2(eq.s0)) / eq.s0;
        const double fast = std::sqrt(k0.C) * cr;
        double prev = INFINITY;
        for (double a : {1e-2, 1e-4, 1e-6, 1e-8}) {
            const auto m = linearize(p.pot, th.with_coupling(a), eq);
            const double err = std::abs(m.omega1 / std::sqrt(a) - slow);
            CHECK(err < prev);
            prev = err;
            CHECK(m.omega2 == doctest::Approx(fast).epsilon(10 * a));
        }
        CHECK(prev < 1e-7 * slow);
    }
}

TEST_CASE("sweeps record failures per point") {
    const auto lj = Potential<double>::lennard_jones();
    const auto pts = eta_of_T(lj, Thermostat<double>::nose(1.0, 0.5), {0.3, 0.8, 0.5}, 1.0);
    REQUIRE(pts.size() == 3);
    CHECK(pts[0].status == "ok");
    CHECK(pts[1].status.find("temperature outside") != std::string::npos);
    CHECK(std::isnan(pts[1].eta));
    CHECK(pts[2].eta == doctest::Approx(linearize(lj, Thermostat<double>::nose(1.0, 0.5),
                                                  solve_equilibrium(lj, 0.5, 1.0)).eta));

    const auto q = Potential<double>::quartic();
    const auto as = eta_of_a(q, Thermostat<double>::nose(1.0, 1.0), {0.0, 0.01}, 1.0);
    CHECK(as[0].status != "ok");
    CHECK(as[1].eta == doctest::Approx(0.02742).epsilon(1e-3));
}

TEST_CASE("homogeneous internal frequency against the period integral") {
    boost::math::quadrature::tanh_sinh<double> integrator;
    for (int xi = 2; xi <= 10; xi += 2)
        for (int eta = 2; eta <= 10; eta += 2)
            for (double T : {0.5, 1.0, 2.0}) {
                const HomogeneousSpec spec(1, xi, eta);
                const double c = spec.normalization();
                const double E = T / spec.lambda();
                const double xmax = std::pow(c * E, 1.0 / eta);
                // quarter period: int_0^xmax dx / xdot, xdot = xi p^{xi-1} / c, x = xmax y
                const double quarter = integrator.integrate(
                    [&](double y, double yc) {
                        const double one_minus_yeta = yc > 0 ? -std::expm1(eta * std::log1p(-yc)) : 1 - std::pow(y, eta);
                        const double p = std::pow(c * E * one_minus_yeta, 1.0 / xi);
                        return xmax * c / (xi * std::pow(p, xi - 1));
                    },
                    0.0, 1.0);
                const double omega = 2 * std::numbers::pi / (4 * quarter);
                CAPTURE(xi);
                CAPTURE(eta);
                CHECK(homogeneous_internal_frequency(spec, T) == doctest::Approx(omega).epsilon(1e-9));
            }
}

TEST_CASE("thermostat frequency estimates") {
    // harmonic: G22 = 0 and both estimates reduce to sqrt(a T) / s0
    const HomogeneousSpec harmonic(1, 2, 2);
    CHECK(homogeneous_G22(harmonic, 1.0, 1.3) == 0.0);
    const double paper = paper_thermostat_frequency(0.0, 1.3, 1.0, 1.0, 0.01);
    CHECK(paper == doctest::Approx(0.1 / 1.3).epsilon(1e-15));
    CHECK(nose_frequency_approx(1, 1.0, 1.3, 0.01) == doctest::Approx(paper).epsilon(1e-15));

    const HomogeneousSpec quartic_osc(1, 4, 4);
    CHECK(homogeneous_G22(quartic_osc, 1.0, 2.0) == doctest::Approx(4.0));
    CHECK(paper_thermostat_frequency(4.0, 2.0, 1.0, 1.0, 1.0) == doctest::Approx(std::sqrt(8.0) / 4.0));
    CHECK(nose_frequency_approx(3, 2.0, 1.0, 4.0) == doctest::Approx(2.0 * std::sqrt(3.0)));
    CHECK_THROWS_AS(nose_frequency_approx(0, 1.0, 1.0, 1.0), ConfigError);
    CHECK_THROWS_AS(paper_thermostat_frequency(-2.0, 1.0, 1.0, 1.0, 1.0), DomainError);
    CHECK_THROWS_AS(homogeneous_internal_frequency(HomogeneousSpec(2, 2, 2), 1.0), ConfigError);
}
