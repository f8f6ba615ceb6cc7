#include <doctest.h>

#include <numbers>

#include "helpers.hpp"
#include "nosetori/diagnostics.hpp"
#include "nosetori/equilibria.hpp"

using namespace nosetori;
using namespace testing;

TEST_CASE("Birkhoff average of simple series") {
    CHECK(birkhoff_average(Eigen::VectorXd::Constant(10, 4.25), 0.1) == 4.25);
    CHECK(birkhoff_average(Eigen::VectorXd::Constant(1, -2.0), 0.1) == -2.0);
    CHECK_THROWS(birkhoff_average(Eigen::VectorXd(0), 0.1));

    // trapezoid is exact on linear data: mean of t over [0, 1] is 1/2
    CHECK(birkhoff_average(Eigen::VectorXd::LinSpaced(11, 0.0, 1.0), 0.1) == doctest::Approx(0.5).epsilon(1e-15));

    // whole periods of a sampled cosine and sine^2
    const int n = 400;
    const double h = 2 * std::numbers::pi * 3 / n;
    Eigen::VectorXd c(n + 1), s2(n + 1);
    for (int i = 0; i <= n; ++i) {
        c(i) = std::cos(i * h);
        s2(i) = std::pow(std::sin(i * h), 2);
    }
    CHECK(std::abs(birkhoff_average(c, h)) < 1e-14);
    CHECK(birkhoff_average(s2, h) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("drift from series") {
    const Eigen::VectorXd t = Eigen::VectorXd::LinSpaced(5, 0.0, 4.0);
    Eigen::VectorXd H(5), p(5);
    H << 1.0, 1.5, 0.25, 1.0, 1.0;
    p << 2.0, 2.0, 2.0, 2.0, 2.0;
    const auto d = drift_from_series(t, H, p);
    CHECK(d.max_abs_energy_drift == 0.75);
    CHECK(d.max_abs_ptheta_drift == 0.0);
    CHECK(d.energy_drift(1) == 0.5);
    CHECK_THROWS(drift_from_series(t, H, Eigen::VectorXd::Zero(4)));
}

TEST_CASE("drift report is zero along an exact flow") {
    // harmonic oscillator with a frozen thermostat, sampled from the exact solution
    const HomogeneousSystem<double> sys(HomogeneousSpec(1, 2, 2), Thermostat<double>::nose(0.0, 1.0));
    Trajectory<double> traj;
    const Eigen::Index n = 200;
    traj.times = Eigen::VectorXd::LinSpaced(n, 0.0, 0.1 * (n - 1));
    traj.states.resize(n, 6);
    for (Eigen::Index i = 0; i < n; ++i)
        traj.states.row(i) = make_state<double>(std::cos(traj.times(i)), -std::sin(traj.times(i)), 0, 0, 1, 0).transpose();
    traj.sample_spacing = 0.1;
    const auto d = drift_report(sys, traj);
    CHECK(d.max_abs_energy_drift < 1e-15);
    CHECK(d.max_abs_ptheta_drift == 0.0);
}

TEST_CASE("drift report on an integrated orbit") {
    const auto q = Potential<double>::quartic();
    const RotationalSystem<double> sys(q, Thermostat<double>::nose(0.01, 1.0));
    const auto eq = solve_equilibrium(q, 1.0, 1.0);
    const auto traj = integrate(sys, {Scheme::CRFR4, 1.0 / 32, 4096}, perturbed_start(q, eq, 1e-2));
    const auto d = drift_report(sys, traj);
    CHECK(d.max_abs_energy_drift < 1e-7);
    CHECK(d.max_abs_ptheta_drift == 0.0);
    CHECK(d.times.size() == traj.size());
    CHECK((d.energy_drift.array() == (traj.observable("H").array() - traj.observable("H")(0))).all());
}

TEST_CASE("mean temperature identity on the harmonic oscillator") {
    // H = (p^2 + x^2) / 2 at action 1: T_inst = p^2, kappa = 1, envelope = sup |sin 2t| / 2
    const auto id = mean_temperature_identity_check(HomogeneousSpec(1, 2, 2), 1.0, 1.0 / 32, 32 * 1024);
    CHECK(id.kappa == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(id.period == doctest::Approx(2 * std::numbers::pi));
    CHECK(id.window == doctest::Approx(1024.0));
    CHECK(id.envelope == doctest::Approx(0.5).epsilon(1e-3));
    CHECK(std::abs(id.difference) <= id.envelope / id.window + 1e-9);
    CHECK(id.difference == doctest::Approx(id.time_average - id.kappa));
}

TEST_CASE("mean temperature identity for an anharmonic oscillator") {
    const HomogeneousSpec spec(1, 4, 4);
    for (double B : {256.0, 1024.0}) {
        const auto n = static_cast<std::size_t>(B * 32);
        const auto id = mean_temperature_identity_check(spec, 1.0, 1.0 / 32, n);
        CHECK(id.kappa == doctest::Approx(2.0));
        CHECK(std::abs(id.difference) <= id.envelope / B + 1e-6);
    }
    CHECK_THROWS_AS(mean_temperature_identity_check(HomogeneousSpec(2, 2, 2), 1.0, 0.1, 10), ConfigError);
    CHECK_THROWS_AS(mean_temperature_identity_check(spec, 0.0, 0.1, 10), DomainError);
}
