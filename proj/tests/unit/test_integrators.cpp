#include <doctest.h>

#include "helpers.hpp"
#include "nosetori/equilibria.hpp"
#include "nosetori/integrators.hpp"

#include <Eigen/LU>

using namespace nosetori;
using namespace testing;

namespace {

std::vector<NamedThermostat> splittable_thermostats() {
    return {{"nose", Thermostat<double>::nose(0.4, 0.6)},
            {"winkler_e1", Thermostat<double>::winkler(1.0, 0.4, 0.6)},
            {"tanh_logistic", Thermostat<double>::tanh_logistic(0.8, 0.4, 0.6)}};
}

Eigen::Matrix<double, 6, 6> canonical_form() {
    Eigen::Matrix<double, 6, 6> J = Eigen::Matrix<double, 6, 6>::Zero();
    for (int k = 0; k < 3; ++k) {
        J(2 * k, 2 * k + 1) = 1.0;
        J(2 * k + 1, 2 * k) = -1.0;
    }
    return J;
}

}  // namespace

TEST_CASE("CRFR4 coefficients") {
    using K = Crfr4Coefficients;
    CHECK(K::c1 + K::c2 + K::c3 + K::c4 == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(K::d1 + K::d2 + K::d3 == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(K::c1 == doctest::Approx(0.6756035959798289));
    CHECK(K::d2 == doctest::Approx(-1.7024143839193153));
}

TEST_CASE("zero step is the identity") {
    for (const auto& p : shipped_potentials()) {
        const RotationalSystem<double> sys(p.pot, Thermostat<double>::nose(0.4, 0.6));
        const auto x = random_state(p);
        CHECK((step(sys, Scheme::CRFR4, x, 0.0) - x).norm() < 1e-15);
        CHECK((step(sys, Scheme::RK4, x, 0.0) - x).norm() == 0.0);
    }
}

TEST_CASE("split flows reproduce the canonical field") {
    for (const auto& p : shipped_potentials())
        for (const auto& t : splittable_thermostats()) {
            const RotationalSystem<double> sys(p.pot, t.th);
            CAPTURE(std::string(p.name));
            CAPTURE(std::string(t.name));
            for (int i = 0; i < 20; ++i) CHECK(split_consistency_residual(sys, random_state(p)) < 1e-7);
            CHECK(std::holds_alternative<SplitFlows<RotationalSystem<double>>>(split_flows(sys)));
        }
    const HomogeneousSystem<double> hs(HomogeneousSpec(1, 4, 6), Thermostat<double>::nose(0.3, 1.0));
    CHECK(split_consistency_residual(hs, hs.sample_state()) < 1e-7);
}

TEST_CASE("CRFR4 is reversible") {
    for (const auto& p : shipped_potentials())
        for (const auto& t : splittable_thermostats()) {
            const RotationalSystem<double> sys(p.pot, t.th);
            const double h = 1.0 / 64;
            for (int i = 0; i < 10; ++i) {
                const auto x = random_state(p);
                PhaseState<double> y = x;
                try {
                    for (int n = 0; n < 8; ++n) y = step(sys, Scheme::CRFR4, y, h);
                    for (int n = 0; n < 8; ++n) y = step(sys, Scheme::CRFR4, y, -h);
                } catch (const DomainError&) {
                    continue;  // orbit left J; reversibility is only claimed inside it
                }
                CAPTURE(std::string(p.name));
                CAPTURE(std::string(t.name));
                CHECK((y - x).norm() < 1e-12);
            }
        }
}

TEST_CASE("CRFR4 step is symplectic") {
    const auto J = canonical_form();
    for (const auto& p : shipped_potentials())
        for (const auto& t : splittable_thermostats()) {
            const RotationalSystem<double> sys(p.pot, t.th);
            const double r = 0.5 * (p.r_lo + p.r_hi);
            const auto x = make_state<double>(r, 0.05, 0.2, 0.6, 1.1, 0.1);
            const auto M = fd_jacobian([&](const PhaseState<double>& y) { return step(sys, Scheme::CRFR4, y, 1.0 / 32); }, x);
            CAPTURE(std::string(p.name));
            CAPTURE(std::string(t.name));
            CHECK(M.determinant() == doctest::Approx(1.0).epsilon(1e-7));
            CHECK((M.transpose() * J * M - J).norm() < 1e-7);
        }
}

TEST_CASE("angular momentum is preserved exactly") {
    const auto q = Potential<double>::quartic();
    const RotationalSystem<double> sys(q, Thermostat<double>::tanh_logistic(0.5, 1.0, 1.0));
    const auto eq = solve_equilibrium(q, 1.0, 1.3);
    const auto traj = integrate(sys, {Scheme::CRFR4, 1.0 / 32, 2000}, perturbed_start(q, eq, 0.1));
    CHECK((traj.states.col(idx::p_theta).array() == 1.3).all());
    CHECK((traj.observable("p_theta").array() == 1.3).all());
}

TEST_CASE("fourth-order global error on the harmonic oscillator") {
    // (p^2 + x^2) / 2 with a frozen thermostat: x(t) = cos t
    const HomogeneousSystem<double> sys(HomogeneousSpec(1, 2, 2), Thermostat<double>::nose(0.0, 1.0));
    const auto x0 = make_state<double>(1, 0, 0, 0, 1, 0);
    auto error = [&](Scheme scheme, double h) {
        const auto n = static_cast<std::size_t>(std::llround(10.0 / h));
        const auto traj = integrate(sys, {scheme, h, n}, x0);
        const auto last = traj.state(traj.size() - 1);
        return std::hypot(last(idx::r) - std::cos(10.0), last(idx::p_r) + std::sin(10.0));
    };
    for (Scheme scheme : {Scheme::CRFR4, Scheme::RK4}) {
        const double ratio = error(scheme, 0.1) / error(scheme, 0.05);
        CAPTURE(to_string(scheme));
        CHECK(ratio > 14.0);
        CHECK(ratio < 18.0);
    }
}

TEST_CASE("lifted equilibrium stays put up to O(h^4)") {
    const auto q = Potential<double>::quartic();
    const RotationalSystem<double> sys(q, Thermostat<double>::nose(0.1, 1.0));
    const auto eq = solve_equilibrium(q, 1.0, 1.0);
    auto offset = [&](double h) {
        const auto n = static_cast<std::size_t>(std::llround(20.0 / h));
        const auto traj = integrate(sys, {Scheme::CRFR4, h, n}, lift_to_phase(eq));
        return (traj.states.col(idx::r).array() - eq.r_star).abs().maxCoeff();
    };
    const double coarse = offset(1.0 / 8);
    const double fine = offset(1.0 / 16);
    CHECK(coarse < 5e-4);
    CHECK(coarse / fine >= 12.0);
}

TEST_CASE("RK4 and CRFR4 agree on a short run") {
    const auto lj = Potential<double>::lennard_jones();
    const RotationalSystem<double> sys(lj, Thermostat<double>::nose(1.0, 0.5));
    const auto eq = solve_equilibrium(lj, 0.5, 1.0);
    const auto x0 = perturbed_start(lj, eq, 1e-3);
    const IntegratorSpec a{Scheme::CRFR4, 1.0 / 64, 640};
    const IntegratorSpec b{Scheme::RK4, 1.0 / 64, 640};
    const auto ta = integrate(sys, a, x0);
    const auto tb = integrate(sys, b, x0);
    CHECK((ta.states - tb.states).cwiseAbs().maxCoeff() < 1e-7);
}

TEST_CASE("unsplittable systems") {
    const auto q = Potential<double>::quartic();
    for (const auto& th : {Thermostat<double>::winkler(2.0, 0.5, 1.0), Thermostat<double>::variable_mass(0.5, 1.0)}) {
        const RotationalSystem<double> sys(q, th);
        CHECK(std::holds_alternative<Unsplittable>(split_flows(sys)));
        const auto x0 = make_state<double>(0.6, 0, 0, 1, 1, 0);
        CHECK_THROWS_AS(integrate(sys, {Scheme::CRFR4, 0.01, 10}, x0), ConfigError);
        CHECK_THROWS_AS(step(sys, Scheme::CRFR4, x0, 0.01), ConfigError);
        CHECK_NOTHROW(integrate(sys, {Scheme::RK4, 0.01, 10}, x0));
    }
}

TEST_CASE("trajectory sampling and errors") {
    const auto q = Potential<double>::quartic();
    const RotationalSystem<double> sys(q, Thermostat<double>::nose(0.5, 1.0));
    const auto x0 = make_state<double>(0.6, 0, 0, 1, 1, 0);
    const auto traj = integrate(sys, {Scheme::CRFR4, 0.125, 10}, x0, 3);
    REQUIRE(traj.size() == 4);
    CHECK(traj.times(3) == 9 * 0.125);
    CHECK(traj.sample_spacing == 3 * 0.125);
    CHECK(traj.state(0) == x0);
    CHECK(traj.observable_names == std::vector<std::string>{"H", "p_theta", "T_inst"});
    CHECK_THROWS_AS(traj.observable("nope"), std::out_of_range);

    CHECK_THROWS_AS(integrate(sys, {Scheme::CRFR4, 0.1, 0}, x0), ConfigError);
    CHECK_THROWS_AS(integrate(sys, {Scheme::CRFR4, -0.1, 5}, x0), ConfigError);
    CHECK_THROWS_AS(integrate(sys, {Scheme::CRFR4, 0.1, 5}, x0, 0), ConfigError);

    // the thermostat drives s through zero on the first kick
    const auto doomed = make_state<double>(0.6, 0, 0, 1, 0.5, -100);
    try {
        integrate(sys, {Scheme::CRFR4, 0.1, 5}, doomed);
        FAIL("expected an integration error");
    } catch (const IntegrationError& e) {
        CHECK(e.step() == 1);
    }
    CHECK_THROWS_AS(integrate(sys, {Scheme::CRFR4, 0.1, 5}, make_state<double>(-1, 0, 0, 1, 1, 0)), IntegrationError);
}
