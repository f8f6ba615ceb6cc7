#pragma once

#include <cmath>
#include <map>
#include <string>
#include <utility>

#include "nosetori/errors.hpp"
#include "nosetori/laurent.hpp"

namespace nosetori {

enum class ThermostatKind { Nose, GeneralizedWinkler, TanhLogistic, GeneralizedOrder2 };

inline std::string to_string(ThermostatKind kind) {
    switch (kind) {
        case ThermostatKind::Nose: return "nose";
        case ThermostatKind::GeneralizedWinkler: return "winkler";
        case ThermostatKind::TanhLogistic: return "tanh_logistic";
        case ThermostatKind::GeneralizedOrder2: return "generalized";
    }
    return "unknown";
}

/// Generalized variable-mass thermostat of order 2 with coupling a and
/// temperature T.  The thermostat contributes
///
///     F(s, a S) / a + T ln s
///
/// to the extended Hamiltonian.  Everything is expressed through the scaled
/// energy Phi(s, S) = F(s, a S) / a so that the frozen limit a = 0 is exact.
template <typename Scalar>
class Thermostat {
public:
    using Poly = LaurentPolynomial<Scalar>;

    /// F(S) = S^2 / 2.
    static Thermostat nose(Scalar a, Scalar T) { return Thermostat(ThermostatKind::Nose, a, T); }

    /// Controller (a/2)(e s^{1-1/e} S)^2: Omega_2(s) = e^2 s^{2-2/e}.
    static Thermostat winkler(Scalar exponent, Scalar a, Scalar T) {
        if (!(exponent > Scalar(0))) throw ConfigError("Winkler exponent must be positive");
        Thermostat th(ThermostatKind::GeneralizedWinkler, a, T);
        th.param_ = exponent;
        return th;
    }

    /// Saturating friction: F(S) = d^2 ln cosh(S / d), F' = d tanh(S / d).
    /// Stand-in for the logistic thermostat; F''(0) = 1.
    static Thermostat tanh_logistic(Scalar scale, Scalar a, Scalar T) {
        if (!(scale > Scalar(0))) throw ConfigError("tanh-logistic scale must be positive");
        Thermostat th(ThermostatKind::TanhLogistic, a, T);
        th.param_ = scale;
        return th;
    }

    /// F(s, S) = sum_k Omega_k(s) S^k / k!, k >= 2; Omega_2 must be positive.
    static Thermostat generalized(std::map<int, Poly> omegas, Scalar a, Scalar T) {
        Thermostat th(ThermostatKind::GeneralizedOrder2, a, T);
        if (omegas.empty() || omegas.begin()->first < 2)
            throw ConfigError("generalized thermostat needs coefficients Omega_k with k >= 2");
        if (!omegas.count(2)) throw ConfigError("generalized thermostat needs Omega_2");
        th.omegas_ = std::move(omegas);
        for (int i = 0; i <= 400; ++i) {
            const Scalar s = Scalar(std::pow(10.0, -2.0 + 4.0 * i / 400.0));
            if (!(th.omegas_.at(2)(s) > Scalar(0))) throw ConfigError("Omega_2(s) must be positive for s > 0");
        }
        return th;
    }

    /// Omega_2(s) = 1 + s^2, the variable-mass example used throughout the tests.
    static Thermostat variable_mass(Scalar a, Scalar T) {
        return generalized({{2, Poly{{0, Scalar(1)}, {2, Scalar(1)}}}}, a, T);
    }

    ThermostatKind kind() const { return kind_; }
    Scalar coupling() const { return a_; }
    Scalar temperature() const { return T_; }
    /// Winkler exponent or tanh scale; unused otherwise.
    Scalar parameter() const { return param_; }
    const std::map<int, Poly>& omegas() const { return omegas_; }

    Thermostat with_coupling(Scalar a) const {
        Thermostat t = *this;
        t.a_ = a;
        t.validate();
        return t;
    }

    Thermostat with_temperature(Scalar T) const {
        Thermostat t = *this;
        t.T_ = T;
        t.validate();
        return t;
    }

    /// F depends on S alone (constant thermostat mass).
    bool elementary() const {
        switch (kind_) {
            case ThermostatKind::Nose:
            case ThermostatKind::TanhLogistic: return true;
            case ThermostatKind::GeneralizedWinkler: return param_ == Scalar(1);
            case ThermostatKind::GeneralizedOrder2:
                for (const auto& [k, om] : omegas_)
                    if (!om.is_constant()) return false;
                return true;
        }
        return false;
    }

    /// Phi(s, S) = F(s, a S) / a.
    Scalar energy(Scalar s, Scalar S) const {
        using std::abs;
        using std::exp;
        using std::log;
        using std::log1p;
        using std::pow;
        switch (kind_) {
            case ThermostatKind::Nose: return a_ * S * S / Scalar(2);
            case ThermostatKind::GeneralizedWinkler: {
                const Scalar e = param_;
                return a_ * e * e * pow(s, Scalar(2) - Scalar(2) / e) * S * S / Scalar(2);
            }
            case ThermostatKind::TanhLogistic: {
                if (a_ == Scalar(0)) return Scalar(0);
                const Scalar d = param_;
                const Scalar x = abs(a_ * S / d);
                // ln cosh x, stable for large |x|
                const Scalar lncosh = x + log1p(exp(Scalar(-2) * x)) - Scalar(std::log(2.0));
                return d * d * lncosh / a_;
            }
            case ThermostatKind::GeneralizedOrder2: {
                Scalar acc(0);
                for (const auto& [k, om] : omegas_) acc += om(s) * pow(a_, k - 1) * pow(S, k) / factorial(k);
                return acc;
            }
        }
        return Scalar(0);
    }

    /// dPhi/dS; this is ds/dt.
    Scalar d_momentum(Scalar s, Scalar S) const {
        using std::pow;
        using std::tanh;
        switch (kind_) {
            case ThermostatKind::Nose: return a_ * S;
            case ThermostatKind::GeneralizedWinkler: {
                const Scalar e = param_;
                return a_ * e * e * pow(s, Scalar(2) - Scalar(2) / e) * S;
            }
            case ThermostatKind::TanhLogistic: return param_ * tanh(a_ * S / param_);
            case ThermostatKind::GeneralizedOrder2: {
                Scalar acc(0);
                for (const auto& [k, om] : omegas_) acc += om(s) * pow(a_, k - 1) * pow(S, k - 1) / factorial(k - 1);
                return acc;
            }
        }
        return Scalar(0);
    }

    /// dPhi/ds.
    Scalar d_position(Scalar s, Scalar S) const {
        using std::pow;
        switch (kind_) {
            case ThermostatKind::Nose:
            case ThermostatKind::TanhLogistic: return Scalar(0);
            case ThermostatKind::GeneralizedWinkler: {
                const Scalar e = param_;
                const Scalar q = Scalar(2) - Scalar(2) / e;
                return a_ * e * e * q * pow(s, q - Scalar(1)) * S * S / Scalar(2);
            }
            case ThermostatKind::GeneralizedOrder2: {
                Scalar acc(0);
                for (const auto& [k, om] : omegas_)
                    acc += om.derivative(s, 1) * pow(a_, k - 1) * pow(S, k) / factorial(k);
                return acc;
            }
        }
        return Scalar(0);
    }

    /// Omega_2(s) = d^2 F / dS^2 (s, 0), the inverse thermostat mass.
    Scalar omega2(Scalar s) const {
        using std::pow;
        switch (kind_) {
            case ThermostatKind::Nose:
            case ThermostatKind::TanhLogistic: return Scalar(1);
            case ThermostatKind::GeneralizedWinkler: return param_ * param_ * pow(s, Scalar(2) - Scalar(2) / param_);
            case ThermostatKind::GeneralizedOrder2: return omegas_.at(2)(s);
        }
        return Scalar(1);
    }

    std::string name() const { return to_string(kind_); }

private:
    Thermostat(ThermostatKind kind, Scalar a, Scalar T) : kind_(kind), a_(a), T_(T) { validate(); }

    void validate() const {
        if (!(a_ >= Scalar(0))) throw ConfigError("thermostat coupling a must be non-negative");
        if (!(T_ > Scalar(0))) throw ConfigError("temperature T must be positive");
    }

    static Scalar factorial(int k) {
        Scalar f(1);
        for (int i = 2; i <= k; ++i) f *= Scalar(i);
        return f;
    }

    ThermostatKind kind_;
    Scalar a_;
    Scalar T_;
    Scalar param_{1};
    std::map<int, Poly> omegas_;
};

}  // namespace nosetori
