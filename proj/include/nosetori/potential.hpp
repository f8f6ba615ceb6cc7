#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nosetori/errors.hpp"
#include "nosetori/laurent.hpp"

namespace nosetori {

/// Open interval (lo, hi); hi may be +infinity.
struct Interval {
    double lo = 0.0;
    double hi = std::numeric_limits<double>::infinity();

    bool contains(double x) const { return x > lo && x < hi; }
    bool closure_contains(double x) const { return x >= lo && x <= hi; }
    friend bool operator==(const Interval&, const Interval&) = default;
};

/// Finite window [lo', hi'] strictly inside the interval, used for sampling.
inline std::pair<double, double> sampling_window(const Interval& j) {
    const double lo = j.lo > 0.0 ? j.lo * (1.0 + 1e-9) : 1e-6 * std::min(1.0, j.hi);
    const double hi = std::isfinite(j.hi) ? j.hi * (1.0 - 1e-9) : std::max(1e6, 1e3 * lo);
    return {lo, hi};
}

/// A point comfortably inside the interval.
inline double representative_point(const Interval& j) {
    auto [lo, hi] = sampling_window(j);
    if (!std::isfinite(j.hi)) return std::max(1.0, 2.0 * j.lo);
    return 0.5 * (lo + hi);
}

enum class PotentialKind { Quartic, LennardJones126, SphericalPendulum, Custom };
enum class MetricKind { Plane, Sphere, Custom };

std::string to_string(PotentialKind kind);
std::string to_string(MetricKind kind);

struct HypothesisReport {
    bool h1 = true;  ///< v'(r) > 0 at every sample
    bool h2 = true;  ///< r v''(r) + v'(r) > 0 at every sample
    std::optional<double> first_h1_failure;
    std::optional<double> first_h2_failure;
    int samples = 0;
    bool holds() const { return h1 && h2; }
};

/// Radial potential v(r) together with the kinetic metric factor c(r) of a
/// surface of revolution.  Derivatives are analytic.
template <typename Scalar>
class Potential {
public:
    using Poly = LaurentPolynomial<Scalar>;

    /// v = r^2 + r^4 on the plane, J = (0, inf).
    static Potential quartic() {
        return Potential(PotentialKind::Quartic, Poly{{2, Scalar(1)}, {4, Scalar(1)}}, MetricKind::Plane, {},
                         Interval{0.0, std::numeric_limits<double>::infinity()});
    }

    /// v = r^-12 - r^-6 on the plane.  The default J = (2^{1/6}, 4^{1/6}) is the
    /// branch where both v' > 0 and r v'' + v' > 0, so T(J) = (0, 3/4).
    static Potential lennard_jones(std::optional<Interval> domain = std::nullopt) {
        const Interval j = domain.value_or(Interval{std::pow(2.0, 1.0 / 6.0), std::pow(4.0, 1.0 / 6.0)});
        return Potential(PotentialKind::LennardJones126, Poly{{-12, Scalar(1)}, {-6, Scalar(-1)}}, MetricKind::Plane,
                         {}, j);
    }

    /// v = -cos(phi) on the unit sphere in the chart r = sin(phi), 0 < r < 1,
    /// so v(r) = -sqrt(1 - r^2) and c(r) = sqrt(1 - r^2).
    static Potential spherical_pendulum() {
        return Potential(PotentialKind::SphericalPendulum, {}, MetricKind::Sphere, {}, Interval{0.0, 1.0});
    }

    /// Refuses domains on which H1 or H2 fails at any sample point.
    static Potential custom(Poly v, Interval domain, MetricKind metric = MetricKind::Plane, Poly metric_poly = {}) {
        Potential pot(PotentialKind::Custom, std::move(v), metric, std::move(metric_poly), domain);
        require_hypotheses(pot);
        return pot;
    }

    PotentialKind kind() const { return kind_; }
    MetricKind metric_kind() const { return metric_; }
    const Interval& domain() const { return domain_; }
    const Poly& laurent() const { return v_; }
    const Poly& metric_laurent() const { return c_; }

    Scalar value(Scalar r) const {
        using std::sqrt;
        if (kind_ == PotentialKind::SphericalPendulum) return -sqrt(Scalar(1) - r * r);
        return v_(r);
    }

    Scalar d1(Scalar r) const {
        using std::sqrt;
        if (kind_ == PotentialKind::SphericalPendulum) return r / sqrt(Scalar(1) - r * r);
        return v_.derivative(r, 1);
    }

    Scalar d2(Scalar r) const {
        using std::sqrt;
        if (kind_ == PotentialKind::SphericalPendulum) {
            const Scalar q = Scalar(1) - r * r;
            return Scalar(1) / (q * sqrt(q));
        }
        return v_.derivative(r, 2);
    }

    /// Kinetic coefficient c(r): H_kin = ((c p_r)^2 + (p_theta / r)^2) / 2.
    Scalar metric(Scalar r) const {
        using std::sqrt;
        switch (metric_) {
            case MetricKind::Plane: return Scalar(1);
            case MetricKind::Sphere: return sqrt(Scalar(1) - r * r);
            case MetricKind::Custom: return c_(r);
        }
        return Scalar(1);
    }

    Scalar metric_d1(Scalar r) const {
        using std::sqrt;
        switch (metric_) {
            case MetricKind::Plane: return Scalar(0);
            case MetricKind::Sphere: return -r / sqrt(Scalar(1) - r * r);
            case MetricKind::Custom: return c_.derivative(r, 1);
        }
        return Scalar(0);
    }

    /// T(r) = r v'(r), the equilibrium temperature at radius r.
    Scalar temperature_at(Scalar r) const { return r * d1(r); }

    /// r^3 v'(r) = tau^2 along the equilibrium branch.
    Scalar tau_squared_at(Scalar r) const { return r * r * r * d1(r); }

    /// Admissible temperature range T(J), from the endpoint limits.
    std::pair<double, double> temperature_range() const {
        auto eval = [this](double r, double fallback) {
            if (!std::isfinite(r)) return fallback;
            const double t = static_cast<double>(temperature_at(Scalar(r)));
            if (!std::isfinite(t)) return fallback;
            return std::abs(t) < 1e-12 ? 0.0 : t;
        };
        const double inf = std::numeric_limits<double>::infinity();
        return {eval(domain_.lo, 0.0), eval(domain_.hi, inf)};
    }

    std::string name() const { return to_string(kind_); }

private:
    Potential(PotentialKind kind, Poly v, MetricKind metric, Poly c, Interval domain)
        : kind_(kind), metric_(metric), v_(std::move(v)), c_(std::move(c)), domain_(domain) {
        if (!(domain_.lo >= 0.0) || !(domain_.hi > domain_.lo))
            throw ConfigError("potential domain must be an open interval inside (0, inf)");
        if (metric_ == MetricKind::Sphere && domain_.hi > 1.0)
            throw ConfigError("sphere metric requires the domain to lie in (0, 1)");
        if (metric_ == MetricKind::Custom && c_.empty()) throw ConfigError("custom metric needs coefficients");
        if (kind_ == PotentialKind::Custom && v_.empty()) throw ConfigError("custom potential needs coefficients");
    }

    PotentialKind kind_;
    MetricKind metric_;
    Poly v_;
    Poly c_;
    Interval domain_;
};

/// Samples H1 (v' > 0) and H2 (r v'' + v' > 0) on a log grid over `interval`.
template <typename Scalar>
HypothesisReport check_hypotheses(const Potential<Scalar>& pot, const Interval& interval, int samples = 10000) {
    HypothesisReport report;
    report.samples = samples;
    auto [lo, hi] = sampling_window(interval);
    const double llo = std::log(lo);
    const double lhi = std::log(hi);
    for (int i = 0; i < samples; ++i) {
        const double t = samples == 1 ? 0.5 : static_cast<double>(i) / (samples - 1);
        const Scalar r = Scalar(std::exp(llo + t * (lhi - llo)));
        const Scalar v1 = pot.d1(r);
        const Scalar h2 = r * pot.d2(r) + v1;
        if (!(v1 > Scalar(0)) && report.h1) {
            report.h1 = false;
            report.first_h1_failure = static_cast<double>(r);
        }
        if (!(h2 > Scalar(0)) && report.h2) {
            report.h2 = false;
            report.first_h2_failure = static_cast<double>(r);
        }
    }
    return report;
}

template <typename Scalar>
HypothesisReport check_hypotheses(const Potential<Scalar>& pot, int samples = 10000) {
    return check_hypotheses(pot, pot.domain(), samples);
}

/// Throws DomainError unless H1 and H2 hold on the potential's own domain.
template <typename Scalar>
void require_hypotheses(const Potential<Scalar>& pot) {
    const auto report = check_hypotheses(pot);
    if (!report.h1)
        throw DomainError("H1 (v' > 0) fails on the domain near r = " + std::to_string(*report.first_h1_failure));
    if (!report.h2)
        throw DomainError("H2 (r v'' + v' > 0) fails on the domain near r = " +
                          std::to_string(*report.first_h2_failure));
}

inline std::string to_string(PotentialKind kind) {
    switch (kind) {
        case PotentialKind::Quartic: return "quartic";
        case PotentialKind::LennardJones126: return "lennard_jones";
        case PotentialKind::SphericalPendulum: return "spherical_pendulum";
        case PotentialKind::Custom: return "custom";
    }
    return "unknown";
}

inline std::string to_string(MetricKind kind) {
    switch (kind) {
        case MetricKind::Plane: return "plane";
        case MetricKind::Sphere: return "sphere";
        case MetricKind::Custom: return "custom";
    }
    return "unknown";
}

}  // namespace nosetori
