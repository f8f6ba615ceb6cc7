#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "nosetori/errors.hpp"
#include "nosetori/integrators.hpp"

namespace nosetori {

/// One-sided amplitude spectrum of a real series of length N sampled at
/// spacing h.  Bin k sits at angular frequency 2 pi k / (N h), k = 0..N/2.
/// Amplitudes are scaled so that their squares sum to the series power
/// sum_n x_n^2 (one-sided bins carry the weight of their mirror image).
struct Spectrum {
    Eigen::VectorXd frequencies;
    Eigen::VectorXd amplitudes;
    std::size_t n = 0;
    double h = 0.0;

    Eigen::Index bins() const { return amplitudes.size(); }
    double bin_width() const;
};

Eigen::VectorXcd real_dft(const Eigen::VectorXd& series);

/// Inverse of real_dft; `full` holds all N coefficients.
Eigen::VectorXd inverse_real_dft(const Eigen::VectorXcd& full);

Spectrum amplitude_spectrum(const Eigen::VectorXd& series, double h, bool demean);

/// Inclusive bin range.
struct BinRange {
    Eigen::Index lo = 0;
    Eigen::Index hi = 0;
    bool contains(Eigen::Index k) const { return k >= lo && k <= hi; }
};

struct Peak {
    Eigen::Index k = 0;
    double amplitude = 0.0;
};

/// Largest amplitude over k >= 1 outside the excluded ranges.
Peak dominant_peak(const Spectrum& spec, const std::vector<BinRange>& exclude = {});

/// Bin-quantized frequency ratio.  The band [lower, upper] is
/// [(k1-1)/(k2+1), (k1+1)/(k2-1)] and uncertainty = upper - lower.
struct RatioEstimate {
    Eigen::Index k1 = 0;
    Eigen::Index k2 = 0;
    double eta_hat = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    double uncertainty = 0.0;
    double omega1 = 0.0;
    double omega2 = 0.0;

    bool brackets(double eta) const { return eta >= lower && eta <= upper; }
};

RatioEstimate ratio_from_bins(Eigen::Index k1, Eigen::Index k2, std::size_t n, double h);

/// Which trajectory series carries a mode, and how to read its peak.
struct ModeSeries {
    ModeSeries(std::string series, std::vector<BinRange> excluded = {}) : name(std::move(series)), exclude(std::move(excluded)) {}
    ModeSeries(const char* series) : name(series) {}

    std::string name;
    double scale = 1.0;
    bool demean = true;
    std::vector<BinRange> exclude;
};

/// Named column of a trajectory: a state component (r, p_r, theta, p_theta,
/// s, S; x and p_x alias r and p_r) or a recorded observable.
Eigen::VectorXd trajectory_series(const Trajectory<double>& traj, const std::string& name);

/// Peak of the internal series, then the peak of the thermostat series with
/// every harmonic of the internal peak (within `separation` bins) masked.
/// The smaller bin is k1, so the modes may cross.
RatioEstimate measure_frequency_ratio(const Trajectory<double>& traj, const ModeSeries& thermostat,
                                      const ModeSeries& internal, Eigen::Index separation = 2);

}  // namespace nosetori
