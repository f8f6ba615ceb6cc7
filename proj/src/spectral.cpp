#include "nosetori/spectral.hpp"

#include <cmath>
#include <numbers>

#include <unsupported/Eigen/FFT>

namespace nosetori {

double Spectrum::bin_width() const { return 2.0 * std::numbers::pi / (static_cast<double>(n) * h); }

Eigen::VectorXcd real_dft(const Eigen::VectorXd& series) {
    Eigen::FFT<double> fft;
    std::vector<double> in(series.data(), series.data() + series.size());
    std::vector<std::complex<double>> out;
    fft.fwd(out, in);
    return Eigen::Map<Eigen::VectorXcd>(out.data(), static_cast<Eigen::Index>(out.size()));
}

Eigen::VectorXd inverse_real_dft(const Eigen::VectorXcd& full) {
    Eigen::FFT<double> fft;
    std::vector<std::complex<double>> in(full.data(), full.data() + full.size());
    std::vector<double> out;
    fft.inv(out, in);
    return Eigen::Map<Eigen::VectorXd>(out.data(), static_cast<Eigen::Index>(out.size()));
}

Spectrum amplitude_spectrum(const Eigen::VectorXd& series, double h, bool demean) {
    const Eigen::Index n = series.size();
    if (n < 4) throw SpectrumError("spectrum needs at least 4 samples, got " + std::to_string(n));
    if (!(h > 0.0)) throw SpectrumError("sample spacing must be positive");
    if (!series.allFinite()) throw SpectrumError("series contains non-finite values");

    const Eigen::VectorXd x = demean ? Eigen::VectorXd(series.array() - series.mean()) : series;
    const Eigen::VectorXcd X = real_dft(x);

    Spectrum spec;
    spec.n = static_cast<std::size_t>(n);
    spec.h = h;
    const Eigen::Index bins = n / 2 + 1;
    spec.frequencies.resize(bins);
    spec.amplitudes.resize(bins);
    const double dw = spec.bin_width();
    for (Eigen::Index k = 0; k < bins; ++k) {
        const bool self_mirror = k == 0 || (n % 2 == 0 && k == n / 2);
        const double w = self_mirror ? 1.0 : 2.0;
        spec.frequencies(k) = dw * static_cast<double>(k);
        spec.amplitudes(k) = std::abs(X(k)) * std::sqrt(w / static_cast<double>(n));
    }
    return spec;
}

Peak dominant_peak(const Spectrum& spec, const std::vector<BinRange>& exclude) {
    Peak best;
    bool found = false;
    for (Eigen::Index k = 1; k < spec.bins(); ++k) {
        bool skip = false;
        for (const auto& range : exclude) skip = skip || range.contains(k);
        if (skip) continue;
        if (!found || spec.amplitudes(k) > best.amplitude) {
            best = {k, spec.amplitudes(k)};
            found = true;
        }
    }
    if (!found) throw SpectrumError("no bins left after exclusion");
    return best;
}

RatioEstimate ratio_from_bins(Eigen::Index k1, Eigen::Index k2, std::size_t n, double h) {
    if (k2 <= 1) throw SpectrumError("fast-mode peak must sit above bin 1 for the error band");
    if (k1 < 1) throw SpectrumError("slow-mode peak must be at bin 1 or above");
    RatioEstimate est;
    est.k1 = k1;
    est.k2 = k2;
    const double a = static_cast<double>(k1);
    const double b = static_cast<double>(k2);
    est.eta_hat = a / b;
    est.lower = (a - 1.0) / (b + 1.0);
    est.upper = (a + 1.0) / (b - 1.0);
    est.uncertainty = est.upper - est.lower;
    const double dw = 2.0 * std::numbers::pi / (static_cast<double>(n) * h);
    est.omega1 = dw * a;
    est.omega2 = dw * b;
    return est;
}

Eigen::VectorXd trajectory_series(const Trajectory<double>& traj, const std::string& name) {
    static const std::pair<const char*, Eigen::Index> columns[] = {
        {"r", idx::r},         {"x", idx::r}, {"p_r", idx::p_r}, {"p_x", idx::p_r}, {"theta", idx::theta},
        {"p_theta", idx::p_theta}, {"s", idx::s}, {"S", idx::S}};
    for (const auto& [label, col] : columns)
        if (name == label) return traj.states.col(col);
    return traj.observable(name);
}

RatioEstimate measure_frequency_ratio(const Trajectory<double>& traj, const ModeSeries& thermostat,
                                      const ModeSeries& internal, Eigen::Index separation) {
    const double h = traj.sample_spacing;
    const auto internal_spec =
        amplitude_spectrum(internal.scale * trajectory_series(traj, internal.name), h, internal.demean);
    const auto thermo_spec =
        amplitude_spectrum(thermostat.scale * trajectory_series(traj, thermostat.name), h, thermostat.demean);
    const auto kb = dominant_peak(internal_spec, internal.exclude).k;
    auto exclude = thermostat.exclude;
    for (Eigen::Index m = 1; m * kb - separation < thermo_spec.bins(); ++m)
        exclude.push_back({m * kb - separation, m * kb + separation});
    const auto ka = dominant_peak(thermo_spec, exclude).k;
    return ratio_from_bins(std::min(ka, kb), std::max(ka, kb), thermo_spec.n, h);
}

}  // namespace nosetori
