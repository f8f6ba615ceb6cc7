#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "nosetori/diagnostics.hpp"
#include "nosetori/equilibria.hpp"
#include "nosetori/integrators.hpp"
#include "nosetori/linear_analysis.hpp"
#include "nosetori/spectral.hpp"

namespace nosetori {

// CSV layouts; the header row is always the first line.
inline const std::vector<std::string> kTrajectoryColumns = {"t", "r", "p_r", "theta", "p_theta",
                                                            "s", "S", "H", "T_inst"};
inline const std::vector<std::string> kSweepColumns = {"x", "omega1", "omega2", "eta", "degenerate", "status"};
inline const std::vector<std::string> kSpectrumColumns = {"k", "frequency", "amplitude"};
inline const std::vector<std::string> kDriftColumns = {"t", "dH", "dp_theta"};

/// Shortest round-trip representation of a double.
std::string format_double(double value);

void write_trajectory_csv(std::ostream& out, const Trajectory<double>& traj);

/// Reads the nine-column layout written by write_trajectory_csv.  H and T_inst
/// become observables.
Trajectory<double> read_trajectory_csv(std::istream& in);

/// Binary dump: 8-byte magic "NSTRAJ01", uint64 rows, uint32 columns, then
/// rows x columns little-endian IEEE doubles in row-major order using the
/// trajectory CSV column layout.
void write_trajectory_binary(std::ostream& out, const Trajectory<double>& traj);
Trajectory<double> read_trajectory_binary(std::istream& in);

void write_sweep_csv(std::ostream& out, const std::vector<SweepPoint>& points);
void write_spectrum_csv(std::ostream& out, const Spectrum& spec);
void write_drift_csv(std::ostream& out, const DriftReport& drift);

nlohmann::json equilibrium_json(const std::string& potential, const EquilibriumPoint<double>& eq,
                                const EquilibriumResiduals& residuals);
nlohmann::json linear_model_json(const LinearModel<double>& model);
nlohmann::json ratio_json(const RatioEstimate& est);

/// Writes text to a file, creating parent directories.
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace nosetori
