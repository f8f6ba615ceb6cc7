#include "nosetori/io.hpp"

#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace nosetori {

namespace {

constexpr char kMagic[8] = {'N', 'S', 'T', 'R', 'A', 'J', '0', '1'};

void write_row(std::ostream& out, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
    out << '\n';
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    return cells;
}

double parse_double(const std::string& cell) {
    double v = 0.0;
    const auto* end = cell.data() + cell.size();
    auto [ptr, ec] = std::from_chars(cell.data(), end, v);
    if (ec != std::errc() || ptr != end) throw ConfigError("malformed number '" + cell + "'");
    return v;
}

Eigen::RowVectorXd trajectory_row(const Trajectory<double>& traj, Eigen::Index i,
                                  const std::vector<Eigen::Index>& obs_cols) {
    Eigen::RowVectorXd row(9);
    row(0) = traj.times(i);
    row.segment(1, 6) = traj.states.row(i);
    for (int j = 0; j < 2; ++j) row(7 + j) = obs_cols[j] < 0 ? NAN : traj.observables(i, obs_cols[j]);
    return row;
}

std::vector<Eigen::Index> observable_columns(const Trajectory<double>& traj) {
    std::vector<Eigen::Index> cols;
    for (const char* name : {"H", "T_inst"}) {
        Eigen::Index found = -1;
        for (std::size_t j = 0; j < traj.observable_names.size(); ++j)
            if (traj.observable_names[j] == name) found = static_cast<Eigen::Index>(j);
        cols.push_back(found);
    }
    return cols;
}

Trajectory<double> from_table(const Eigen::MatrixXd& table) {
    Trajectory<double> traj;
    traj.times = table.col(0);
    traj.states = table.middleCols(1, 6);
    traj.observable_names = {"H", "T_inst"};
    traj.observables = table.middleCols(7, 2);
    traj.sample_spacing = table.rows() > 1 ? table(1, 0) - table(0, 0) : 0.0;
    return traj;
}

}  // namespace

std::string format_double(double value) {
    if (std::isnan(value)) return "nan";
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, ptr);
}

void write_trajectory_csv(std::ostream& out, const Trajectory<double>& traj) {
    write_row(out, kTrajectoryColumns);
    const auto cols = observable_columns(traj);
    std::vector<std::string> cells(9);
    for (Eigen::Index i = 0; i < traj.size(); ++i) {
        const auto row = trajectory_row(traj, i, cols);
        for (int j = 0; j < 9; ++j) cells[j] = format_double(row(j));
        write_row(out, cells);
    }
}

Trajectory<double> read_trajectory_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || split(line) != kTrajectoryColumns)
        throw ConfigError("trajectory CSV header must be " + std::string("t,r,p_r,theta,p_theta,s,S,H,T_inst"));
    std::vector<Eigen::RowVectorXd> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto cells = split(line);
        if (cells.size() != 9) throw ConfigError("trajectory CSV row " + std::to_string(rows.size() + 2) +
                                                 " has " + std::to_string(cells.size()) + " columns");
        Eigen::RowVectorXd row(9);
        for (int j = 0; j < 9; ++j) row(j) = cells[j] == "nan" ? NAN : parse_double(cells[j]);
        rows.push_back(row);
    }
    Eigen::MatrixXd table(static_cast<Eigen::Index>(rows.size()), 9);
    for (std::size_t i = 0; i < rows.size(); ++i) table.row(static_cast<Eigen::Index>(i)) = rows[i];
    return from_table(table);
}

void write_trajectory_binary(std::ostream& out, const Trajectory<double>& traj) {
    static_assert(std::endian::native == std::endian::little, "binary dump assumes a little-endian host");
    const std::uint64_t rows = static_cast<std::uint64_t>(traj.size());
    const std::uint32_t cols = 9;
    out.write(kMagic, sizeof(kMagic));
    out.write(reinterpret_cast<const char*>(&rows), sizeof(rows));
    out.write(reinterpret_cast<const char*>(&cols), sizeof(cols));
    const auto obs = observable_columns(traj);
    for (Eigen::Index i = 0; i < traj.size(); ++i) {
        const Eigen::RowVectorXd row = trajectory_row(traj, i, obs);
        out.write(reinterpret_cast<const char*>(row.data()), 9 * sizeof(double));
    }
}

Trajectory<double> read_trajectory_binary(std::istream& in) {
    char magic[8];
    std::uint64_t rows = 0;
    std::uint32_t cols = 0;
    if (!in.read(magic, 8) || std::memcmp(magic, kMagic, 8) != 0) throw ConfigError("not a NSTRAJ01 dump");
    in.read(reinterpret_cast<char*>(&rows), sizeof(rows));
    in.read(reinterpret_cast<char*>(&cols), sizeof(cols));
    if (!in || cols != 9) throw ConfigError("corrupt NSTRAJ01 header");
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> table(static_cast<Eigen::Index>(rows), 9);
    if (!in.read(reinterpret_cast<char*>(table.data()), static_cast<std::streamsize>(rows * 9 * sizeof(double))))
        throw ConfigError("truncated NSTRAJ01 dump");
    return from_table(table);
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepPoint>& points) {
    write_row(out, kSweepColumns);
    for (const auto& p : points) {
        std::string status = p.status;
        for (char& ch : status)
            if (ch == ',' || ch == '\n') ch = ';';
        write_row(out, {format_double(p.x), format_double(p.omega1), format_double(p.omega2), format_double(p.eta),
                        p.degenerate ? "1" : "0", status});
    }
}

void write_spectrum_csv(std::ostream& out, const Spectrum& spec) {
    write_row(out, kSpectrumColumns);
    for (Eigen::Index k = 0; k < spec.bins(); ++k)
        write_row(out, {std::to_string(k), format_double(spec.frequencies(k)), format_double(spec.amplitudes(k))});
}

void write_drift_csv(std::ostream& out, const DriftReport& drift) {
    write_row(out, kDriftColumns);
    for (Eigen::Index i = 0; i < drift.times.size(); ++i)
        write_row(out, {format_double(drift.times(i)), format_double(drift.energy_drift(i)),
                        format_double(drift.ptheta_drift(i))});
}

nlohmann::json equilibrium_json(const std::string& potential, const EquilibriumPoint<double>& eq,
                                const EquilibriumResiduals& residuals) {
    return {{"potential", potential},
            {"T", eq.T},
            {"mu", eq.mu},
            {"r_star", eq.r_star},
            {"tau", eq.tau},
            {"s0", eq.s0},
            {"residuals",
             {{"temperature", residuals.temperature},
              {"tau", residuals.tau},
              {"stationarity", residuals.stationarity}}}};
}

nlohmann::json linear_model_json(const LinearModel<double>& m) {
    return {{"A", m.coeffs.A},         {"B", m.coeffs.B},     {"C", m.coeffs.C},
            {"D", m.coeffs.D},         {"E", m.coeffs.E},     {"omega1", m.omega1},
            {"omega2", m.omega2},      {"eta", m.eta},        {"hessian_posdef", m.hessian_posdef},
            {"degenerate", m.degenerate}};
}

nlohmann::json ratio_json(const RatioEstimate& e) {
    return {{"k1", e.k1},       {"k2", e.k2},         {"eta_hat", e.eta_hat},         {"lower", e.lower},
            {"upper", e.upper}, {"omega1", e.omega1}, {"omega2", e.omega2}, {"uncertainty", e.uncertainty}};
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace nosetori
