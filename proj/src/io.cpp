#include "tdho/io.hpp"

#include "tdho/errors.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace tdho::io {

namespace {

std::string trim(const std::string& s)
{
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

} // namespace

std::string format_number(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.11e", x);
    return buf;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj)
{
    out << kTrajectoryHeader << '\n';
    for (const auto& r : traj.records) {
        out << format_number(r.t) << ',' << format_number(r.omega) << ',' << format_number(r.rho) << ','
            << format_number(r.chi.real()) << ',' << format_number(r.chi.imag()) << ',' << format_number(r.r) << ','
            << format_number(r.phi) << ',' << format_number(r.R) << ',' << format_number(r.Phi) << '\n';
    }
}

void write_sweep_csv(std::ostream& out, std::span<const SweepEntry> entries)
{
    out << kSweepHeader << '\n';
    for (const auto& e : entries) {
        out << format_number(e.epsilon) << ',' << format_number(e.R_sim) << ',' << format_number(e.R_formula) << ','
            << format_number(e.rel_err) << '\n';
    }
}

void write_contour_csv(std::ostream& out, const ContourGrid& grid)
{
    out << kContourHeader << '\n';
    for (const auto& c : grid.cells) {
        out << format_number(c.ratio) << ',' << format_number(c.omega0_eps) << ',' << format_number(c.R) << '\n';
    }
}

void write_sweep_points_csv(std::ostream& out, std::span<const SweepPoint> points)
{
    out << kSweepPointsHeader << '\n';
    for (const auto& p : points) {
        out << format_number(p.omega0) << ',' << format_number(p.omegaf) << ',' << format_number(p.epsilon) << ','
            << format_number(p.R) << '\n';
    }
}

void write_run_info(std::ostream& out, const Trajectory& traj)
{
    const auto& p = traj.profile;
    out << "profile=" << to_string(p.kind()) << '\n'
        << "omega0=" << format_number(p.omega0()) << '\n'
        << "omegaf=" << format_number(p.omegaf()) << '\n'
        << "t0=" << format_number(p.t0()) << '\n'
        << "epsilon=" << format_number(p.epsilon()) << '\n'
        << "n_slices=" << traj.n_slices << '\n'
        << "converged=" << (traj.converged ? "true" : "false") << '\n'
        << "achieved_delta=" << format_number(traj.achieved_delta) << '\n'
        << "saturation_clamps=" << traj.saturation_clamps << '\n'
        << "max_unitarity_residual=" << format_number(traj.max_unitarity_residual()) << '\n';
}

void write_summary(std::ostream& out, const Trajectory& traj, const PostTransitionSummary& s)
{
    write_run_info(out, traj);
    out << "window_start=" << format_number(s.window_start) << '\n'
        << "r_min=" << format_number(s.r_min) << '\n'
        << "r_max=" << format_number(s.r_max) << '\n'
        << "r_midpoint=" << format_number(s.r_midpoint) << '\n'
        << "period=" << (s.period ? format_number(*s.period) : std::string("nan")) << '\n'
        << "R_final=" << format_number(s.R_final) << '\n'
        << "R_std=" << format_number(s.R_std) << '\n';
}

void write_fit(std::ostream& out, const FitResult& fit)
{
    out << "c1=" << format_number(fit.c1) << '\n'
        << "c2=" << format_number(fit.c2) << '\n'
        << "residual_rms=" << format_number(fit.residual_rms) << '\n'
        << "n_points=" << fit.n_points << '\n';
}

std::vector<SweepPoint> read_sweep_points_csv(std::istream& in)
{
    std::vector<SweepPoint> out;
    std::string line;
    int line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim(line);
        if (line.empty() || line.front() == '#') {
            continue;
        }
        if (!header_seen) {
            header_seen = true;
            if (line != kSweepPointsHeader) {
                throw UsageError("sweep data: expected header '" + std::string(kSweepPointsHeader) + "'");
            }
            continue;
        }
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream fields(line);
        SweepPoint p;
        std::string extra;
        if (!(fields >> p.omega0 >> p.omegaf >> p.epsilon >> p.R) || (fields >> extra)) {
            throw UsageError("sweep data line " + std::to_string(line_no) + ": expected four numbers");
        }
        out.push_back(p);
    }
    return out;
}

std::map<std::string, std::string> parse_config(std::istream& in)
{
    std::map<std::string, std::string> out;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw UsageError("config line " + std::to_string(line_no) + ": expected 'key = value'");
        }
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) {
            throw UsageError("config line " + std::to_string(line_no) + ": empty key");
        }
        if (!out.emplace(key, value).second) {
            throw UsageError("config line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
        }
    }
    return out;
}

std::map<std::string, std::string> load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open config file '" + path + "'");
    }
    return parse_config(in);
}

} // namespace tdho::io
