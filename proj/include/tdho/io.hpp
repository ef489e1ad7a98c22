#pragma once

#include "tdho/evolution.hpp"
#include "tdho/oracles.hpp"

#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace tdho::io {

// 12 significant digits, lowercase scientific ("1.23456789012e-03").
std::string format_number(double x);

inline constexpr const char* kTrajectoryHeader = "t,omega,rho,chi_re,chi_im,r,phi,R,Phi";
inline constexpr const char* kSweepHeader = "epsilon,R_sim,R_formula,rel_err";
inline constexpr const char* kContourHeader = "ratio,omega0_eps,R";
inline constexpr const char* kSweepPointsHeader = "omega0,omegaf,epsilon,R";

void write_trajectory_csv(std::ostream& out, const Trajectory& traj);
void write_sweep_csv(std::ostream& out, std::span<const SweepEntry> entries);
void write_contour_csv(std::ostream& out, const ContourGrid& grid);
void write_sweep_points_csv(std::ostream& out, std::span<const SweepPoint> points);

// key=value text. write_summary starts with the write_run_info lines.
void write_run_info(std::ostream& out, const Trajectory& traj);
void write_summary(std::ostream& out, const Trajectory& traj, const PostTransitionSummary& s);
void write_fit(std::ostream& out, const FitResult& fit);

/// Reads the `omega0,omegaf,epsilon,R` table written by write_sweep_points_csv.
std::vector<SweepPoint> read_sweep_points_csv(std::istream& in);

/// `key = value` per line, '#' starts a comment, blank lines ignored.
/// Duplicate keys or lines without '=' throw UsageError.
std::map<std::string, std::string> parse_config(std::istream& in);
std::map<std::string, std::string> load_config(const std::string& path);

} // namespace tdho::io
