#pragma once

// Time evolution of an oscillator that starts in the ground state of w0.
// Time is split into N slices of width tau during which w is held constant.
// The state stays a squeezed vacuum of the initial Hamiltonian, encoded by
// the complex variable chi, and is propagated by
//
//   chi_j = a_j + chi_{j-1} b_j / (1 - chi_{j-1} a_j),   chi_0 = 0.
//
// Each recorded chi is also re-expressed on the instantaneous basis.

#include "tdho/core_algebra.hpp"
#include "tdho/frequency.hpp"

#include <optional>
#include <vector>

namespace tdho {

enum class SamplingRule {
    right_endpoint, // w_j = w(t_start + j tau)
    midpoint,       // w_j = w(t_start + (j - 1/2) tau)
};

// Deliberate corruption of the step coefficients, used to prove that the
// verification checks can fail.
enum class StepMutation { none, negate_b };

struct SimulationConfig {
    double t_start = 0.0;
    // Unset: t0 + 3 eps + 3 pi / wf (last sample time for sampled profiles).
    std::optional<double> t_end;
    long n_slices = 4096;
    long record_stride = 1;
    double convergence_tol = 1e-6;
    long n_max = 1L << 24;
    SamplingRule sampling = SamplingRule::right_endpoint;
    StepMutation mutation = StepMutation::none;
};

double default_t_end(const FrequencyProfile& p);

struct StepCoeffs {
    complex a;
    complex b;
};

StepCoeffs step_coeffs(double omega_j, double omega0, double tau);

struct TrajectoryRecord {
    double t = 0.0;
    double omega = 0.0;
    double rho = 0.0;
    complex chi;
    double r = 0.0;
    double phi = 0.0;
    double R = 0.0;
    double Phi = 0.0;
    double beta_mod = 1.0;
    double unitarity_residual = 0.0;
};

struct Trajectory {
    FrequencyProfile profile;
    std::vector<TrajectoryRecord> records;
    long n_slices = 0;
    long record_stride = 1;
    bool converged = false;
    double achieved_delta = 0.0;
    // Sup-norm change of r(t) at each doubling of N.
    std::vector<double> delta_history;
    long saturation_clamps = 0;

    double max_unitarity_residual() const;
};

/// Single propagation at fixed N = cfg.n_slices, recording every
/// cfg.record_stride-th step plus the initial state.
Trajectory propagate(const FrequencyProfile& p, const SimulationConfig& cfg);

/// Doubles N (and the record stride, so records stay aligned) until the sup
/// over records of |r_N - r_2N| drops below cfg.convergence_tol or the next
/// doubling would exceed cfg.n_max. Returns the finest trajectory.
Trajectory propagate_converged(const FrequencyProfile& p, const SimulationConfig& cfg);

struct PostTransitionSummary {
    double window_start = 0.0;
    std::size_t n_records = 0;
    double r_min = 0.0;
    double r_max = 0.0;
    double r_midpoint = 0.0;
    double r_amplitude = 0.0;
    // Mean spacing of successive maxima of r(t); empty when fewer than two
    // maxima were found.
    std::optional<double> period;
    std::size_t n_maxima = 0;
    double R_final = 0.0;
    double R_std = 0.0;
};

/// Statistics over t > t0 + 3 eps. Needs at least three periods pi / wf of
/// data in the window, otherwise InsufficientWindowError.
PostTransitionSummary post_transition_summary(const Trajectory& traj, const FrequencyProfile& p);
PostTransitionSummary post_transition_summary(const Trajectory& traj, double window_start, double omegaf);

} // namespace tdho
