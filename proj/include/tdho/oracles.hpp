#pragma once

// Analytic references for the final squeezing and the machinery to check
// them against simulation: the frequency-jump closed form, the sech ansatz
//
//   R(t_f; eps) = |rho_f| sech(c1 (|rho_f| + c2) w_min eps),  (c1, c2) = (2, 1),
//
// the adiabaticity measure derived from it, epsilon sweeps, a two-parameter
// least-squares fit of (c1, c2) and contour grids over (wf/w0, w0 eps).

#include "tdho/evolution.hpp"

#include <span>
#include <string>
#include <utility>
#include <vector>

namespace tdho {

inline constexpr double kAnsatzC1 = 2.0;
inline constexpr double kAnsatzC2 = 1.0;
// The ansatz was calibrated for frequency ratios up to this factor.
inline constexpr double kFitValidityRatio = 10.0;
inline constexpr double kDefaultAdiabaticThreshold = 0.1;

/// Squeezing parameter after an instantaneous jump w0 -> wf, with t measured
/// from the jump.
double jump_sp_closed_form(double omega0, double omegaf, double t);

/// The sech ansatz with explicit constants.
double ansatz_sp(double omega0, double omegaf, double epsilon, double c1, double c2);

/// The sech ansatz with (c1, c2) = (2, 1).
double fitted_sp(double omega0, double omegaf, double epsilon);

/// True when max(w0, wf) / min(w0, wf) <= 10.
bool within_fit_validity(double omega0, double omegaf);

/// dw/dt(t0) / (w_min (wf - w0) (|rho_f| + 1)) = 1 / (2 eps w_min (|rho_f| + 1)).
/// eps == 0 returns +infinity; wf == w0 throws DomainError.
double adiabaticity_measure(double omega0, double omegaf, double epsilon);

inline bool is_adiabatic(double measure, double threshold = kDefaultAdiabaticThreshold)
{
    return measure < threshold;
}

struct SweepOptions {
    double t0 = 10.0;
    int jobs = 1;
};

struct SweepEntry {
    double epsilon = 0.0;
    double R_sim = 0.0;
    double R_formula = 0.0;
    double rel_err = 0.0;
    bool converged = false;
    long n_slices = 0;
    // Non-empty when this entry's propagation failed; the numbers are then NaN.
    std::string error;
};

/// For each eps: build the tanh profile (a jump for eps = 0), run
/// propagate_converged with t_end defaulted per profile, and take R_final
/// from the post-transition summary.
std::vector<SweepEntry> sweep_final_sp(double omega0, double omegaf, std::span<const double> epsilons,
                                       const SimulationConfig& cfg, const SweepOptions& opts = {});

struct SweepPoint {
    double omega0 = 1.0;
    double omegaf = 1.0;
    double epsilon = 0.0;
    double R = 0.0;
};

struct FitOptions {
    double c1_init = 1.0;
    double c2_init = 0.5;
    int max_iterations = 500;
    // cond(J^T J) above this flags (c1, c2) as poorly constrained.
    double condition_warning = 1e10;
};

struct FitResult {
    double c1 = 0.0;
    double c2 = 0.0;
    double residual_rms = 0.0;
    std::size_t n_points = 0;
    int iterations = 0;
    double condition = 0.0;
    std::string grid;
    std::vector<std::string> warnings;
};

/// Damped Gauss-Newton (Levenberg-Marquardt) fit of (c1, c2) with residuals
/// ansatz_sp - R. Throws RankDeficiencyError when no point carries
/// information (every eps or rho_f is zero).
FitResult fit_ansatz(std::span<const SweepPoint> data, const FitOptions& opts = {});

/// Ratios {1.5, 2, 3, 4, 5} and their reciprocals.
std::vector<double> default_fit_ratios();
/// {0, 0.1, 0.2, 0.4, 0.8, 1.2, 1.6, 2.0}.
std::vector<double> default_fit_epsilons();

enum class ContourMode { above_unity, below_unity };
enum class ContourSource { formula, simulation };

struct ContourCell {
    double ratio = 0.0;
    double omega0_eps = 0.0;
    double R = 0.0;
    bool outside_validity = false;
    std::string error;
};

struct ContourGrid {
    ContourMode mode = ContourMode::above_unity;
    ContourSource source = ContourSource::formula;
    std::size_t n_ratio = 0;
    std::size_t n_eps = 0;
    // Ratio-major: cells[i * n_eps + k].
    std::vector<ContourCell> cells;
    std::size_t n_outside_validity = 0;
};

/// Evaluates R on the tensor grid of wf/w0 (linear spacing over ratio_range)
/// and w0 eps (linear over epsilon_range) with w0 = 1.
ContourGrid contour_grid(std::pair<double, double> ratio_range, std::pair<double, double> epsilon_range,
                         std::size_t n_ratio, std::size_t n_eps, ContourMode mode, ContourSource source,
                         const SimulationConfig& cfg = {}, const SweepOptions& opts = {});

} // namespace tdho
