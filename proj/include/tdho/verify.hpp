#pragma once

// Acceptance checks for the simulator and its analytic references. Each
// criterion reports the measured values next to its pinned tolerance.

#include "tdho/evolution.hpp"
#include "tdho/oracles.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace tdho::verify {

/// Fixed-profile runs (criteria 1-5): 65536 seed slices, up to 2^26.
SimulationConfig figure_run_config();
/// Sweep runs (criteria 6 and 8).
SimulationConfig sweep_run_config();

struct VerifyOptions {
    int jobs = 1;
    double unitarity_tol = 1e-10;
    std::size_t property_cases = 10000;
    std::uint64_t seed = 0x5eedf00dULL;
    StepMutation mutation = StepMutation::none;
    SimulationConfig figure_config = figure_run_config();
    SimulationConfig sweep_config = sweep_run_config();
};

struct CheckResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
};

class AcceptanceSuite {
public:
    static constexpr int kCriteria = 9;

    explicit AcceptanceSuite(VerifyOptions opts = {});

    /// Runs criterion `id` in [1, kCriteria].
    CheckResult run(int id);
    std::vector<CheckResult> run_all();

private:
    struct FigureRun {
        FrequencyProfile profile;
        Trajectory traj;
        PostTransitionSummary summary;
    };

    const FigureRun& figure_run(double epsilon);
    double sweep_point(double ratio, double epsilon);
    void fill_sweep(const std::vector<std::pair<double, double>>& points);

    CheckResult jump_oracle();
    CheckResult jump_extrema();
    CheckResult midpoint_universality();
    CheckResult instantaneous_constancy();
    CheckResult unitarity();
    CheckResult formula_agreement();
    CheckResult contour_anchors();
    CheckResult fit_recovery();
    CheckResult property_suite();

    VerifyOptions opts_;
    std::map<double, FigureRun> figure_runs_;
    std::map<std::pair<double, double>, double> sweep_cache_;
};

/// One line per check: "[PASS] 1 name: detail".
std::string format_result(const CheckResult& r);

} // namespace tdho::verify
