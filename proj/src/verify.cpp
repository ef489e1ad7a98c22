#include "tdho/verify.hpp"

#include "tdho/core_algebra.hpp"
#include "tdho/errors.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace tdho::verify {

namespace {

constexpr double kOmega0 = 1.0;
constexpr double kOmegaF = 3.0;
constexpr double kT0 = 10.0;
constexpr double kSuddenEps = 1e-3;
constexpr double kFigureEps[] = {kSuddenEps, 0.5, 1.0, 1.5};

// Tolerances pinned from the acceptance criteria.
constexpr double kJumpSupTol = 1e-3;
constexpr double kExtremumTol = 1e-3;
constexpr double kPeriodRelTol = 0.01;
constexpr double kMidpointTol = 1e-2;
constexpr double kRStdTol = 1e-3;
constexpr double kSuddenRTol = 1e-2;
constexpr double kFormulaRelTol = 0.05;
constexpr double kFitSelfTol = 1e-6;
constexpr double kFitC1Lo = 1.8, kFitC1Hi = 2.2;
constexpr double kFitC2Lo = 0.85, kFitC2Hi = 1.15;
constexpr double kFockNormTol = 1e-8;

std::string num(double x)
{
    std::ostringstream s;
    s.precision(6);
    s << x;
    return s.str();
}

std::vector<double> both_directions(std::initializer_list<double> ratios)
{
    std::vector<double> out(ratios);
    for (double r : ratios) {
        out.push_back(1.0 / r);
    }
    return out;
}

} // namespace

SimulationConfig figure_run_config()
{
    SimulationConfig cfg;
    cfg.n_slices = 1L << 16;
    cfg.record_stride = 1;
    cfg.convergence_tol = 1e-6;
    // The near-sudden run needs 2^25 slices before |r_N - r_2N| < 1e-6.
    cfg.n_max = 1L << 26;
    return cfg;
}

SimulationConfig sweep_run_config()
{
    SimulationConfig cfg;
    cfg.n_slices = 1L << 12;
    cfg.record_stride = 1;
    cfg.convergence_tol = 1e-6;
    cfg.n_max = 1L << 24;
    return cfg;
}

AcceptanceSuite::AcceptanceSuite(VerifyOptions opts)
    : opts_(std::move(opts))
{
    opts_.figure_config.mutation = opts_.mutation;
    opts_.sweep_config.mutation = opts_.mutation;
}

const AcceptanceSuite::FigureRun& AcceptanceSuite::figure_run(double epsilon)
{
    auto it = figure_runs_.find(epsilon);
    if (it == figure_runs_.end()) {
        FrequencyProfile p = FrequencyProfile::tanh(kOmega0, kOmegaF, kT0, epsilon);
        Trajectory traj = propagate_converged(p, opts_.figure_config);
        PostTransitionSummary s = post_transition_summary(traj, p);
        it = figure_runs_.emplace(epsilon, FigureRun{std::move(p), std::move(traj), s}).first;
    }
    return it->second;
}

void AcceptanceSuite::fill_sweep(const std::vector<std::pair<double, double>>& points)
{
    std::map<double, std::vector<double>> missing;
    for (const auto& [ratio, eps] : points) {
        if (!sweep_cache_.count({ratio, eps})) {
            missing[ratio].push_back(eps);
        }
    }
    for (auto& [ratio, epsilons] : missing) {
        std::sort(epsilons.begin(), epsilons.end());
        epsilons.erase(std::unique(epsilons.begin(), epsilons.end()), epsilons.end());
        const auto entries =
            sweep_final_sp(kOmega0, ratio * kOmega0, epsilons, opts_.sweep_config, SweepOptions{kT0, opts_.jobs});
        for (const auto& e : entries) {
            if (!e.error.empty()) {
                throw NumericalError("sweep point ratio=" + num(ratio) + " eps=" + num(e.epsilon) + ": " + e.error);
            }
            sweep_cache_[{ratio, e.epsilon}] = e.R_sim;
        }
    }
}

double AcceptanceSuite::sweep_point(double ratio, double epsilon)
{
    fill_sweep({{ratio, epsilon}});
    return sweep_cache_.at({ratio, epsilon});
}

CheckResult AcceptanceSuite::run(int id)
{
    try {
        switch (id) {
        case 1:
            return jump_oracle();
        case 2:
            return jump_extrema();
        case 3:
            return midpoint_universality();
        case 4:
            return instantaneous_constancy();
        case 5:
            return unitarity();
        case 6:
            return formula_agreement();
        case 7:
            return contour_anchors();
        case 8:
            return fit_recovery();
        case 9:
            return property_suite();
        default:
            break;
        }
    } catch (const Error& e) {
        return {id, "criterion " + std::to_string(id), false, std::string("error: ") + e.what()};
    }
    throw UsageError("no acceptance criterion " + std::to_string(id));
}

std::vector<CheckResult> AcceptanceSuite::run_all()
{
    std::vector<CheckResult> out;
    for (int id = 1; id <= kCriteria; ++id) {
        out.push_back(run(id));
    }
    return out;
}

CheckResult AcceptanceSuite::jump_oracle()
{
    const FigureRun& run = figure_run(kSuddenEps);
    const double t_lo = kT0 + 3.0 * kSuddenEps;
    const double t_hi = t_lo + 3.0 * pi / kOmegaF;
    double sup = 0.0;
    std::size_t n = 0;
    for (const auto& rec : run.traj.records) {
        if (rec.t > t_lo && rec.t <= t_hi + 1e-12) {
            sup = std::max(sup, std::abs(rec.r - jump_sp_closed_form(kOmega0, kOmegaF, rec.t - kT0)));
            ++n;
        }
    }
    CheckResult r{1, "jump-oracle equivalence", false, {}};
    r.pass = run.traj.converged && n > 0 && sup <= kJumpSupTol;
    r.detail = "sup|r - r_jump| = " + num(sup) + " (tol " + num(kJumpSupTol) + ") over " + std::to_string(n)
               + " records; N = " + std::to_string(run.traj.n_slices)
               + (run.traj.converged ? ", converged" : ", NOT converged") + " (delta "
               + num(run.traj.achieved_delta) + ")";
    return r;
}

CheckResult AcceptanceSuite::jump_extrema()
{
    const FigureRun& run = figure_run(kSuddenEps);
    const auto& s = run.summary;
    const double r_peak = std::log(kOmegaF / kOmega0);
    const double period = pi / kOmegaF;
    const double period_err = s.period ? std::abs(*s.period - period) / period : INFINITY;
    CheckResult r{2, "jump extrema and period", false, {}};
    r.pass = std::abs(s.r_max - r_peak) <= kExtremumTol && s.r_min <= kExtremumTol && period_err <= kPeriodRelTol;
    r.detail = "r_max = " + num(s.r_max) + " (ln 3 = " + num(r_peak) + "), r_min = " + num(s.r_min)
               + ", period = " + (s.period ? num(*s.period) : std::string("n/a")) + " (pi/3, rel err "
               + num(period_err) + ")";
    return r;
}

CheckResult AcceptanceSuite::midpoint_universality()
{
    const double rho_f = 0.5 * std::log(kOmegaF / kOmega0);
    CheckResult r{3, "midpoint universality", true, {}};
    double prev_amp = INFINITY;
    std::ostringstream detail;
    for (double eps : {0.5, 1.0, 1.5}) {
        const auto& s = figure_run(eps).summary;
        const bool mid_ok = std::abs(s.r_midpoint - rho_f) <= kMidpointTol;
        const bool amp_ok = s.r_amplitude < prev_amp;
        r.pass = r.pass && mid_ok && amp_ok;
        prev_amp = s.r_amplitude;
        detail << "eps=" << eps << ": midpoint " << num(s.r_midpoint) << ", amplitude " << num(s.r_amplitude) << "; ";
    }
    detail << "rho_f = " << num(rho_f);
    r.detail = detail.str();
    return r;
}

CheckResult AcceptanceSuite::instantaneous_constancy()
{
    const double rho_f = 0.5 * std::log(kOmegaF / kOmega0);
    CheckResult r{4, "instantaneous-basis constancy", true, {}};
    double prev = INFINITY;
    std::ostringstream detail;
    for (double eps : kFigureEps) {
        const auto& s = figure_run(eps).summary;
        r.pass = r.pass && s.R_std < kRStdTol && s.R_final < prev;
        prev = s.R_final;
        detail << "eps=" << eps << ": R_final " << num(s.R_final) << " (std " << num(s.R_std) << "); ";
    }
    const double sudden = figure_run(kSuddenEps).summary.R_final;
    r.pass = r.pass && std::abs(sudden - rho_f) <= kSuddenRTol;
    detail << "rho_f = " << num(rho_f);
    r.detail = detail.str();
    return r;
}

CheckResult AcceptanceSuite::unitarity()
{
    double worst = 0.0;
    std::size_t n = 0;
    for (double eps : kFigureEps) {
        const auto& traj = figure_run(eps).traj;
        worst = std::max(worst, traj.max_unitarity_residual());
        n += traj.records.size();
    }
    CheckResult r{5, "unitarity |alpha|^2 + |beta| = 1", worst <= opts_.unitarity_tol, {}};
    r.detail = "max residual " + num(worst) + " over " + std::to_string(n) + " records (tol "
               + num(opts_.unitarity_tol) + ")";
    return r;
}

CheckResult AcceptanceSuite::formula_agreement()
{
    const auto ratios = both_directions({1.5, 2.0, 3.0, 5.0});
    const double epsilons[] = {0.1, 0.4, 0.8, 1.6};
    std::vector<std::pair<double, double>> points;
    for (double k : ratios) {
        for (double e : epsilons) {
            points.emplace_back(k, e);
        }
    }
    fill_sweep(points);

    double worst = 0.0;
    std::pair<double, double> worst_at{0.0, 0.0};
    std::size_t failing = 0;
    for (const auto& [k, e] : points) {
        const double formula = fitted_sp(kOmega0, k * kOmega0, e);
        const double rel = std::abs(sweep_point(k, e) - formula) / formula;
        if (rel > kFormulaRelTol) {
            ++failing;
        }
        if (rel > worst) {
            worst = rel;
            worst_at = {k, e};
        }
    }
    CheckResult r{6, "simulation vs sech formula", failing == 0, {}};
    r.detail = std::to_string(failing) + "/" + std::to_string(points.size()) + " cells exceed " + num(kFormulaRelTol)
               + " relative error; worst " + num(worst) + " at ratio " + num(worst_at.first) + ", eps "
               + num(worst_at.second);
    return r;
}

CheckResult AcceptanceSuite::contour_anchors()
{
    auto cell_at = [](const ContourGrid& g, double ratio, double eps) {
        const ContourCell* best = nullptr;
        double dist = INFINITY;
        for (const auto& c : g.cells) {
            const double d = std::hypot(c.ratio - ratio, c.omega0_eps - eps);
            if (d < dist) {
                dist = d;
                best = &c;
            }
        }
        return *best;
    };
    const ContourGrid above =
        contour_grid({1.0, 10.0}, {0.0, 2.0}, 10, 11, ContourMode::above_unity, ContourSource::formula);
    const ContourGrid below =
        contour_grid({0.1, 1.0}, {0.0, 2.0}, 10, 11, ContourMode::below_unity, ContourSource::formula);
    const ContourCell up = cell_at(above, 5.0, 0.4);
    const ContourCell down = cell_at(below, 0.2, 0.4);
    const bool up_ok = up.R > 0.3 && up.R < 0.4;
    const bool down_ok = down.R > 0.8 && down.R < 0.9;
    CheckResult r{7, "contour anchors", up_ok && down_ok, {}};
    r.detail = "R(ratio 5, w0 eps 0.4) = " + num(up.R) + (up_ok ? " in" : " NOT in") + " (0.3, 0.4); "
               + "R(ratio 0.2, w0 eps 0.4) = " + num(down.R) + (down_ok ? " in" : " NOT in") + " (0.8, 0.9)";
    return r;
}

CheckResult AcceptanceSuite::fit_recovery()
{
    const auto ratios = default_fit_ratios();
    const auto epsilons = default_fit_epsilons();

    std::vector<SweepPoint> formula_data;
    std::vector<std::pair<double, double>> points;
    for (double k : ratios) {
        for (double e : epsilons) {
            formula_data.push_back({kOmega0, k * kOmega0, e, fitted_sp(kOmega0, k * kOmega0, e)});
            points.emplace_back(k, e);
        }
    }
    const FitResult self = fit_ansatz(formula_data);
    const bool self_ok = std::abs(self.c1 - kAnsatzC1) <= kFitSelfTol && std::abs(self.c2 - kAnsatzC2) <= kFitSelfTol;

    fill_sweep(points);
    std::vector<SweepPoint> sim_data;
    for (const auto& [k, e] : points) {
        sim_data.push_back({kOmega0, k * kOmega0, e, sweep_point(k, e)});
    }
    const FitResult sim = fit_ansatz(sim_data);
    const bool sim_ok = sim.c1 >= kFitC1Lo && sim.c1 <= kFitC1Hi && sim.c2 >= kFitC2Lo && sim.c2 <= kFitC2Hi;

    CheckResult r{8, "ansatz fit recovery", self_ok && sim_ok, {}};
    r.detail = "formula data: (c1, c2) = (" + num(self.c1) + ", " + num(self.c2) + ")" + (self_ok ? " ok" : " FAIL")
               + "; simulation data (" + std::to_string(sim.n_points) + " points): (c1, c2) = (" + num(sim.c1) + ", "
               + num(sim.c2) + "), rms " + num(sim.residual_rms) + (sim_ok ? " ok" : " FAIL")
               + " [window c1 in [1.8, 2.2], c2 in [0.85, 1.15]]";
    return r;
}

CheckResult AcceptanceSuite::property_suite()
{
    std::mt19937_64 rng(opts_.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };
    const std::size_t cases = opts_.property_cases;
    std::vector<std::string> failures;
    std::ostringstream summary;

    auto report = [&](const char* name, double worst, double tol) {
        summary << name << " " << num(worst) << "; ";
        if (!(worst <= tol)) {
            failures.push_back(std::string(name) + " worst " + num(worst) + " > " + num(tol));
        }
    };

    {
        // rho = 0: both bases coincide.
        double worst = 0.0;
        for (std::size_t i = 0; i < cases; ++i) {
            const SqueezeParams z{uniform(0.0, 3.0), uniform(-pi, pi)};
            const InstSqueezeParams inst = bch_to_inst(compose_bch(z, bogoliubov_coeffs(0.0)));
            worst = std::max(worst, std::abs(inst.R - z.r));
            if (z.r > 1e-6) {
                worst = std::max(worst, std::abs(wrap_phase(inst.Phi - z.phi)));
            }
        }
        report("basis-coincidence", worst, 1e-10);
    }
    {
        long mismatches = 0;
        for (std::size_t i = 0; i < cases; ++i) {
            const complex zeta = std::polar(uniform(0.0, 3.0), uniform(-pi, pi));
            const LambdaCoeffs l = lambda_coeffs(zeta, bogoliubov_coeffs(uniform(-1.2, 1.2)));
            mismatches += (l.minus != -std::conj(l.plus)) ? 1 : 0;
        }
        report("lambda-conjugation", static_cast<double>(mismatches), 0.0);
    }
    {
        // Extremes at lambda = phi/2 and phi/2 + pi/2, bounds everywhere else.
        double worst = 0.0;
        for (std::size_t i = 0; i < cases; ++i) {
            const SqueezeParams s{uniform(0.0, 3.0), uniform(-pi, pi)};
            const double lo = 0.5 * std::exp(-2.0 * s.r);
            const double hi = 0.5 * std::exp(2.0 * s.r);
            const double scale = hi;
            worst = std::max(worst, std::abs(quadrature_variance(s, 0.5 * s.phi) - lo) / scale);
            worst = std::max(worst, std::abs(quadrature_variance(s, 0.5 * s.phi + 0.5 * pi) - hi) / scale);
            const double v = quadrature_variance(s, uniform(-pi, pi));
            worst = std::max(worst, std::max(lo - v, v - hi) / scale);
        }
        report("variance-extrema", worst, 1e-12);
    }
    {
        double worst = 0.0;
        for (std::size_t i = 0; i < cases; ++i) {
            const SqueezeParams s{uniform(0.0, 3.0), uniform(-pi, pi)};
            const double lam = uniform(-pi, pi);
            const double prod = quadrature_variance(s, lam) * quadrature_variance(s, lam + 0.5 * pi);
            worst = std::max(worst, 0.25 - prod);
            const double at_axis = quadrature_variance(s, 0.5 * s.phi) * quadrature_variance(s, 0.5 * s.phi + 0.5 * pi);
            worst = std::max(worst, std::abs(at_axis - 0.25));
        }
        report("heisenberg-floor", worst, 1e-12);
    }
    {
        double worst = 0.0;
        for (std::size_t i = 0; i < cases; ++i) {
            const SqueezeParams s{uniform(0.0, 3.0), uniform(-pi, pi)};
            const double omega = uniform(0.1, 10.0);
            const double v0 = quadrature_variance(s, 0.0);
            const double v1 = quadrature_variance(s, 0.5 * pi);
            const double w0 = variance_cross_basis(v0, omega, 1.0, Quadrature::position_like);
            const double w1 = variance_cross_basis(v1, omega, 1.0, Quadrature::momentum_like);
            worst = std::max(worst, std::abs(w0 * w1 - v0 * v1) / (v0 * v1));
        }
        report("cross-basis-product", worst, 1e-12);
    }
    {
        // Composition identity, with R cross-checked against the variance
        // route cosh 2R = (w/w0) Var(Q_0) + (w0/w) Var(Q_pi/2).
        double worst_unit = 0.0;
        double worst_route = 0.0;
        for (std::size_t i = 0; i < cases; ++i) {
            const SqueezeParams z{uniform(0.0, 3.0), uniform(-pi, pi)};
            const double rho = uniform(-1.2, 1.2);
            const BchCoeffs c = compose_bch(z, bogoliubov_coeffs(rho));
            worst_unit = std::max(worst_unit, std::abs(unitarity_residual(c)));
            const double ratio = std::exp(2.0 * rho);
            const double cosh2R = ratio * quadrature_variance(z, 0.0) + quadrature_variance(z, 0.5 * pi) / ratio;
            const double R = bch_to_inst(c).R;
            worst_route = std::max(worst_route, std::abs(std::cosh(2.0 * R) - cosh2R) / cosh2R);
        }
        report("composition-unitarity", worst_unit, opts_.unitarity_tol);
        report("R-variance-route", worst_route, 1e-9);
    }
    {
        double worst = 0.0;
        long non_monotone = 0;
        for (std::size_t i = 0; i < cases; ++i) {
            const SqueezeParams s{uniform(0.0, 1.2), uniform(-pi, pi)};
            const FockExpansion f = (i % 2 == 0)
                                        ? fock_coefficients(s, 200)
                                        : fock_coefficients(compose_bch(s, bogoliubov_coeffs(uniform(-0.6, 0.6))), 200);
            double partial = 0.0;
            for (const auto& c : f.even_amplitudes) {
                const double next = partial + std::norm(c);
                non_monotone += next < partial ? 1 : 0;
                partial = next;
            }
            worst = std::max(worst, std::abs(1.0 - f.norm));
        }
        report("fock-normalization", worst, kFockNormTol);
        report("fock-monotone", static_cast<double>(non_monotone), 0.0);
    }

    CheckResult r{9, "property suite (" + std::to_string(cases) + " cases each)", failures.empty(), {}};
    std::string detail = summary.str();
    for (const auto& f : failures) {
        detail += " FAIL: " + f + ";";
    }
    r.detail = detail;
    return r;
}

std::string format_result(const CheckResult& r)
{
    return std::string(r.pass ? "[PASS] " : "[FAIL] ") + std::to_string(r.id) + " " + r.name + ": " + r.detail;
}

} // namespace tdho::verify
