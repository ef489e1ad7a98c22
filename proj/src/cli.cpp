#include "tdho/cli.hpp"

#include "tdho/errors.hpp"
#include "tdho/evolution.hpp"
#include "tdho/io.hpp"
#include "tdho/oracles.hpp"
#include "tdho/parallel.hpp"
#include "tdho/verify.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace tdho {

namespace {

// Values shared by the simulation commands. Defaults reproduce the reference
// setup: w0 = 1, t0 = 10, eps in {1e-3, 0.5, 1, 1.5}.
struct CommonArgs {
    double omega0 = 1.0;
    std::optional<double> omegaf;
    double t0 = 10.0;
    std::vector<double> eps;
    std::optional<double> t_end;
    long n = 0;
    double tol = 1e-6;
    long stride = 1;
    long n_max = 1L << 24;
    std::string out;
    std::string profile_file;
    int jobs = default_jobs();
    double threshold = kDefaultAdiabaticThreshold;
    std::string config;
};

struct EvolveArgs {
    std::string summary;
    bool fixed = false;
};

struct ContourArgs {
    std::string mode = "above";
    std::string source = "formula";
    std::optional<double> ratio_min, ratio_max;
    double eps_min = 0.0, eps_max = 2.0;
    std::size_t n_ratio = 10, n_eps = 11;
};

struct SweepArgs {
    std::string points;
};

struct FitArgs {
    std::string data;
    std::string source = "simulation";
    std::string points;
};

struct VerifyArgs {
    double unitarity_tol = 1e-10;
    std::vector<int> only;
    std::size_t cases = 10000;
    bool mutate_bj = false;
};

void add_common(CLI::App* sub, CommonArgs& a, bool profile_flags)
{
    if (profile_flags) {
        sub->add_option("--omega0", a.omega0, "initial frequency")->capture_default_str();
        sub->add_option("--omegaf", a.omegaf, "final frequency (required)");
        sub->add_option("--t0", a.t0, "transition centre")->capture_default_str();
        sub->add_option("--eps", a.eps, "transition width(s), comma separated")->delimiter(',');
        sub->add_option("--t-end", a.t_end, "end time (default t0 + 3 eps + 3 pi / wf)");
        sub->add_option("--n", a.n, "initial number of slices");
        sub->add_option("--tol", a.tol, "convergence tolerance on sup |r_N - r_2N|")->capture_default_str();
        sub->add_option("--n-max", a.n_max, "largest N tried by the doubling")->capture_default_str();
        sub->add_option("--profile-file", a.profile_file, "sampled w(t) table (t, omega)");
        sub->add_option("--threshold", a.threshold, "adiabaticity threshold")->capture_default_str();
    }
    sub->add_option("--stride", a.stride, "record every k-th step")->capture_default_str();
    sub->add_option("--out", a.out, "output file (default stdout)");
    sub->add_option("--jobs", a.jobs, "worker threads")->capture_default_str();
    sub->add_option("--config", a.config, "key = value file; flags given on the command line win");
}

// Config file values fill only options the command line left unset.
void apply_config(CLI::App* sub, const std::string& path)
{
    if (path.empty()) {
        return;
    }
    for (const auto& [key, value] : io::load_config(path)) {
        std::string name = key;
        std::replace(name.begin(), name.end(), '_', '-');
        if (name == "config") {
            throw UsageError("config file: key 'config' is not allowed");
        }
        CLI::Option* opt = sub->get_option_no_throw("--" + name);
        if (opt == nullptr) {
            throw UsageError("config file: unknown key '" + key + "' for " + sub->get_name());
        }
        if (opt->count() > 0) {
            continue;
        }
        try {
            opt->add_result(value);
            opt->run_callback();
        } catch (const CLI::Error& e) {
            throw UsageError("config file: bad value for '" + key + "': " + e.what());
        }
    }
}

void require(bool ok, const std::string& field, const std::string& what)
{
    if (!ok) {
        throw UsageError("--" + field + ": " + what);
    }
}

void validate_common(const CommonArgs& a, bool need_omegaf)
{
    require(std::isfinite(a.omega0) && a.omega0 > 0.0, "omega0", "must be positive");
    if (need_omegaf) {
        require(a.omegaf.has_value(), "omegaf", "required");
    }
    if (a.omegaf) {
        require(std::isfinite(*a.omegaf) && *a.omegaf > 0.0, "omegaf", "must be positive");
    }
    require(std::isfinite(a.t0), "t0", "must be finite");
    for (double e : a.eps) {
        require(std::isfinite(e) && e >= 0.0, "eps", "must be non-negative");
    }
    require(a.n >= 0, "n", "must be positive");
    require(std::isfinite(a.tol) && a.tol > 0.0, "tol", "must be positive");
    require(a.stride >= 1, "stride", "must be at least 1");
    require(a.n_max >= 1, "n-max", "must be positive");
    require(a.jobs >= 1, "jobs", "must be at least 1");
    require(std::isfinite(a.threshold) && a.threshold > 0.0, "threshold", "must be positive");
}

SimulationConfig sim_config(const CommonArgs& a, long default_n)
{
    SimulationConfig cfg;
    cfg.t_end = a.t_end;
    cfg.n_slices = a.n > 0 ? a.n : default_n;
    cfg.record_stride = a.stride;
    cfg.convergence_tol = a.tol;
    cfg.n_max = std::max(a.n_max, cfg.n_slices);
    return cfg;
}

// Writes through `fn` to the named file, or to `fallback` for "" and "-".
void emit(const std::string& path, std::ostream& fallback, const std::function<void(std::ostream&)>& fn)
{
    if (path.empty() || path == "-") {
        fn(fallback);
        return;
    }
    std::ofstream f(path);
    if (!f) {
        throw IoError("cannot open '" + path + "' for writing");
    }
    fn(f);
    f.flush();
    if (!f) {
        throw IoError("write to '" + path + "' failed");
    }
}

std::string eps_label(double eps)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", eps);
    return buf;
}

// out.csv -> out_eps0.5.csv
std::string with_suffix(const std::string& path, const std::string& suffix)
{
    const auto slash = path.find_last_of('/');
    const auto dot = path.find_last_of('.');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) {
        return path + suffix;
    }
    return path.substr(0, dot) + suffix + path.substr(dot);
}

void print_warnings(std::ostream& err, const std::vector<std::string>& warnings)
{
    for (const auto& w : warnings) {
        err << "warning: " << w << '\n';
    }
}

int run_evolve(const CommonArgs& a, const EvolveArgs& ev, std::ostream& out, std::ostream& err)
{
    const bool sampled = !a.profile_file.empty();
    validate_common(a, !sampled);
    if (sampled && !a.eps.empty()) {
        throw UsageError("--eps: not used with --profile-file");
    }

    std::vector<FrequencyProfile> profiles;
    if (sampled) {
        profiles.push_back(load_sampled_profile(a.profile_file));
    } else {
        std::vector<double> eps = a.eps;
        if (eps.empty()) {
            eps = {1e-3, 0.5, 1.0, 1.5};
        }
        for (double e : eps) {
            profiles.push_back(FrequencyProfile::tanh(a.omega0, *a.omegaf, a.t0, e));
        }
    }
    for (const auto& p : profiles) {
        print_warnings(err, p.warnings());
    }

    SimulationConfig cfg = sim_config(a, 1L << 16);
    std::vector<std::optional<Trajectory>> trajs(profiles.size());
    parallel_for(profiles.size(), a.jobs, [&](std::size_t i) {
        trajs[i] = ev.fixed ? propagate(profiles[i], cfg) : propagate_converged(profiles[i], cfg);
    });

    const bool many = profiles.size() > 1;
    for (std::size_t i = 0; i < profiles.size(); ++i) {
        const FrequencyProfile& p = profiles[i];
        const Trajectory& traj = *trajs[i];
        const std::string suffix = many ? "_eps" + eps_label(p.epsilon()) : std::string();
        const std::string csv_path = a.out.empty() ? a.out : with_suffix(a.out, suffix);
        emit(csv_path, out, [&](std::ostream& os) {
            if (many && csv_path.empty()) {
                os << "# epsilon=" << io::format_number(p.epsilon()) << '\n';
            }
            io::write_trajectory_csv(os, traj);
        });
        if (!ev.fixed && !traj.converged) {
            err << "warning: eps=" << eps_label(p.epsilon()) << " not converged at N=" << traj.n_slices
                << " (delta " << io::format_number(traj.achieved_delta) << ")\n";
        }

        std::string summary_path;
        if (!ev.summary.empty()) {
            summary_path = with_suffix(ev.summary, suffix);
        } else if (!a.out.empty() && a.out != "-") {
            summary_path = csv_path + ".summary";
        }
        std::ostream& summary_fallback = err;
        emit(summary_path, summary_fallback, [&](std::ostream& os) {
            if (p.kind() == ProfileKind::sampled) {
                // no transition window is known for tabulated profiles
                io::write_run_info(os, traj);
            } else {
                try {
                    io::write_summary(os, traj, post_transition_summary(traj, p));
                } catch (const InsufficientWindowError& e) {
                    err << "warning: " << e.what() << '\n';
                    io::write_run_info(os, traj);
                }
            }
            if (p.kind() != ProfileKind::sampled && p.omegaf() != p.omega0()) {
                const double m = adiabaticity_measure(p.omega0(), p.omegaf(), p.epsilon());
                os << "adiabaticity=" << io::format_number(m) << '\n'
                   << "adiabatic=" << (is_adiabatic(m, a.threshold) ? "true" : "false") << '\n'
                   << "R_formula=" << io::format_number(fitted_sp(p.omega0(), p.omegaf(), p.epsilon())) << '\n';
            }
        });
    }
    return kExitOk;
}

std::vector<double> default_sweep_epsilons()
{
    std::vector<double> eps;
    for (int k = 0; k <= 20; ++k) {
        eps.push_back(0.1 * k);
    }
    return eps;
}

int run_sweep(const CommonArgs& a, const SweepArgs& sw, std::ostream& out, std::ostream& err)
{
    require(a.profile_file.empty(), "profile-file", "not used by sweep");
    validate_common(a, true);
    const std::vector<double> eps = a.eps.empty() ? default_sweep_epsilons() : a.eps;
    if (!within_fit_validity(a.omega0, *a.omegaf)) {
        err << "warning: frequency ratio outside the calibrated range of the formula\n";
    }
    const auto entries =
        sweep_final_sp(a.omega0, *a.omegaf, eps, sim_config(a, 1L << 12), SweepOptions{a.t0, a.jobs});
    bool failed = false;
    for (const auto& e : entries) {
        if (!e.error.empty()) {
            err << "error: eps=" << eps_label(e.epsilon) << ": " << e.error << '\n';
            failed = true;
        } else if (!e.converged) {
            err << "warning: eps=" << eps_label(e.epsilon) << " not converged at N=" << e.n_slices << '\n';
        }
    }
    emit(a.out, out, [&](std::ostream& os) { io::write_sweep_csv(os, entries); });
    if (!sw.points.empty()) {
        std::vector<SweepPoint> pts;
        for (const auto& e : entries) {
            if (e.error.empty()) {
                pts.push_back({a.omega0, *a.omegaf, e.epsilon, e.R_sim});
            }
        }
        emit(sw.points, out, [&](std::ostream& os) { io::write_sweep_points_csv(os, pts); });
    }
    return failed ? kExitNumerical : kExitOk;
}

int run_contour(const CommonArgs& a, const ContourArgs& c, std::ostream& out, std::ostream& err)
{
    validate_common(a, false);
    ContourMode mode;
    if (c.mode == "above") {
        mode = ContourMode::above_unity;
    } else if (c.mode == "below") {
        mode = ContourMode::below_unity;
    } else {
        throw UsageError("--mode: expected 'above' or 'below'");
    }
    ContourSource source;
    if (c.source == "formula") {
        source = ContourSource::formula;
    } else if (c.source == "simulation") {
        source = ContourSource::simulation;
    } else {
        throw UsageError("--source: expected 'formula' or 'simulation'");
    }
    const bool above = mode == ContourMode::above_unity;
    const double rmin = c.ratio_min.value_or(above ? 1.0 : 0.1);
    const double rmax = c.ratio_max.value_or(above ? 10.0 : 1.0);
    require(rmin > 0.0 && rmin <= rmax, "ratio-min", "need 0 < ratio-min <= ratio-max");
    require(c.eps_min >= 0.0 && c.eps_min <= c.eps_max, "eps-min", "need 0 <= eps-min <= eps-max");
    require(c.n_ratio >= 1, "n-ratio", "must be positive");
    require(c.n_eps >= 1, "n-eps", "must be positive");

    const ContourGrid grid = contour_grid({rmin, rmax}, {c.eps_min, c.eps_max}, c.n_ratio, c.n_eps, mode, source,
                                          sim_config(a, 1L << 12), SweepOptions{a.t0, a.jobs});
    if (grid.n_outside_validity > 0) {
        err << "warning: " << grid.n_outside_validity << " cells lie outside the calibrated ratio range\n";
    }
    bool failed = false;
    for (const auto& cell : grid.cells) {
        if (!cell.error.empty()) {
            err << "error: ratio=" << eps_label(cell.ratio) << " eps=" << eps_label(cell.omega0_eps) << ": "
                << cell.error << '\n';
            failed = true;
        }
    }
    emit(a.out, out, [&](std::ostream& os) { io::write_contour_csv(os, grid); });
    return failed ? kExitNumerical : kExitOk;
}

int run_fit(const CommonArgs& a, const FitArgs& f, std::ostream& out, std::ostream& err)
{
    validate_common(a, false);
    std::vector<SweepPoint> data;
    if (!f.data.empty()) {
        std::ifstream in(f.data);
        if (!in) {
            throw IoError("cannot open sweep data '" + f.data + "'");
        }
        data = io::read_sweep_points_csv(in);
    } else {
        const bool formula = f.source == "formula";
        require(formula || f.source == "simulation", "source", "expected 'formula' or 'simulation'");
        const auto eps = default_fit_epsilons();
        for (double k : default_fit_ratios()) {
            const double wf = k * a.omega0;
            if (formula) {
                for (double e : eps) {
                    data.push_back({a.omega0, wf, e, fitted_sp(a.omega0, wf, e)});
                }
                continue;
            }
            for (const auto& e : sweep_final_sp(a.omega0, wf, eps, sim_config(a, 1L << 12), {a.t0, a.jobs})) {
                if (!e.error.empty()) {
                    throw NumericalError("ratio " + eps_label(k) + ", eps " + eps_label(e.epsilon) + ": " + e.error);
                }
                data.push_back({a.omega0, wf, e.epsilon, e.R_sim});
            }
        }
        if (!f.points.empty()) {
            emit(f.points, out, [&](std::ostream& os) { io::write_sweep_points_csv(os, data); });
        }
    }
    const FitResult fit = fit_ansatz(data);
    print_warnings(err, fit.warnings);
    emit(a.out, out, [&](std::ostream& os) { io::write_fit(os, fit); });
    return kExitOk;
}

int run_verify(const CommonArgs& a, const VerifyArgs& v, std::ostream& out)
{
    require(a.jobs >= 1, "jobs", "must be at least 1");
    require(v.unitarity_tol > 0.0, "unitarity-tol", "must be positive");
    require(v.cases >= 1, "cases", "must be positive");
    verify::VerifyOptions opts;
    opts.jobs = a.jobs;
    opts.unitarity_tol = v.unitarity_tol;
    opts.property_cases = v.cases;
    opts.mutation = v.mutate_bj ? StepMutation::negate_b : StepMutation::none;
    verify::AcceptanceSuite suite(opts);

    std::vector<int> ids = v.only;
    if (ids.empty()) {
        for (int i = 1; i <= verify::AcceptanceSuite::kCriteria; ++i) {
            ids.push_back(i);
        }
    }
    for (int id : ids) {
        require(id >= 1 && id <= verify::AcceptanceSuite::kCriteria, "only", "no criterion " + std::to_string(id));
    }
    int failed = 0;
    emit(a.out, out, [&](std::ostream& os) {
        for (int id : ids) {
            const verify::CheckResult r = suite.run(id);
            failed += r.pass ? 0 : 1;
            os << verify::format_result(r) << '\n' << std::flush;
        }
        os << (failed == 0 ? "all checks passed" : std::to_string(failed) + " check(s) failed") << '\n';
    });
    return failed == 0 ? kExitOk : kExitVerifyFailed;
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Squeezing of a harmonic oscillator under a time-dependent frequency", "tdho"};
    app.require_subcommand(1);

    CommonArgs common;
    EvolveArgs evolve_args;
    SweepArgs sweep_args;
    ContourArgs contour_args;
    FitArgs fit_args;
    VerifyArgs verify_args;

    auto* evolve = app.add_subcommand("evolve", "propagate one profile per eps and write trajectories");
    add_common(evolve, common, true);
    evolve->add_option("--summary", evolve_args.summary, "summary file (default <out>.summary, or stderr)");
    evolve->add_flag("--fixed", evolve_args.fixed, "single run at --n slices, no doubling");

    auto* sweep = app.add_subcommand("sweep", "final squeezing versus eps, simulated and from the formula");
    add_common(sweep, common, true);
    sweep->add_option("--points", sweep_args.points, "also write omega0,omegaf,epsilon,R rows for fit");

    auto* contour = app.add_subcommand("contour", "final squeezing over (wf/w0, w0 eps)");
    add_common(contour, common, true);
    contour->add_option("--mode", contour_args.mode, "above | below")->capture_default_str();
    contour->add_option("--source", contour_args.source, "formula | simulation")->capture_default_str();
    contour->add_option("--ratio-min", contour_args.ratio_min, "default 1 (above) or 0.1 (below)");
    contour->add_option("--ratio-max", contour_args.ratio_max, "default 10 (above) or 1 (below)");
    contour->add_option("--eps-min", contour_args.eps_min)->capture_default_str();
    contour->add_option("--eps-max", contour_args.eps_max)->capture_default_str();
    contour->add_option("--n-ratio", contour_args.n_ratio)->capture_default_str();
    contour->add_option("--n-eps", contour_args.n_eps)->capture_default_str();

    auto* fit = app.add_subcommand("fit", "least-squares fit of the sech constants (c1, c2)");
    add_common(fit, common, true);
    fit->add_option("--data", fit_args.data, "omega0,omegaf,epsilon,R table (default: generate)");
    fit->add_option("--source", fit_args.source, "generated data: formula | simulation")->capture_default_str();
    fit->add_option("--points", fit_args.points, "write the generated table");

    auto* verify = app.add_subcommand("verify", "run the acceptance checks");
    add_common(verify, common, false);
    verify->add_option("--unitarity-tol", verify_args.unitarity_tol)->capture_default_str();
    verify->add_option("--only", verify_args.only, "criterion ids, comma separated")->delimiter(',');
    verify->add_option("--cases", verify_args.cases, "random cases per property")->capture_default_str();
    verify->add_flag("--mutate-bj", verify_args.mutate_bj)->group("");

    try {
        try {
            app.parse(argc, argv);
        } catch (const CLI::CallForHelp&) {
            out << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
            return kExitOk;
        } catch (const CLI::ParseError& e) {
            err << "usage error: " << e.what() << '\n';
            return kExitUsage;
        }
        CLI::App* sub = app.get_subcommands().front();
        apply_config(sub, common.config);

        if (sub == evolve) {
            return run_evolve(common, evolve_args, out, err);
        }
        if (sub == sweep) {
            return run_sweep(common, sweep_args, out, err);
        }
        if (sub == contour) {
            return run_contour(common, contour_args, out, err);
        }
        if (sub == fit) {
            return run_fit(common, fit_args, out, err);
        }
        return run_verify(common, verify_args, out);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const IoError& e) {
        err << "i/o error: " << e.what() << '\n';
        return kExitIo;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitNumerical;
    }
}

} // namespace tdho
