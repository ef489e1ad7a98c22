#include "tdho/oracles.hpp"

#include "tdho/errors.hpp"
#include "tdho/parallel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

namespace tdho {

namespace {

void require_frequencies(double omega0, double omegaf, const char* where)
{
    if (!(omega0 > 0.0) || !(omegaf > 0.0) || !std::isfinite(omega0) || !std::isfinite(omegaf)) {
        std::ostringstream msg;
        msg << where << ": frequencies must be positive (omega0=" << omega0 << ", omegaf=" << omegaf << ")";
        throw DomainError(msg.str());
    }
}

double sech(double x)
{
    return 1.0 / std::cosh(x);
}

std::vector<double> linspace(double lo, double hi, std::size_t n)
{
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    return out;
}

double simulate_final_sp(double omega0, double omegaf, double epsilon, const SimulationConfig& cfg, double t0,
                         bool* converged, long* n_slices)
{
    const FrequencyProfile p = FrequencyProfile::tanh(omega0, omegaf, t0, epsilon);
    SimulationConfig run = cfg;
    run.t_end.reset();
    const Trajectory traj = propagate_converged(p, run);
    if (converged != nullptr) {
        *converged = traj.converged;
    }
    if (n_slices != nullptr) {
        *n_slices = traj.n_slices;
    }
    return post_transition_summary(traj, p).R_final;
}

struct Residuals {
    std::vector<double> f;
    std::vector<std::array<double, 2>> jac;
    double cost = 0.0;
};

Residuals evaluate(std::span<const SweepPoint> data, double c1, double c2)
{
    Residuals out;
    out.f.reserve(data.size());
    out.jac.reserve(data.size());
    for (const auto& d : data) {
        const double rho = std::abs(0.5 * std::log(d.omegaf / d.omega0));
        const double scale = std::min(d.omega0, d.omegaf) * d.epsilon;
        const double u = c1 * (rho + c2) * scale;
        const double s = sech(u);
        const double f = rho * s - d.R;
        // d/du sech(u) = -sech(u) tanh(u)
        const double du = -rho * s * std::tanh(u);
        out.f.push_back(f);
        out.jac.push_back({du * (rho + c2) * scale, du * c1 * scale});
        out.cost += f * f;
    }
    return out;
}

std::string describe_grid(std::span<const SweepPoint> data)
{
    std::set<double> ratios;
    double eps_lo = std::numeric_limits<double>::infinity();
    double eps_hi = -std::numeric_limits<double>::infinity();
    for (const auto& d : data) {
        ratios.insert(d.omegaf / d.omega0);
        eps_lo = std::min(eps_lo, d.epsilon);
        eps_hi = std::max(eps_hi, d.epsilon);
    }
    std::ostringstream out;
    out << data.size() << " points; " << ratios.size() << " ratios in [" << *ratios.begin() << ", "
        << *ratios.rbegin() << "]; eps in [" << eps_lo << ", " << eps_hi << "]";
    return out.str();
}

} // namespace

double jump_sp_closed_form(double omega0, double omegaf, double t)
{
    require_frequencies(omega0, omegaf, "jump_sp_closed_form");
    const double amp = (omegaf * omegaf - omega0 * omega0) / (2.0 * omega0 * omegaf);
    const double s = std::sin(omegaf * t);
    return std::acosh(std::sqrt(1.0 + amp * amp * s * s));
}

double ansatz_sp(double omega0, double omegaf, double epsilon, double c1, double c2)
{
    require_frequencies(omega0, omegaf, "ansatz_sp");
    if (!(epsilon >= 0.0)) {
        throw DomainError("ansatz_sp: epsilon must be non-negative");
    }
    const double rho_f = std::abs(0.5 * std::log(omegaf / omega0));
    const double omega_min = std::min(omega0, omegaf);
    return rho_f * sech(c1 * (rho_f + c2) * omega_min * epsilon);
}

double fitted_sp(double omega0, double omegaf, double epsilon)
{
    return ansatz_sp(omega0, omegaf, epsilon, kAnsatzC1, kAnsatzC2);
}

bool within_fit_validity(double omega0, double omegaf)
{
    return std::max(omega0, omegaf) <= kFitValidityRatio * std::min(omega0, omegaf);
}

double adiabaticity_measure(double omega0, double omegaf, double epsilon)
{
    require_frequencies(omega0, omegaf, "adiabaticity_measure");
    if (omega0 == omegaf) {
        throw DomainError("adiabaticity_measure: degenerate transition (omegaf == omega0)");
    }
    if (!(epsilon >= 0.0)) {
        throw DomainError("adiabaticity_measure: epsilon must be non-negative");
    }
    if (epsilon == 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    const double rho_f = std::abs(0.5 * std::log(omegaf / omega0));
    const double slope = (omegaf - omega0) / (2.0 * epsilon);
    return slope / (std::min(omega0, omegaf) * (omegaf - omega0) * (rho_f + 1.0));
}

std::vector<SweepEntry> sweep_final_sp(double omega0, double omegaf, std::span<const double> epsilons,
                                       const SimulationConfig& cfg, const SweepOptions& opts)
{
    require_frequencies(omega0, omegaf, "sweep_final_sp");
    if (epsilons.empty()) {
        throw DomainError("sweep_final_sp: empty epsilon list");
    }
    for (double e : epsilons) {
        if (!(e >= 0.0) || !std::isfinite(e)) {
            throw DomainError("sweep_final_sp: epsilons must be finite and non-negative");
        }
    }

    std::vector<SweepEntry> out(epsilons.size());
    parallel_for(epsilons.size(), opts.jobs, [&](std::size_t i) {
        SweepEntry& e = out[i];
        e.epsilon = epsilons[i];
        e.R_formula = fitted_sp(omega0, omegaf, e.epsilon);
        try {
            e.R_sim = simulate_final_sp(omega0, omegaf, e.epsilon, cfg, opts.t0, &e.converged, &e.n_slices);
            e.rel_err = e.R_formula == 0.0 ? (e.R_sim == 0.0 ? 0.0 : std::numeric_limits<double>::infinity())
                                           : (e.R_sim - e.R_formula) / e.R_formula;
        } catch (const Error& err) {
            e.error = err.what();
            e.R_sim = std::numeric_limits<double>::quiet_NaN();
            e.rel_err = std::numeric_limits<double>::quiet_NaN();
        }
    });
    return out;
}

FitResult fit_ansatz(std::span<const SweepPoint> data, const FitOptions& opts)
{
    bool informative = false;
    for (const auto& d : data) {
        require_frequencies(d.omega0, d.omegaf, "fit_ansatz");
        if (!(d.epsilon >= 0.0) || !std::isfinite(d.R)) {
            throw DomainError("fit_ansatz: epsilon must be non-negative and R finite");
        }
        informative = informative || (d.epsilon > 0.0 && d.omega0 != d.omegaf);
    }
    if (data.size() < 2 || !informative) {
        throw RankDeficiencyError(
            "fit_ansatz: data cannot constrain (c1, c2); need points with eps > 0 and omegaf != omega0");
    }

    FitResult out;
    out.n_points = data.size();
    out.grid = describe_grid(data);
    if (data.size() < 20) {
        out.warnings.push_back("fewer than 20 data points");
    }

    double c1 = opts.c1_init;
    double c2 = opts.c2_init;
    double damping = 1e-3;
    Residuals cur = evaluate(data, c1, c2);
    int it = 0;
    for (; it < opts.max_iterations; ++it) {
        double a11 = 0.0, a12 = 0.0, a22 = 0.0, g1 = 0.0, g2 = 0.0;
        for (std::size_t i = 0; i < data.size(); ++i) {
            const auto& j = cur.jac[i];
            a11 += j[0] * j[0];
            a12 += j[0] * j[1];
            a22 += j[1] * j[1];
            g1 += j[0] * cur.f[i];
            g2 += j[1] * cur.f[i];
        }
        if (std::max(std::abs(g1), std::abs(g2)) < 1e-30) {
            break;
        }

        bool accepted = false;
        double step_norm = 0.0;
        while (damping < 1e12) {
            const double m11 = a11 * (1.0 + damping) + 1e-300;
            const double m22 = a22 * (1.0 + damping) + 1e-300;
            const double det = m11 * m22 - a12 * a12;
            const double d1 = (-g1 * m22 + g2 * a12) / det;
            const double d2 = (-g2 * m11 + g1 * a12) / det;
            Residuals trial = evaluate(data, c1 + d1, c2 + d2);
            if (std::isfinite(trial.cost) && trial.cost <= cur.cost) {
                c1 += d1;
                c2 += d2;
                cur = std::move(trial);
                damping = std::max(damping * 0.1, 1e-12);
                step_norm = std::hypot(d1, d2);
                accepted = true;
                break;
            }
            damping *= 10.0;
        }
        if (!accepted || step_norm <= 1e-15 * (std::hypot(c1, c2) + 1e-15)) {
            break;
        }
    }

    // Conditioning of the normal matrix at the optimum.
    double a11 = 0.0, a12 = 0.0, a22 = 0.0;
    for (const auto& j : cur.jac) {
        a11 += j[0] * j[0];
        a12 += j[0] * j[1];
        a22 += j[1] * j[1];
    }
    const double mean = 0.5 * (a11 + a22);
    const double radius = std::hypot(0.5 * (a11 - a22), a12);
    const double lmax = mean + radius;
    const double lmin = mean - radius;
    out.condition = lmin > 0.0 ? lmax / lmin : std::numeric_limits<double>::infinity();
    if (!(out.condition < opts.condition_warning)) {
        std::ostringstream msg;
        msg << "ill-conditioned fit (cond = " << out.condition
            << "): c1 and c2 are not separately constrained, typically because all points share one frequency ratio";
        out.warnings.push_back(msg.str());
    }
    if (!(c1 > 0.0)) {
        out.warnings.push_back("fit converged to a non-positive rate constant c1");
    }

    out.c1 = c1;
    out.c2 = c2;
    out.iterations = it;
    out.residual_rms = std::sqrt(cur.cost / static_cast<double>(data.size()));
    return out;
}

std::vector<double> default_fit_ratios()
{
    std::vector<double> out{1.5, 2.0, 3.0, 4.0, 5.0};
    const std::size_t n = out.size();
    for (std::size_t i = 0; i < n; ++i) {
        out.push_back(1.0 / out[i]);
    }
    return out;
}

std::vector<double> default_fit_epsilons()
{
    return {0.0, 0.1, 0.2, 0.4, 0.8, 1.2, 1.6, 2.0};
}

ContourGrid contour_grid(std::pair<double, double> ratio_range, std::pair<double, double> epsilon_range,
                         std::size_t n_ratio, std::size_t n_eps, ContourMode mode, ContourSource source,
                         const SimulationConfig& cfg, const SweepOptions& opts)
{
    auto [r_lo, r_hi] = ratio_range;
    auto [e_lo, e_hi] = epsilon_range;
    if (!(r_lo > 0.0) || !(r_hi >= r_lo) || !(e_lo >= 0.0) || !(e_hi >= e_lo) || !std::isfinite(r_hi)
        || !std::isfinite(e_hi)) {
        throw DomainError("contour_grid: ranges must be positive and ordered (ratio > 0, eps >= 0)");
    }
    if (n_ratio == 0 || n_eps == 0) {
        throw DomainError("contour_grid: grid sizes must be >= 1");
    }
    if (mode == ContourMode::above_unity && r_lo < 1.0) {
        throw DomainError("contour_grid: above-unity mode needs ratios >= 1");
    }
    if (mode == ContourMode::below_unity && r_hi > 1.0) {
        throw DomainError("contour_grid: below-unity mode needs ratios <= 1");
    }

    ContourGrid grid;
    grid.mode = mode;
    grid.source = source;
    grid.n_ratio = n_ratio;
    grid.n_eps = n_eps;
    const auto ratios = linspace(r_lo, r_hi, n_ratio);
    const auto epsilons = linspace(e_lo, e_hi, n_eps);
    grid.cells.resize(n_ratio * n_eps);
    for (std::size_t i = 0; i < n_ratio; ++i) {
        for (std::size_t k = 0; k < n_eps; ++k) {
            ContourCell& c = grid.cells[i * n_eps + k];
            c.ratio = ratios[i];
            c.omega0_eps = epsilons[k];
            c.outside_validity = !within_fit_validity(1.0, c.ratio);
        }
    }

    parallel_for(grid.cells.size(), source == ContourSource::formula ? 1 : opts.jobs, [&](std::size_t idx) {
        ContourCell& c = grid.cells[idx];
        if (source == ContourSource::formula) {
            c.R = fitted_sp(1.0, c.ratio, c.omega0_eps);
            return;
        }
        try {
            c.R = simulate_final_sp(1.0, c.ratio, c.omega0_eps, cfg, opts.t0, nullptr, nullptr);
        } catch (const Error& err) {
            c.error = err.what();
            c.R = std::numeric_limits<double>::quiet_NaN();
        }
    });
    grid.n_outside_validity = static_cast<std::size_t>(
        std::count_if(grid.cells.begin(), grid.cells.end(), [](const ContourCell& c) { return c.outside_validity; }));
    return grid;
}

} // namespace tdho
