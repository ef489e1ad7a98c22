#include "tdho/evolution.hpp"

#include "tdho/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace tdho {

namespace {

void validate(const SimulationConfig& cfg, double t_end)
{
    if (!std::isfinite(cfg.t_start) || !std::isfinite(t_end) || !(t_end > cfg.t_start)) {
        throw DomainError("simulation: t_end must exceed t_start");
    }
    if (cfg.n_slices < 1) {
        throw DomainError("simulation: n_slices must be >= 1");
    }
    if (cfg.record_stride < 1) {
        throw DomainError("simulation: record_stride must be >= 1");
    }
    if (!(cfg.convergence_tol > 0.0)) {
        throw DomainError("simulation: convergence_tol must be positive");
    }
}

TrajectoryRecord make_record(double t, double omega, double omega0, complex chi, SaturationCounter& sat)
{
    TrajectoryRecord rec;
    rec.t = t;
    rec.omega = omega;
    rec.rho = rho_of(omega, omega0);
    rec.chi = chi;
    const SqueezeParams z = chi_to_squeeze(chi, &sat);
    rec.r = z.r;
    rec.phi = z.phi;
    const BchCoeffs c = compose_bch(z, bogoliubov_coeffs(rec.rho));
    const InstSqueezeParams inst = bch_to_inst(c, &sat);
    rec.R = inst.R;
    rec.Phi = inst.Phi;
    rec.beta_mod = inst.beta_mod;
    rec.unitarity_residual = unitarity_residual(c);

    if (!std::isfinite(rec.r) || !std::isfinite(rec.R) || !std::isfinite(rec.phi) || !std::isfinite(rec.Phi)
        || !std::isfinite(rec.unitarity_residual)) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "non-finite squeezing data at t=" << t << " (omega=" << omega << ", chi=" << chi << ")";
        throw NumericalError(msg.str());
    }
    return rec;
}

} // namespace

double default_t_end(const FrequencyProfile& p)
{
    if (p.kind() == ProfileKind::sampled) {
        return p.samples().back().t;
    }
    return p.t0() + 3.0 * p.epsilon() + 3.0 * pi / p.omegaf();
}

StepCoeffs step_coeffs(double omega_j, double omega0, double tau)
{
    const double rho = rho_of(omega_j, omega0);
    const double s = std::sin(omega_j * tau);
    const double c = std::cos(omega_j * tau);
    const complex den{c, std::cosh(2.0 * rho) * s};
    StepCoeffs out;
    out.a = complex{0.0, -std::sinh(2.0 * rho) * s} / den;
    out.b = 1.0 / (den * den);
    return out;
}

double Trajectory::max_unitarity_residual() const
{
    double worst = 0.0;
    for (const auto& rec : records) {
        worst = std::max(worst, std::abs(rec.unitarity_residual));
    }
    return worst;
}

Trajectory propagate(const FrequencyProfile& p, const SimulationConfig& cfg)
{
    const double t_end = cfg.t_end.value_or(default_t_end(p));
    validate(cfg, t_end);

    const long n = cfg.n_slices;
    const double tau = (t_end - cfg.t_start) / static_cast<double>(n);
    const double omega0 = p.omega0();
    const double sample_shift = cfg.sampling == SamplingRule::midpoint ? 0.5 : 0.0;

    Trajectory traj{p, {}, n, cfg.record_stride, false, 0.0, {}, 0};
    traj.records.reserve(static_cast<std::size_t>(n / cfg.record_stride) + 1);

    SaturationCounter sat;
    complex chi{0.0, 0.0};
    traj.records.push_back(make_record(cfg.t_start, p(cfg.t_start), omega0, chi, sat));

    for (long j = 1; j <= n; ++j) {
        const double t = cfg.t_start + static_cast<double>(j) * tau;
        const double omega_j = p(cfg.t_start + (static_cast<double>(j) - sample_shift) * tau);
        StepCoeffs k = step_coeffs(omega_j, omega0, tau);
        if (cfg.mutation == StepMutation::negate_b) {
            k.b = -k.b;
        }
        const complex den = 1.0 - chi * k.a;
        if (!(std::abs(den) > 0.0)) {
            std::ostringstream msg;
            msg << "recurrence denominator vanished at step " << j << " (t=" << t << ")";
            throw StepSingularityError(msg.str());
        }
        chi = k.a + chi * k.b / den;

        if (j % cfg.record_stride == 0) {
            const double omega_t = sample_shift == 0.0 ? omega_j : p(t);
            try {
                traj.records.push_back(make_record(t, omega_t, omega0, chi, sat));
            } catch (const SaturationError& e) {
                std::ostringstream msg;
                msg << e.what() << " at step " << j << " (t=" << t << ")";
                throw SaturationError(msg.str());
            }
        }
    }
    traj.saturation_clamps = sat.clamps;
    return traj;
}

Trajectory propagate_converged(const FrequencyProfile& p, const SimulationConfig& cfg)
{
    SimulationConfig level = cfg;
    Trajectory coarse = propagate(p, level);
    std::vector<double> history;

    while (2 * level.n_slices <= cfg.n_max) {
        level.n_slices *= 2;
        level.record_stride *= 2;
        Trajectory fine = propagate(p, level);

        double delta = 0.0;
        const std::size_t n = std::min(coarse.records.size(), fine.records.size());
        for (std::size_t i = 0; i < n; ++i) {
            delta = std::max(delta, std::abs(coarse.records[i].r - fine.records[i].r));
        }
        history.push_back(delta);
        coarse = std::move(fine);
        if (delta < cfg.convergence_tol) {
            coarse.converged = true;
            break;
        }
    }

    coarse.delta_history = history;
    coarse.achieved_delta = history.empty() ? std::numeric_limits<double>::infinity() : history.back();
    return coarse;
}

PostTransitionSummary post_transition_summary(const Trajectory& traj, const FrequencyProfile& p)
{
    if (p.kind() == ProfileKind::sampled) {
        throw DomainError("post_transition_summary: sampled profiles need an explicit window start");
    }
    return post_transition_summary(traj, transition_interval(p).second, p.omegaf());
}

PostTransitionSummary post_transition_summary(const Trajectory& traj, double window_start, double omegaf)
{
    const auto& recs = traj.records;
    auto first = std::upper_bound(recs.begin(), recs.end(), window_start,
                                  [](double v, const TrajectoryRecord& r) { return v < r.t; });
    const std::size_t begin = static_cast<std::size_t>(first - recs.begin());
    const double period_expected = pi / omegaf;

    double spacing = 0.0;
    if (recs.size() >= 2) {
        spacing = recs[1].t - recs[0].t;
    }
    const double span = begin < recs.size() ? recs.back().t - window_start : 0.0;
    if (recs.size() - begin < 3 || span < 3.0 * period_expected - 1.5 * spacing) {
        std::ostringstream msg;
        msg << "post-transition window [" << window_start << ", " << (recs.empty() ? window_start : recs.back().t)
            << "] is shorter than three periods pi/wf = " << 3.0 * period_expected;
        throw InsufficientWindowError(msg.str());
    }

    PostTransitionSummary s;
    s.window_start = window_start;
    s.n_records = recs.size() - begin;
    s.r_min = recs[begin].r;
    s.r_max = recs[begin].r;
    double sum = 0.0;
    for (std::size_t i = begin; i < recs.size(); ++i) {
        s.r_min = std::min(s.r_min, recs[i].r);
        s.r_max = std::max(s.r_max, recs[i].r);
        sum += recs[i].R;
    }
    s.r_midpoint = 0.5 * (s.r_min + s.r_max);
    s.r_amplitude = s.r_max - s.r_min;
    s.R_final = sum / static_cast<double>(s.n_records);
    double var = 0.0;
    for (std::size_t i = begin; i < recs.size(); ++i) {
        const double d = recs[i].R - s.R_final;
        var += d * d;
    }
    s.R_std = std::sqrt(var / static_cast<double>(s.n_records));

    // Local maxima of r refined by the parabola through the bracketing samples.
    std::vector<double> peaks;
    for (std::size_t i = begin + 1; i + 1 < recs.size(); ++i) {
        const double y0 = recs[i - 1].r;
        const double y1 = recs[i].r;
        const double y2 = recs[i + 1].r;
        if (!(y1 > y0 && y1 >= y2)) {
            continue;
        }
        const double x0 = recs[i - 1].t - recs[i].t;
        const double x2 = recs[i + 1].t - recs[i].t;
        // Vertex of the interpolating parabola, relative to recs[i].t.
        const double d0 = (y0 - y1) / x0;
        const double d2 = (y2 - y1) / x2;
        const double curv = (d2 - d0) / (x2 - x0);
        double offset = 0.0;
        if (curv < 0.0) {
            const double slope = d0 - curv * x0;
            offset = std::clamp(-slope / (2.0 * curv), x0, x2);
        }
        peaks.push_back(recs[i].t + offset);
    }
    s.n_maxima = peaks.size();
    if (peaks.size() >= 2) {
        s.period = (peaks.back() - peaks.front()) / static_cast<double>(peaks.size() - 1);
    }
    return s;
}

} // namespace tdho
