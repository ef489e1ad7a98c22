#include "tdho/frequency.hpp"

#include "tdho/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace tdho {

namespace {

void require_positive(double omega, const char* name)
{
    if (!(omega > 0.0) || !std::isfinite(omega)) {
        std::ostringstream msg;
        msg << name << " must be a positive finite frequency (got " << omega << ")";
        throw DomainError(msg.str());
    }
}

} // namespace

const char* to_string(ProfileKind kind)
{
    switch (kind) {
    case ProfileKind::tanh:
        return "tanh";
    case ProfileKind::jump:
        return "jump";
    case ProfileKind::sampled:
        return "sampled";
    }
    return "unknown";
}

FrequencyProfile FrequencyProfile::tanh(double omega0, double omegaf, double t0, double epsilon)
{
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
        throw DomainError("epsilon must be finite and non-negative");
    }
    if (epsilon == 0.0) {
        return jump(omega0, omegaf, t0);
    }
    require_positive(omega0, "omega0");
    require_positive(omegaf, "omegaf");
    if (!std::isfinite(t0)) {
        throw DomainError("t0 must be finite");
    }
    FrequencyProfile p;
    p.kind_ = ProfileKind::tanh;
    p.omega0_ = omega0;
    p.omegaf_ = omegaf;
    p.t0_ = t0;
    p.epsilon_ = epsilon;
    if (t0 < 3.0 * epsilon) {
        std::ostringstream msg;
        msg << "t0 = " << t0 << " < 3*eps = " << 3.0 * epsilon
            << ": the run starts inside the transition window, so the initial state is not the ground state of w(0)";
        p.warnings_.push_back(msg.str());
    }
    return p;
}

FrequencyProfile FrequencyProfile::jump(double omega0, double omegaf, double t0)
{
    require_positive(omega0, "omega0");
    require_positive(omegaf, "omegaf");
    if (!std::isfinite(t0)) {
        throw DomainError("t0 must be finite");
    }
    FrequencyProfile p;
    p.kind_ = ProfileKind::jump;
    p.omega0_ = omega0;
    p.omegaf_ = omegaf;
    p.t0_ = t0;
    return p;
}

FrequencyProfile FrequencyProfile::sampled(std::vector<FrequencySample> samples)
{
    if (samples.size() < 2) {
        throw DomainError("sampled profile needs at least two samples");
    }
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (!std::isfinite(samples[i].t)) {
            throw DomainError("sampled profile: non-finite time");
        }
        require_positive(samples[i].omega, "sampled omega");
        if (i > 0 && !(samples[i].t > samples[i - 1].t)) {
            std::ostringstream msg;
            msg << "sampled profile: times must be strictly increasing (row " << i << ")";
            throw DomainError(msg.str());
        }
    }
    FrequencyProfile p;
    p.kind_ = ProfileKind::sampled;
    p.omega0_ = samples.front().omega;
    p.omegaf_ = samples.back().omega;
    p.t0_ = samples.front().t;
    p.samples_ = std::move(samples);
    return p;
}

double FrequencyProfile::eval(double t) const
{
    switch (kind_) {
    case ProfileKind::tanh:
        return 0.5 * (omegaf_ + omega0_) + 0.5 * (omegaf_ - omega0_) * std::tanh((t - t0_) / epsilon_);
    case ProfileKind::jump:
        return t < t0_ ? omega0_ : omegaf_;
    case ProfileKind::sampled: {
        if (!(t >= samples_.front().t) || !(t <= samples_.back().t)) {
            std::ostringstream msg;
            msg << "t = " << t << " outside sampled range [" << samples_.front().t << ", " << samples_.back().t
                << "]";
            throw DomainError(msg.str());
        }
        auto hi = std::lower_bound(samples_.begin(), samples_.end(), t,
                                   [](const FrequencySample& s, double v) { return s.t < v; });
        if (hi == samples_.begin()) {
            return hi->omega;
        }
        auto lo = hi - 1;
        const double w = (t - lo->t) / (hi->t - lo->t);
        return lo->omega + w * (hi->omega - lo->omega);
    }
    }
    return omega0_;
}

double epsilon_from_slope(double omega0, double omegaf, double slope_at_t0)
{
    if (slope_at_t0 == 0.0 || !std::isfinite(slope_at_t0)) {
        throw DomainError("epsilon_from_slope: slope at t0 must be finite and non-zero");
    }
    return (omegaf - omega0) / (2.0 * slope_at_t0);
}

std::pair<double, double> transition_interval(const FrequencyProfile& p)
{
    if (p.kind() == ProfileKind::sampled) {
        throw DomainError("transition_interval: sampled profiles have no intrinsic window; supply one");
    }
    const double half = 3.0 * p.epsilon();
    return {p.t0() - half, p.t0() + half};
}

FrequencyProfile parse_sampled_profile(std::istream& in)
{
    std::vector<FrequencySample> samples;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream fields(line);
        double t = 0.0;
        double omega = 0.0;
        if (!(fields >> t)) {
            if (line.find_first_not_of(" \t\r") == std::string::npos) {
                continue;
            }
            throw DomainError("profile line " + std::to_string(line_no) + ": cannot parse time");
        }
        std::string extra;
        if (!(fields >> omega) || (fields >> extra)) {
            throw DomainError("profile line " + std::to_string(line_no) + ": expected exactly two columns");
        }
        samples.push_back({t, omega});
    }
    return FrequencyProfile::sampled(std::move(samples));
}

FrequencyProfile load_sampled_profile(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open profile file '" + path + "'");
    }
    return parse_sampled_profile(in);
}

} // namespace tdho
