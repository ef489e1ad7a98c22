#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace tdho {

enum class ProfileKind { tanh, jump, sampled };

const char* to_string(ProfileKind kind);

struct FrequencySample {
    double t;
    double omega;
};

// Time-dependent oscillator frequency w(t). Immutable once built; use the
// named constructors.
//
//   tanh:    w(t) = (wf + w0)/2 + (wf - w0)/2 * tanh((t - t0)/eps)
//   jump:    w0 for t < t0, wf for t >= t0
//   sampled: linear interpolation between user samples
class FrequencyProfile {
public:
    /// eps == 0 yields a jump at t0.
    static FrequencyProfile tanh(double omega0, double omegaf, double t0, double epsilon);
    static FrequencyProfile jump(double omega0, double omegaf, double t0);
    /// omega0/omegaf are taken from the first and last samples.
    static FrequencyProfile sampled(std::vector<FrequencySample> samples);

    ProfileKind kind() const { return kind_; }
    double omega0() const { return omega0_; }
    double omegaf() const { return omegaf_; }
    double t0() const { return t0_; }
    double epsilon() const { return epsilon_; }
    const std::vector<FrequencySample>& samples() const { return samples_; }

    // Non-fatal construction diagnostics (e.g. t0 < 3 eps).
    const std::vector<std::string>& warnings() const { return warnings_; }

    double operator()(double t) const { return eval(t); }
    double eval(double t) const;

private:
    FrequencyProfile() = default;

    ProfileKind kind_ = ProfileKind::jump;
    double omega0_ = 1.0;
    double omegaf_ = 1.0;
    double t0_ = 0.0;
    double epsilon_ = 0.0;
    std::vector<FrequencySample> samples_;
    std::vector<std::string> warnings_;
};

inline double eval_omega(const FrequencyProfile& p, double t) { return p.eval(t); }

/// eps = (wf - w0) / (2 * dw/dt at t0).
double epsilon_from_slope(double omega0, double omegaf, double slope_at_t0);

/// (t0 - 3 eps, t0 + 3 eps); sampled profiles throw DomainError.
std::pair<double, double> transition_interval(const FrequencyProfile& p);

/// Two-column (t, omega) text, whitespace or comma separated, '#' comments.
FrequencyProfile parse_sampled_profile(std::istream& in);
FrequencyProfile load_sampled_profile(const std::string& path);

} // namespace tdho
