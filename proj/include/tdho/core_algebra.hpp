#pragma once

// Algebraic kernel for single-mode vacuum squeezed states of a harmonic
// oscillator: real Bogoliubov maps between the initial basis (frequency w0)
// and the instantaneous basis (frequency w(t)), squeeze-parameter extraction,
// the SU(1,1) disentangled product S(z) S(-rho), quadrature variances and
// Fock-space amplitudes.
//
// Conventions: S(zeta) = exp(-zeta/2 a+^2 + zeta*/2 a^2), zeta = r e^{i phi}.
// All phases are reported on the principal branch (-pi, pi].

#include <complex>
#include <cstddef>
#include <vector>

namespace tdho {

using complex = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;

// |chi| or |alpha| in [1, 1 + kSaturationSlack] is clamped to kSaturationClamp.
inline constexpr double kSaturationSlack = 1e-12;
inline constexpr double kSaturationClamp = 1.0 - 1e-15;

struct BogoliubovCoeffs {
    double gamma1 = 1.0; // cosh(rho)
    double gamma2 = 0.0; // sinh(rho)
    double rho = 0.0;
};

struct SqueezeParams {
    double r = 0.0;
    double phi = pi;
};

struct InstSqueezeParams {
    double R = 0.0;
    double Phi = pi;
    double beta_mod = 1.0;
    double upsilon = 0.0;
};

// S(z) S(-rho) = exp(alpha T+) exp(ln(beta) Tc) exp(gamma T-), with T the
// instantaneous-basis generators.
struct BchCoeffs {
    complex alpha{0.0, 0.0};
    complex beta{1.0, 0.0};
    complex gamma{0.0, 0.0};
};

struct LambdaCoeffs {
    complex plus;
    complex c;
    complex minus;
};

// Counts how often a modulus grazing the unit circle was clamped.
struct SaturationCounter {
    long clamps = 0;
};

/// Wraps an angle onto (-pi, pi].
double wrap_phase(double angle);

/// rho = ln(omega / omega0) / 2. Throws DomainError for non-positive input.
double rho_of(double omega, double omega0);

BogoliubovCoeffs bogoliubov_coeffs(double rho);

/// r = artanh|chi|, phi = arg(chi) + pi wrapped. A modulus in
/// [1, 1 + 1e-12] is clamped and counted; anything larger throws
/// SaturationError.
SqueezeParams chi_to_squeeze(complex chi, SaturationCounter* counter = nullptr);

/// Coefficients of a generic initial-basis squeeze operator rewritten on the
/// instantaneous generators T+, Tc, T-.
LambdaCoeffs lambda_coeffs(complex zeta, const BogoliubovCoeffs& g);

/// Disentangles S(z) S(-rho) into normal order on the instantaneous basis.
/// Throws SingularCompositionError when a denominator vanishes.
BchCoeffs compose_bch(const SqueezeParams& z, const BogoliubovCoeffs& g);

InstSqueezeParams bch_to_inst(const BchCoeffs& c, SaturationCounter* counter = nullptr);

/// |alpha|^2 + |beta| - 1; zero for an exact composition.
double unitarity_residual(const BchCoeffs& c);

/// Variance of Q_lambda = (e^{i lambda} a+ + e^{-i lambda} a)/sqrt 2 in the
/// squeezed vacuum. The instantaneous overload uses (R, Phi) and the b-mode
/// quadrature.
double quadrature_variance(const SqueezeParams& s, double lambda);
double quadrature_variance(const InstSqueezeParams& s, double lambda);

enum class Quadrature { position_like, momentum_like };

/// Maps an initial-basis variance at lambda = 0 or pi/2 onto the
/// instantaneous basis at frequency omega.
double variance_cross_basis(double var_initial, double omega, double omega0, Quadrature which);

struct FockExpansion {
    // Amplitude on |2n>, n = 0..n_max; odd levels vanish.
    std::vector<complex> even_amplitudes;
    // Sum of |amplitude|^2 actually captured by the truncation.
    double norm = 0.0;
};

/// Amplitudes of S(zeta)|0> on the even Fock levels of its own basis.
FockExpansion fock_coefficients(const SqueezeParams& s, std::size_t n_max);

/// Amplitudes of the state on the instantaneous Fock basis, built from the
/// composition coefficients with the overall phase dropped.
FockExpansion fock_coefficients(const BchCoeffs& c, std::size_t n_max);

} // namespace tdho
