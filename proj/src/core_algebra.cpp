#include "tdho/core_algebra.hpp"

#include "tdho/errors.hpp"

#include <cmath>
#include <sstream>

namespace tdho {

namespace {

// Applies the saturation guard and returns artanh of the (possibly clamped)
// modulus.
double guarded_artanh(double modulus, const char* what, SaturationCounter* counter)
{
    if (!std::isfinite(modulus)) {
        throw SaturationError(std::string("non-finite |") + what + "|");
    }
    if (modulus >= 1.0) {
        if (modulus > 1.0 + kSaturationSlack) {
            std::ostringstream msg;
            msg.precision(17);
            msg << "|" << what << "| = " << modulus << " lies outside the unit disk";
            throw SaturationError(msg.str());
        }
        if (counter != nullptr) {
            ++counter->clamps;
        }
        modulus = kSaturationClamp;
    }
    return std::atanh(modulus);
}

FockExpansion even_level_series(complex prefactor, complex step, std::size_t n_max)
{
    FockExpansion out;
    out.even_amplitudes.reserve(n_max + 1);
    complex c = prefactor;
    for (std::size_t n = 0; n <= n_max; ++n) {
        out.even_amplitudes.push_back(c);
        out.norm += std::norm(c);
        // c_{n+1} / c_n = step * sqrt((2n+1)(2n+2)) / (n+1)
        const double k = static_cast<double>(n);
        c *= step * (std::sqrt((2.0 * k + 1.0) * (2.0 * k + 2.0)) / (k + 1.0));
    }
    return out;
}

} // namespace

double wrap_phase(double angle)
{
    double w = std::remainder(angle, 2.0 * pi); // [-pi, pi]
    if (w <= -pi) {
        w += 2.0 * pi;
    }
    return w;
}

double rho_of(double omega, double omega0)
{
    if (!(omega > 0.0) || !(omega0 > 0.0)) {
        std::ostringstream msg;
        msg << "rho_of: frequencies must be positive (omega=" << omega << ", omega0=" << omega0 << ")";
        throw DomainError(msg.str());
    }
    return 0.5 * std::log(omega / omega0);
}

BogoliubovCoeffs bogoliubov_coeffs(double rho)
{
    return {std::cosh(rho), std::sinh(rho), rho};
}

SqueezeParams chi_to_squeeze(complex chi, SaturationCounter* counter)
{
    const double r = guarded_artanh(std::abs(chi), "chi", counter);
    return {r, wrap_phase(std::arg(chi) + pi)};
}

LambdaCoeffs lambda_coeffs(complex zeta, const BogoliubovCoeffs& g)
{
    const double g1sq = g.gamma1 * g.gamma1;
    const double g2sq = g.gamma2 * g.gamma2;
    const complex plus = std::conj(zeta) * g2sq - zeta * g1sq;
    const complex c = 2.0 * g.gamma1 * g.gamma2 * (zeta - std::conj(zeta));
    return {plus, c, -std::conj(plus)};
}

BchCoeffs compose_bch(const SqueezeParams& z, const BogoliubovCoeffs& g)
{
    const double g1 = g.gamma1;
    const double g2 = g.gamma2;
    const complex e = std::polar(1.0, z.phi);
    const complex e_conj = std::conj(e);
    const double sh = std::sinh(z.r);
    const double ch = std::cosh(z.r);

    const complex den = ch - g1 * g2 * (e - e_conj) * sh;
    const complex lam_plus = (e_conj * g2 * g2 - e * g1 * g1) * sh / den;
    const complex lam_minus = (e_conj * g1 * g1 - e * g2 * g2) * sh / den;
    const complex lam_c = 1.0 / (den * den);

    const complex q = g1 - g2 * lam_minus;
    if (!(std::abs(den) > 0.0) || !(std::abs(q) > 1e-14 * g1) || !std::isfinite(std::abs(q))) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "compose_bch: singular composition at r=" << z.r << ", phi=" << z.phi << ", rho=" << g.rho;
        throw SingularCompositionError(msg.str());
    }

    BchCoeffs out;
    out.alpha = lam_plus + g2 * lam_c / q;
    out.beta = lam_c / (q * q);
    out.gamma = (g1 * lam_minus - g2) / q;
    return out;
}

InstSqueezeParams bch_to_inst(const BchCoeffs& c, SaturationCounter* counter)
{
    InstSqueezeParams out;
    out.R = guarded_artanh(std::abs(c.alpha), "alpha", counter);
    out.Phi = wrap_phase(std::arg(c.alpha) + pi);
    out.beta_mod = std::abs(c.beta);
    out.upsilon = std::arg(c.beta);
    return out;
}

double unitarity_residual(const BchCoeffs& c)
{
    return std::norm(c.alpha) + std::abs(c.beta) - 1.0;
}

double quadrature_variance(const SqueezeParams& s, double lambda)
{
    const double x = lambda - 0.5 * s.phi;
    const double sn = std::sin(x);
    const double cs = std::cos(x);
    return 0.5 * std::exp(2.0 * s.r) * sn * sn + 0.5 * std::exp(-2.0 * s.r) * cs * cs;
}

double quadrature_variance(const InstSqueezeParams& s, double lambda)
{
    return quadrature_variance(SqueezeParams{s.R, s.Phi}, lambda);
}

double variance_cross_basis(double var_initial, double omega, double omega0, Quadrature which)
{
    if (!(omega > 0.0) || !(omega0 > 0.0)) {
        throw DomainError("variance_cross_basis: frequencies must be positive");
    }
    return which == Quadrature::position_like ? var_initial * (omega / omega0)
                                              : var_initial * (omega0 / omega);
}

FockExpansion fock_coefficients(const SqueezeParams& s, std::size_t n_max)
{
    const double t = std::tanh(s.r);
    const complex step = -0.5 * t * std::polar(1.0, s.phi);
    return even_level_series(std::sqrt(1.0 / std::cosh(s.r)), step, n_max);
}

FockExpansion fock_coefficients(const BchCoeffs& c, std::size_t n_max)
{
    // sqrt(|beta|^{1/2}) * (1/2 |alpha| e^{i theta})^n * sqrt((2n)!)/n!
    return even_level_series(std::pow(std::abs(c.beta), 0.25), 0.5 * c.alpha, n_max);
}

} // namespace tdho
