#include <doctest.h>

#include "tdho/core_algebra.hpp"
#include "tdho/errors.hpp"

#include <cmath>

using namespace tdho;

namespace {

// Closed-form squeezed-vacuum amplitude on |2n>:
//   sqrt(sech r) (-e^{i phi} tanh r / 2)^n sqrt((2n)!) / n!
complex squeezed_amplitude(double r, double phi, int n)
{
    const double log_mag = 0.5 * std::log(1.0 / std::cosh(r)) + n * std::log(0.5 * std::tanh(r))
                           + 0.5 * std::lgamma(2.0 * n + 1.0) - std::lgamma(n + 1.0);
    return std::polar(std::exp(log_mag), n * (phi + pi));
}

} // namespace

TEST_CASE("rho_of")
{
    CHECK(rho_of(3.0, 1.0) == doctest::Approx(0.5493061443340549).epsilon(1e-15));
    CHECK(rho_of(1.0, 1.0) == 0.0);
    CHECK(rho_of(1.0, 3.0) == doctest::Approx(-0.5493061443340549).epsilon(1e-15));
    CHECK_THROWS_AS(rho_of(0.0, 1.0), DomainError);
    CHECK_THROWS_AS(rho_of(1.0, -2.0), DomainError);
}

TEST_CASE("bogoliubov coefficients")
{
    const auto g = bogoliubov_coeffs(rho_of(3.0, 1.0));
    // cosh(ln3 / 2) = 2/sqrt3, sinh(ln3 / 2) = 1/sqrt3
    CHECK(g.gamma1 == doctest::Approx(2.0 / std::sqrt(3.0)).epsilon(1e-15));
    CHECK(g.gamma2 == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-15));
    CHECK(g.gamma1 * g.gamma1 - g.gamma2 * g.gamma2 == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("wrap_phase maps onto (-pi, pi]")
{
    CHECK(wrap_phase(pi) == doctest::Approx(pi));
    CHECK(wrap_phase(-pi) == doctest::Approx(pi));
    CHECK(wrap_phase(3.0 * pi / 2.0) == doctest::Approx(-pi / 2.0));
    CHECK(wrap_phase(0.25) == 0.25);
    CHECK(wrap_phase(0.25 + 8.0 * pi) == doctest::Approx(0.25));
}

TEST_CASE("chi_to_squeeze")
{
    SUBCASE("vacuum")
    {
        const auto s = chi_to_squeeze({0.0, 0.0});
        CHECK(s.r == 0.0);
        CHECK(s.phi == doctest::Approx(pi));
    }
    SUBCASE("modulus and phase")
    {
        // artanh(0.5) = ln 3 / 2; arg(-0.5) + pi = 2 pi -> 0
        const auto s = chi_to_squeeze({-0.5, 0.0});
        CHECK(s.r == doctest::Approx(0.5493061443340549));
        CHECK(std::abs(s.phi) < 1e-15);
        const auto t = chi_to_squeeze({0.0, 0.5});
        CHECK(t.phi == doctest::Approx(-pi / 2.0));
    }
    SUBCASE("saturation")
    {
        SaturationCounter counter;
        const auto s = chi_to_squeeze({1.0 + 1e-13, 0.0}, &counter);
        CHECK(counter.clamps == 1);
        CHECK(std::isfinite(s.r));
        CHECK(s.r > 17.0);
        CHECK_THROWS_AS(chi_to_squeeze({1.001, 0.0}), SaturationError);
    }
}

TEST_CASE("lambda coefficients")
{
    SUBCASE("rho = 0 leaves the squeeze untouched")
    {
        const complex zeta = std::polar(0.7, 0.3);
        const auto l = lambda_coeffs(zeta, bogoliubov_coeffs(0.0));
        CHECK(std::abs(l.plus + zeta) < 1e-15);
        CHECK(std::abs(l.c) == 0.0);
        CHECK(l.minus == -std::conj(l.plus));
    }
    SUBCASE("vacuum zeta")
    {
        const auto l = lambda_coeffs({0.0, 0.0}, bogoliubov_coeffs(0.4));
        CHECK(std::abs(l.plus) == 0.0);
        CHECK(std::abs(l.c) == 0.0);
        CHECK(std::abs(l.minus) == 0.0);
    }
    SUBCASE("generic")
    {
        // cosh^2 = 1.25, sinh^2 = 0.25 at rho = asinh(1/2)
        const auto l = lambda_coeffs({0.0, 1.0}, bogoliubov_coeffs(std::asinh(0.5)));
        CHECK(std::abs(l.plus - complex(0.0, -1.5)) < 1e-15);
        CHECK(std::abs(l.c - complex(0.0, 2.0 * std::sqrt(1.25) * 0.5 * 2.0)) < 1e-14);
    }
}

TEST_CASE("composition on the instantaneous basis")
{
    SUBCASE("vacuum seen from a squeezed basis")
    {
        // S(0) S(-rho): pure basis squeeze with R = |rho|.
        const double rho = rho_of(3.0, 1.0);
        const auto c = compose_bch(SqueezeParams{0.0, pi}, bogoliubov_coeffs(rho));
        const auto inst = bch_to_inst(c);
        CHECK(inst.R == doctest::Approx(rho).epsilon(1e-14));
        CHECK(std::abs(unitarity_residual(c)) < 1e-15);
    }
    SUBCASE("squeeze along the basis change cancels")
    {
        // r = rho with the matching phase gives R = 0.
        const double rho = 0.35;
        const auto c = compose_bch(SqueezeParams{rho, 0.0}, bogoliubov_coeffs(rho));
        CHECK(bch_to_inst(c).R < 1e-14);
    }
    SUBCASE("cosh 2R from quadrature variances")
    {
        const SqueezeParams z{1.1, 0.7};
        const double omega = 2.5;
        const double rho = rho_of(omega, 1.0);
        const double cosh2R = omega * quadrature_variance(z, 0.0) + quadrature_variance(z, 0.5 * pi) / omega;
        const auto inst = bch_to_inst(compose_bch(z, bogoliubov_coeffs(rho)));
        CHECK(std::cosh(2.0 * inst.R) == doctest::Approx(cosh2R).epsilon(1e-13));
    }
}

TEST_CASE("quadrature variance")
{
    const SqueezeParams s{0.5, 0.0};
    // lambda = phi/2 is the squeezed axis
    CHECK(quadrature_variance(s, 0.0) == doctest::Approx(0.5 * std::exp(-1.0)));
    CHECK(quadrature_variance(s, 0.5 * pi) == doctest::Approx(0.5 * std::exp(1.0)));
    CHECK(quadrature_variance(SqueezeParams{0.0, pi}, 1.234) == doctest::Approx(0.5));

    const InstSqueezeParams inst{0.5, 0.0, 1.0, 0.0};
    CHECK(quadrature_variance(inst, 0.0) == doctest::Approx(0.5 * std::exp(-1.0)));
}

TEST_CASE("variance_cross_basis")
{
    CHECK(variance_cross_basis(0.5, 3.0, 1.0, Quadrature::position_like) == doctest::Approx(1.5));
    CHECK(variance_cross_basis(0.5, 3.0, 1.0, Quadrature::momentum_like) == doctest::Approx(0.5 / 3.0));
}

TEST_CASE("Fock expansion against the closed form")
{
    const SqueezeParams s{0.9, -1.3};
    const auto f = fock_coefficients(s, 60);
    REQUIRE(f.even_amplitudes.size() == 61);
    for (int n = 0; n <= 60; n += 7) {
        const complex want = squeezed_amplitude(s.r, s.phi, n);
        CHECK(std::abs(f.even_amplitudes[n] - want) < 1e-13);
    }
    CHECK(f.norm == doctest::Approx(1.0).epsilon(1e-8));

    const auto vac = fock_coefficients(SqueezeParams{0.0, pi}, 10);
    CHECK(std::abs(vac.even_amplitudes[0] - 1.0) < 1e-15);
    CHECK(std::abs(vac.even_amplitudes[3]) == 0.0);
}

TEST_CASE("Fock expansion on the instantaneous basis")
{
    // A composed state must carry the amplitudes of a squeeze with (R, Phi).
    const auto c = compose_bch(SqueezeParams{0.6, 2.0}, bogoliubov_coeffs(-0.4));
    const auto inst = bch_to_inst(c);
    const auto f = fock_coefficients(c, 40);
    for (int n = 0; n <= 40; n += 5) {
        CHECK(std::abs(std::abs(f.even_amplitudes[n]) - std::abs(squeezed_amplitude(inst.R, inst.Phi, n))) < 1e-13);
    }
    CHECK(f.norm == doctest::Approx(1.0).epsilon(1e-8));
}
