#include <doctest.h>

#include "tdho/core_algebra.hpp"
#include "tdho/evolution.hpp"
#include "tdho/oracles.hpp"

#include <cmath>
#include <random>

using namespace tdho;

namespace {

struct Rng {
    std::mt19937_64 gen;
    explicit Rng(std::uint64_t seed) : gen(seed) {}
    double operator()(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen); }
};

constexpr int kCases = 10000;

} // namespace

TEST_CASE("wrap_phase lands in (-pi, pi] and preserves the angle")
{
    Rng u(1);
    for (int i = 0; i < kCases; ++i) {
        const double a = u(-50.0, 50.0);
        const double w = wrap_phase(a);
        REQUIRE(w > -pi);
        REQUIRE(w <= pi);
        REQUIRE(std::abs(std::remainder(w - a, 2.0 * pi)) < 1e-12);
        REQUIRE(wrap_phase(w) == w);
    }
}

TEST_CASE("chi round trip")
{
    Rng u(2);
    for (int i = 0; i < kCases; ++i) {
        const double r = u(0.0, 5.0);
        const double phi = u(-pi, pi);
        const complex chi = -std::polar(std::tanh(r), phi);
        const auto s = chi_to_squeeze(chi);
        REQUIRE(s.r == doctest::Approx(r).epsilon(1e-9));
        if (r > 1e-3) {
            REQUIRE(std::abs(wrap_phase(s.phi - phi)) < 1e-12);
        }
    }
}

TEST_CASE("composition: unitarity and inverse basis change")
{
    Rng u(3);
    double worst = 0.0;
    for (int i = 0; i < kCases; ++i) {
        const SqueezeParams z{u(0.0, 3.0), u(-pi, pi)};
        const double rho = u(-1.5, 1.5);
        const auto c = compose_bch(z, bogoliubov_coeffs(rho));
        worst = std::max(worst, std::abs(unitarity_residual(c)));
        REQUIRE(std::abs(c.gamma) == doctest::Approx(std::abs(c.alpha)).epsilon(1e-9).scale(1.0));
        // switching back to the original basis recovers r
        const auto inst = bch_to_inst(c);
        const auto back = bch_to_inst(compose_bch(SqueezeParams{inst.R, inst.Phi}, bogoliubov_coeffs(-rho)));
        REQUIRE(back.R == doctest::Approx(z.r).epsilon(1e-8).scale(1.0));
    }
    CHECK(worst < 1e-12);
}

TEST_CASE("quadrature variance bounds")
{
    Rng u(4);
    for (int i = 0; i < kCases; ++i) {
        const SqueezeParams s{u(0.0, 3.0), u(-pi, pi)};
        const double lam = u(-pi, pi);
        const double v = quadrature_variance(s, lam);
        const double w = quadrature_variance(s, lam + 0.5 * pi);
        REQUIRE(v >= 0.5 * std::exp(-2.0 * s.r) * (1.0 - 1e-12));
        REQUIRE(v <= 0.5 * std::exp(2.0 * s.r) * (1.0 + 1e-12));
        REQUIRE(v + w == doctest::Approx(std::cosh(2.0 * s.r)).epsilon(1e-12));
        REQUIRE(v * w >= 0.25 * (1.0 - 1e-12));
    }
}

TEST_CASE("Fock partial sums increase towards one")
{
    Rng u(5);
    for (int i = 0; i < 2000; ++i) {
        const SqueezeParams s{u(0.0, 1.2), u(-pi, pi)};
        const auto f = fock_coefficients(s, 200);
        double partial = 0.0;
        for (const auto& c : f.even_amplitudes) {
            const double next = partial + std::norm(c);
            REQUIRE(next >= partial);
            partial = next;
        }
        REQUIRE(f.norm >= 1.0 - 1e-8);
        REQUIRE(f.norm <= 1.0 + 1e-12);
    }
}

TEST_CASE("random profiles: trajectory invariants")
{
    Rng u(6);
    for (int i = 0; i < 40; ++i) {
        const double w0 = u(0.3, 3.0);
        const double wf = u(0.3, 3.0);
        const double eps = u(0.0, 1.0);
        const auto p = FrequencyProfile::tanh(w0, wf, 4.0, eps);
        SimulationConfig cfg;
        cfg.n_slices = 2048;
        cfg.record_stride = 8;
        const auto traj = propagate(p, cfg);
        REQUIRE(traj.records.front().r == 0.0);
        REQUIRE(traj.max_unitarity_residual() < 1e-10);
        for (const auto& rec : traj.records) {
            REQUIRE(std::abs(rec.chi) < 1.0);
            REQUIRE(rec.r >= 0.0);
            REQUIRE(rec.R >= 0.0);
            // triangle inequality: the bases differ by a squeeze of |rho|
            REQUIRE(std::abs(rec.R - rec.r) <= std::abs(rec.rho) + 1e-12);
        }
    }
}

TEST_CASE("sech formula properties")
{
    Rng u(7);
    for (int i = 0; i < kCases; ++i) {
        const double k = u(0.1, 10.0);
        const double e1 = u(0.0, 3.0);
        const double e2 = e1 + u(1e-6, 1.0);
        const double rho_f = std::abs(0.5 * std::log(k));
        REQUIRE(fitted_sp(1.0, k, e1) <= rho_f * (1.0 + 1e-15));
        REQUIRE(fitted_sp(1.0, k, e2) <= fitted_sp(1.0, k, e1));
        // the sudden limit is symmetric under k -> 1/k
        REQUIRE(fitted_sp(1.0, k, 0.0) == doctest::Approx(fitted_sp(1.0, 1.0 / k, 0.0)).epsilon(1e-13));
        if (std::abs(k - 1.0) > 1e-9 && e1 > 0.0) {
            REQUIRE(adiabaticity_measure(1.0, k, e2) < adiabaticity_measure(1.0, k, e1));
        }
    }
}

TEST_CASE("jump closed form stays in [0, 2 |rho_f|]")
{
    Rng u(8);
    for (int i = 0; i < kCases; ++i) {
        const double w0 = u(0.1, 5.0), wf = u(0.1, 5.0), t = u(0.0, 20.0);
        const double r = jump_sp_closed_form(w0, wf, t);
        REQUIRE(r >= 0.0);
        REQUIRE(r <= std::abs(std::log(wf / w0)) + 1e-12);
    }
}
