#include <doctest.h>

#include "tdho/errors.hpp"
#include "tdho/oracles.hpp"

#include <cmath>
#include <limits>

using namespace tdho;

namespace {

std::vector<SweepPoint> ansatz_data(double c1, double c2, double wobble)
{
    std::vector<SweepPoint> out;
    int k = 0;
    for (double ratio : default_fit_ratios()) {
        for (double eps : default_fit_epsilons()) {
            const double R = ansatz_sp(1.0, ratio, eps, c1, c2) * (1.0 + wobble * std::sin(1.7 * ++k));
            out.push_back({1.0, ratio, eps, R});
        }
    }
    return out;
}

double sse(const std::vector<SweepPoint>& data, double c1, double c2)
{
    double s = 0.0;
    for (const auto& p : data) {
        const double d = ansatz_sp(p.omega0, p.omegaf, p.epsilon, c1, c2) - p.R;
        s += d * d;
    }
    return s;
}

// Exhaustive search on a coarse grid, then successively finer grids around
// the incumbent.
std::pair<double, double> brute_force_fit(const std::vector<SweepPoint>& data)
{
    double best = std::numeric_limits<double>::infinity();
    double b1 = 0.0, b2 = 0.0;
    double lo1 = 0.1, hi1 = 6.0, lo2 = -0.4, hi2 = 4.0;
    for (int level = 0; level < 7; ++level) {
        const int n = 60;
        for (int i = 0; i <= n; ++i) {
            for (int j = 0; j <= n; ++j) {
                const double c1 = lo1 + (hi1 - lo1) * i / n;
                const double c2 = lo2 + (hi2 - lo2) * j / n;
                const double s = sse(data, c1, c2);
                if (s < best) {
                    best = s;
                    b1 = c1;
                    b2 = c2;
                }
            }
        }
        const double w1 = 2.0 * (hi1 - lo1) / n, w2 = 2.0 * (hi2 - lo2) / n;
        lo1 = b1 - w1, hi1 = b1 + w1, lo2 = b2 - w2, hi2 = b2 + w2;
    }
    return {b1, b2};
}

} // namespace

TEST_CASE("jump closed form")
{
    const double ln3 = std::log(3.0);
    CHECK(jump_sp_closed_form(1.0, 3.0, 0.0) == 0.0);
    // maximum 2 rho_f at a quarter period
    CHECK(jump_sp_closed_form(1.0, 3.0, pi / 6.0) == doctest::Approx(ln3).epsilon(1e-14));
    CHECK(jump_sp_closed_form(1.0, 3.0, pi / 3.0) < 1e-7);
    // symmetric in w0 <-> wf up to time rescaling
    CHECK(jump_sp_closed_form(3.0, 1.0, pi / 2.0) == doctest::Approx(ln3).epsilon(1e-14));
}

TEST_CASE("sech formula")
{
    const double rho_f = 0.5 * std::log(3.0);
    CHECK(fitted_sp(1.0, 3.0, 0.0) == doctest::Approx(rho_f).epsilon(1e-15));
    CHECK(fitted_sp(1.0, 3.0, 1.5) == doctest::Approx(0.010525415667885296).epsilon(1e-13));
    CHECK(fitted_sp(1.0, 5.0, 0.4) == doctest::Approx(0.35983629547320828).epsilon(1e-13));
    CHECK(fitted_sp(1.0, 0.2, 0.4) == doctest::Approx(0.77229773277360649).epsilon(1e-13));
    CHECK(fitted_sp(2.0, 2.0, 0.7) == 0.0);
    CHECK(ansatz_sp(1.0, 3.0, 1.5, 2.0, 1.0) == fitted_sp(1.0, 3.0, 1.5));
    // the formula can never exceed |rho_f|
    for (double eps : {0.0, 0.01, 0.1, 1.0}) {
        CHECK(fitted_sp(1.0, 0.2, eps) <= 0.5 * std::log(5.0) + 1e-15);
    }
    CHECK(within_fit_validity(1.0, 10.0));
    CHECK(within_fit_validity(1.0, 0.1));
    CHECK_FALSE(within_fit_validity(1.0, 10.5));
}

TEST_CASE("adiabaticity measure")
{
    CHECK(adiabaticity_measure(1.0, 3.0, 1.5) == doctest::Approx(0.21515007511740779).epsilon(1e-14));
    CHECK(adiabaticity_measure(3.0, 1.0, 1.0) == doctest::Approx(0.32272511267611168).epsilon(1e-14));
    CHECK(std::isinf(adiabaticity_measure(1.0, 3.0, 0.0)));
    CHECK_THROWS_AS(adiabaticity_measure(2.0, 2.0, 1.0), DomainError);
    CHECK(is_adiabatic(0.05));
    CHECK_FALSE(is_adiabatic(0.21515));
    CHECK(is_adiabatic(0.21515, 0.3));
}

TEST_CASE("fit recovers exact ansatz data")
{
    const auto data = ansatz_data(2.0, 1.0, 0.0);
    const auto fit = fit_ansatz(data);
    CHECK(fit.c1 == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(fit.c2 == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(fit.residual_rms < 1e-12);
    CHECK(fit.n_points == 80);

    const auto other = fit_ansatz(ansatz_data(2.7, 0.6, 0.0));
    CHECK(other.c1 == doctest::Approx(2.7).epsilon(1e-9));
    CHECK(other.c2 == doctest::Approx(0.6).epsilon(1e-9));
}

TEST_CASE("fit matches the brute-force minimiser on perturbed data")
{
    const auto data = ansatz_data(2.4, 0.8, 0.05);
    const auto fit = fit_ansatz(data);
    const auto [b1, b2] = brute_force_fit(data);
    CHECK(fit.c1 == doctest::Approx(b1).epsilon(1e-4));
    CHECK(fit.c2 == doctest::Approx(b2).epsilon(1e-4));
    CHECK(sse(data, fit.c1, fit.c2) <= sse(data, b1, b2) * (1.0 + 1e-9));
}

TEST_CASE("fit diagnostics")
{
    std::vector<SweepPoint> flat{{1.0, 3.0, 0.0, 0.5}, {1.0, 1.0, 0.5, 0.0}, {1.0, 3.0, 0.0, 0.55}};
    CHECK_THROWS_AS(fit_ansatz(flat), RankDeficiencyError);
    CHECK_THROWS_AS(fit_ansatz(std::vector<SweepPoint>{{1.0, 3.0, 0.5, 0.1}}), RankDeficiencyError);

    std::vector<SweepPoint> few;
    for (double eps : {0.2, 0.5, 1.0}) {
        for (double ratio : {2.0, 4.0}) {
            few.push_back({1.0, ratio, eps, fitted_sp(1.0, ratio, eps)});
        }
    }
    const auto fit = fit_ansatz(few);
    CHECK(fit.c1 == doctest::Approx(2.0).epsilon(1e-8));
    CHECK_FALSE(fit.warnings.empty());
}

TEST_CASE("contour grids")
{
    const auto above = contour_grid({1.0, 10.0}, {0.0, 2.0}, 10, 11, ContourMode::above_unity, ContourSource::formula);
    REQUIRE(above.cells.size() == 110);
    // ratio 5 is row 4, w0 eps = 0.4 is column 2
    const auto& c = above.cells[4 * 11 + 2];
    CHECK(c.ratio == doctest::Approx(5.0));
    CHECK(c.omega0_eps == doctest::Approx(0.4));
    CHECK(c.R == doctest::Approx(0.35983629547320828).epsilon(1e-13));
    CHECK(above.n_outside_validity == 0);
    CHECK(above.cells.front().R == 0.0);

    const auto below = contour_grid({0.1, 1.0}, {0.0, 2.0}, 10, 11, ContourMode::below_unity, ContourSource::formula);
    const auto& d = below.cells[1 * 11 + 2];
    CHECK(d.ratio == doctest::Approx(0.2));
    CHECK(d.R == doctest::Approx(0.77229773277360649).epsilon(1e-13));

    const auto wide = contour_grid({1.0, 20.0}, {0.0, 1.0}, 20, 2, ContourMode::above_unity, ContourSource::formula);
    CHECK(wide.n_outside_validity > 0);

    CHECK_THROWS_AS(
        contour_grid({0.5, 2.0}, {0.0, 1.0}, 3, 3, ContourMode::above_unity, ContourSource::formula), DomainError);
    CHECK_THROWS_AS(
        contour_grid({0.5, 2.0}, {0.0, 1.0}, 3, 3, ContourMode::below_unity, ContourSource::formula), DomainError);
}

TEST_CASE("simulated sweep")
{
    SimulationConfig cfg;
    cfg.n_slices = 4096;
    const std::vector<double> eps{0.0, 1.5};
    const auto entries = sweep_final_sp(1.0, 3.0, eps, cfg, SweepOptions{10.0, 2});
    REQUIRE(entries.size() == 2);
    for (const auto& e : entries) {
        CHECK(e.error.empty());
        CHECK(e.converged);
    }
    // after a jump the instantaneous squeeze is exactly |rho_f|
    CHECK(entries[0].R_sim == doctest::Approx(0.5 * std::log(3.0)).epsilon(1e-9));
    CHECK(entries[1].R_sim == doctest::Approx(0.0113).epsilon(0.01));
    CHECK(entries[1].rel_err == doctest::Approx((entries[1].R_sim - entries[1].R_formula) / entries[1].R_formula));
}
