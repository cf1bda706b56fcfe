#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "transonic/errors.hpp"
#include "transonic/iteration.hpp"

using namespace transonic;

namespace {

TransonicProblem coarse(const std::map<int, double>& modes)
{
    TransonicProblem p;
    p.config.n1 = 129;
    p.config.n2 = 16;
    p.g = CircleSeries::from_cosine_modes(modes);
    return p;
}

}  // namespace

TEST_CASE("lifted boundary datum is constant in x1")
{
    const CircleSeries g = CircleSeries::from_cosine_modes({{2, 0.1}});
    const Field2D lift = lift_boundary(g, Grid1D::make(33), 8);
    for (int i = 0; i < lift.n1(); ++i)
        for (int j = 0; j < 8; ++j)
            CHECK(lift(i, j) == doctest::Approx(0.1 * std::cos(2 * lift.x2(j))).epsilon(1e-13).scale(1e-13));
}

TEST_CASE("zero datum stops after one step at the background")
{
    const auto [sol, rep] = solve_transonic(coarse({}));
    CHECK(sol.state.iterations == 1);
    CHECK(sol.phi_hat.max_abs() == 0.0);
    CHECK(rep.get("status") == "converged");
    CHECK(rep.get("stability_ratio") == "undefined");
    CHECK(std::isnan(sol.stability_ratio));
}

TEST_CASE("constant datum shifts the potential")
{
    const double c = 5e-3;
    const auto [sol, rep] = solve_transonic(coarse({{0, c}}));
    double dev = 0.0;
    for (double v : sol.phi_hat.values())
        dev = std::max(dev, std::abs(v - c));
    CHECK(dev <= 1e-9);
}

TEST_CASE("cosine datum converges with contracting steps")
{
    const TransonicProblem p = coarse({{1, 1e-3}});
    const BackgroundFlow bg = solve_background(p.gas, p.nozzle, p.grid());
    const auto [sol, rep] = solve_transonic(p);
    CHECK(rep.get("status") == "converged");
    CHECK(sol.state.iterations >= 2);
    CHECK(sol.state.iterations <= 6);
    for (std::size_t k = 1; k < sol.state.contraction_ratios.size(); ++k)
        CHECK(sol.state.contraction_ratios[k] < 1.0);
    CHECK(sol.stability_ratio > 0.0);
    CHECK(sol.state.kappa_measured <= p.config.kappa0);
    // Entry rows carry the datum.
    for (int j = 0; j < 16; ++j)
        CHECK(sol.phi_hat(0, j) == doctest::Approx(1e-3 * std::cos(sol.phi_hat.x2(j))).epsilon(1e-9).scale(1e-12));

    const DiagnosticsTable d = diagnostics(sol, bg);
    CHECK(d.bernoulli_residual < 1e-12);
    CHECK(d.equation_residual <= std::max(1e-7, 5 * bg.grid.dx() * bg.grid.dx()));
    for (int changes : d.k_sign_changes)
        CHECK(changes == 1);
    CHECK(d.sonic_displacement > 0.0);
    CHECK(d.sonic_displacement < 0.01);
    CHECK(mode_amplitude(sol.phi_hat, 1) == doctest::Approx(1e-3).epsilon(1e-6));
    CHECK(mode_amplitude(sol.phi_hat, 2) < 1e-5);
}

TEST_CASE("oversized datum is rejected")
{
    TransonicProblem p = coarse({{1, 1.0}});
    CHECK_THROWS_AS(p.validate(), AdmissibilityError);
    CHECK_THROWS_AS(solve_transonic(p), AdmissibilityError);
}

TEST_CASE("iteration budget is enforced")
{
    TransonicProblem p = coarse({{1, 1e-3}});
    p.config.max_iter = 1;
    CHECK_THROWS_AS(solve_transonic(p), NoConvergence);
}

TEST_CASE("sweep rows follow the amplitude")
{
    TransonicProblem p = coarse({});
    const std::vector<double> eps{1e-3, 1e-4};
    const auto rows = sweep(p, eps, 1, 2);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].eps == 1e-3);
    CHECK(rows[1].g_norm5 == doctest::Approx(0.1 * rows[0].g_norm5));
    CHECK(rows[1].stability_ratio == doctest::Approx(rows[0].stability_ratio).epsilon(0.05));
    CHECK(rows[1].sonic_displacement == doctest::Approx(0.1 * rows[0].sonic_displacement).epsilon(0.05));
}
