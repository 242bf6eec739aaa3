#include "catch_amalgamated.hpp"

#include "support/oracles.hpp"
#include "support/spec_builder.hpp"

using hrc::LatticeGrid;
using hrc::RegressionBasis;
using testutil::Spec1dOptions;

TEST_CASE("zero-cost instance cross-validates exactly") {
    Spec1dOptions o;
    o.bv = 1.0;
    o.bw = 1.0;
    o.sigma = 0.5;
    o.gen1 = "scaled-l1";
    o.kappa1 = 0.2;
    o.gen2 = "scaled-l1";
    o.kappa2 = 0.2;
    o.v_lo = -1.0; o.v_hi = 1.0; o.v_pts = 3;
    o.w_lo = -1.0; o.w_hi = 1.0; o.w_pts = 3;
    o.floor_ = 0.2;
    o.x0 = 0.25;
    auto spec = testutil::spec1d(o);
    auto g = LatticeGrid::build(spec, {41}, 0.0);
    auto sol = hrc::backward_sweep_hierarchical(spec, g);
    auto rep = hrc::cross_validate(spec, sol, 2000, 1.0 / 64.0, 7, RegressionBasis{2});
    CHECK(rep.gap_leader <= 1e-6);
    CHECK(rep.gap_follower <= 1e-6);
}

TEST_CASE("diffusion-only instance matches the closed form on both routes") {
    auto spec = hrc::load_problem(testutil::problems_dir() + "/heat1d.json");
    auto g = LatticeGrid::build(spec, {201}, 0.0);
    auto sol = hrc::backward_sweep_hierarchical(spec, g);
    auto rep = hrc::cross_validate(spec, sol, 20000, 1.0 / 128.0, 11, RegressionBasis{2});
    const double exact = oracle::heat_second_moment(0.25, 0.3, 1.0);
    CHECK(std::abs(rep.grid_value_follower - exact) <= 0.02 * exact);
    CHECK(rep.gap_follower <= 0.02 * exact + 3.0 * rep.se_follower);
    CHECK(rep.gap_leader <= 0.02 * exact + 3.0 * rep.se_leader);
}

TEST_CASE("affine-volatility instance matches its moment oracle") {
    auto spec = hrc::load_problem(testutil::problems_dir() + "/heat1d_affine.json");
    auto g = LatticeGrid::build(spec, {201}, 0.0);
    auto sol = hrc::backward_sweep_hierarchical(spec, g);
    double grid_val = g.interpolate(sol.follower_value.slice(0), spec.initial_state);
    const double exact = oracle::affine_sigma_second_moment(0.25, 0.5, 0.15, 1.0);
    CHECK(std::abs(grid_val - exact) <= 0.02 * exact);
}

TEST_CASE("start states near the boundary are rejected") {
    Spec1dOptions o;
    o.sigma = 0.5;
    o.x0 = -1.9;
    o.floor_ = 0.2;
    auto spec = testutil::spec1d(o);
    auto g = LatticeGrid::build(spec, {21}, 0.0);
    auto sol = hrc::backward_sweep_hierarchical(spec, g);
    CHECK_THROWS_AS(hrc::cross_validate(spec, sol, 500, 1.0 / 32.0, 3, RegressionBasis{2}),
                    std::invalid_argument);
}
