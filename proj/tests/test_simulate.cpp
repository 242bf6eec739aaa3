#include "catch_amalgamated.hpp"

#include "support/spec_builder.hpp"

using hrc::FeedbackPolicy;
using hrc::PathBundle;
using hrc::Player;
using hrc::Vec;
using testutil::Spec1dOptions;

namespace {
Vec v1(double a) {
    Vec v(1);
    v[0] = a;
    return v;
}
FeedbackPolicy zero_policy() { return FeedbackPolicy::constant(v1(0.0)); }
}  // namespace

TEST_CASE("zero dynamics freeze every path at the start point") {
    Spec1dOptions o;
    o.sigma = 0.0;  // below any floor; simulation still runs
    o.x0 = 0.7;
    auto spec = testutil::spec1d(o);
    auto b = hrc::simulate(spec, zero_policy(), zero_policy(), 50, 1.0 / 16.0, 5);
    for (int p = 0; p < b.n_paths; ++p)
        for (int k = 0; k <= b.n_steps; ++k) CHECK(b.state_ptr(p, k)[0] == 0.7);
}

TEST_CASE("pure-noise terminal statistics match the distribution") {
    Spec1dOptions o;
    o.sigma = 1.0;
    o.x0 = 0.0;
    auto spec = testutil::spec1d(o);
    const int n = 100000;
    auto b = hrc::simulate(spec, zero_policy(), zero_policy(), n, 1.0 / 16.0, 42);
    double s = 0.0, s2 = 0.0;
    for (int p = 0; p < n; ++p) {
        double x = b.state_ptr(p, b.n_steps)[0];
        s += x;
        s2 += x * x;
    }
    double mean = s / n;
    double var = s2 / n - mean * mean;
    CHECK(std::abs(mean) <= 3.0 / std::sqrt(static_cast<double>(n)));
    CHECK(std::abs(var - 1.0) <= 0.05);
}

TEST_CASE("increment moments stay within five standard errors") {
    auto b = hrc::brownian_only(2, 1.0, 1.0 / 32.0, 20000, 99);
    const double dt = b.dt;
    for (int i = 0; i < 2; ++i) {
        double s = 0.0, s2 = 0.0;
        std::size_t cnt = 0;
        for (int p = 0; p < b.n_paths; ++p)
            for (int k = 0; k < b.n_steps; ++k) {
                double d = b.increment_ptr(p, k)[i];
                s += d;
                s2 += d * d;
                ++cnt;
            }
        double mean = s / static_cast<double>(cnt);
        double var = s2 / static_cast<double>(cnt) - mean * mean;
        double se_mean = std::sqrt(dt / static_cast<double>(cnt));
        double se_var = dt * std::sqrt(2.0 / static_cast<double>(cnt));
        CHECK(std::abs(mean) <= 5.0 * se_mean);
        CHECK(std::abs(var - dt) <= 5.0 * se_var);
    }
}

TEST_CASE("accumulated costs: constant rate, terminal-only, constant control") {
    // c == 1, Psi == 0, T = 1: every entry 1
    {
        Spec1dOptions o;
        o.c1_0 = 1.0;
        auto spec = testutil::spec1d(o);
        auto b = hrc::simulate(spec, zero_policy(), zero_policy(), 20, 1.0 / 64.0, 3);
        for (double v : hrc::accumulate_cost(b, spec, Player::Leader))
            CHECK(v == Catch::Approx(1.0).margin(1e-12));
    }
    // c == 0, Psi = x: entries equal the terminal state
    {
        Spec1dOptions o;
        o.psi2_x = 1.0;
        auto spec = testutil::spec1d(o);
        auto b = hrc::simulate(spec, zero_policy(), zero_policy(), 20, 1.0 / 32.0, 4);
        auto xi = hrc::accumulate_cost(b, spec, Player::Follower);
        for (int p = 0; p < b.n_paths; ++p)
            CHECK(xi[static_cast<std::size_t>(p)] == b.state_ptr(p, b.n_steps)[0]);
    }
    // c(v) = v^2 under constant v = 0.5, T = 2: 0.25 * 2 = 0.5
    {
        Spec1dOptions o;
        o.horizon = 2.0;
        o.c1_uu = 1.0;
        o.v_lo = -1.0;
        o.v_hi = 1.0;
        o.v_pts = 3;
        auto spec = testutil::spec1d(o);
        auto b = hrc::simulate(spec, FeedbackPolicy::constant(v1(0.5)), zero_policy(), 10,
                               1.0 / 32.0, 6);
        for (double v : hrc::accumulate_cost(b, spec, Player::Leader))
            CHECK(v == Catch::Approx(0.5).margin(1e-12));
    }
}

TEST_CASE("one-step noise fixture equals its increment") {
    auto b = hrc::brownian_only(1, 1.0, 1.0, 500, 17);
    REQUIRE(b.n_steps == 1);
    for (int p = 0; p < b.n_paths; ++p)
        CHECK(b.state_ptr(p, 1)[0] == b.increment_ptr(p, 0)[0]);
}

TEST_CASE("distinct paths have distinct increments") {
    auto b = hrc::brownian_only(1, 1.0, 0.5, 200, 23);
    for (int p = 1; p < b.n_paths; ++p)
        CHECK(b.increment_ptr(p, 0)[0] != b.increment_ptr(p - 1, 0)[0]);
}

TEST_CASE("fixed seed reproduces the bundle bit for bit") {
    auto a = hrc::brownian_only(2, 1.0, 1.0 / 8.0, 300, 77);
    auto b = hrc::brownian_only(2, 1.0, 1.0 / 8.0, 300, 77);
    CHECK(a.states == b.states);
    CHECK(a.increments == b.increments);
    auto c = hrc::brownian_only(2, 1.0, 1.0 / 8.0, 300, 78);
    CHECK(a.states != c.states);
}

TEST_CASE("worker count does not change the result") {
    Spec1dOptions o;
    o.sigma = 0.8;
    o.bv = 1.0;
    o.v_lo = -1.0;
    o.v_hi = 1.0;
    o.v_pts = 3;
    auto spec = testutil::spec1d(o);
    auto p = FeedbackPolicy::constant(v1(1.0));
    auto a = hrc::simulate(spec, p, zero_policy(), 4000, 1.0 / 32.0, 11, 1);
    auto b = hrc::simulate(spec, p, zero_policy(), 4000, 1.0 / 32.0, 11, 3);
    CHECK(a.states == b.states);
    CHECK(a.increments == b.increments);
    CHECK(a.leader_applied == b.leader_applied);
}

TEST_CASE("invalid step sizes are rejected") {
    Spec1dOptions o;
    auto spec = testutil::spec1d(o);
    CHECK_THROWS_AS(hrc::simulate(spec, zero_policy(), zero_policy(), 10, -0.1, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(hrc::simulate(spec, zero_policy(), zero_policy(), 10, 0.3, 1),
                    std::invalid_argument);
}

TEST_CASE("euler mean tracks the affine-drift moment at both step sizes") {
    // dX = (a X + b) dt + s dB with constant controls folded into b
    Spec1dOptions o;
    o.drift_x = 0.3;
    o.drift_b = 0.2;
    o.sigma = 0.5;
    o.x0 = 0.4;
    o.box_lo = -6.0;
    o.box_hi = 6.0;
    auto spec = testutil::spec1d(o);
    const double exact =
        0.4 * std::exp(0.3) + (0.2 / 0.3) * (std::exp(0.3) - 1.0);
    for (double dt : {1.0 / 32.0, 1.0 / 64.0}) {
        const int n = 40000;
        auto b = hrc::simulate(spec, zero_policy(), zero_policy(), n, dt, 31);
        double s = 0.0, s2 = 0.0;
        for (int p = 0; p < n; ++p) {
            double x = b.state_ptr(p, b.n_steps)[0];
            s += x;
            s2 += x * x;
        }
        double mean = s / n;
        double sd = std::sqrt(std::max(0.0, s2 / n - mean * mean));
        CHECK(std::abs(mean - exact) <= 3.0 * sd / std::sqrt(static_cast<double>(n)) + 0.31 * dt);
    }
}

TEST_CASE("replaying recorded controls through the policy reproduces them") {
    auto spec = hrc::load_problem(testutil::problems_dir() + "/lq1d.json");
    auto grid = hrc::LatticeGrid::build(spec, {41}, 0.0);
    auto sol = hrc::backward_sweep_hierarchical(spec, grid);
    auto table = hrc::make_tabulated_policy(spec, sol);
    auto leader = FeedbackPolicy::tabulated(table, Player::Leader);
    auto follower = FeedbackPolicy::tabulated(table, Player::Follower);
    auto b = hrc::simulate(spec, leader, follower, 200, 1.0 / 64.0, 13);
    for (int p = 0; p < b.n_paths; ++p)
        for (int k = 0; k < b.n_steps; ++k) {
            Vec x = b.state(p, k);
            const Vec& v = leader(b.time_at(k), x);
            const Vec& w = follower(b.time_at(k), x);
            CHECK(b.leader_control(p, k)[0] == v[0]);
            CHECK(b.follower_control(p, k)[0] == w[0]);
        }
}

TEST_CASE("tabulated policies return control-set points only") {
    auto spec = hrc::load_problem(testutil::problems_dir() + "/lq1d.json");
    auto grid = hrc::LatticeGrid::build(spec, {21}, 0.0);
    auto sol = hrc::backward_sweep_hierarchical(spec, grid);
    auto table = hrc::make_tabulated_policy(spec, sol);
    auto follower = FeedbackPolicy::tabulated(table, Player::Follower);
    hrc::PathRng rng(3, 0);
    for (int i = 0; i < 200; ++i) {
        Vec x = v1(rng.uniform(-3.0, 3.0));  // includes points outside the box
        const Vec& w = follower(rng.uniform(0.0, 1.0), x);
        CHECK(spec.follower_controls.contains(w));
    }
}
