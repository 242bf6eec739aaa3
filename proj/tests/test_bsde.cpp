#include "catch_amalgamated.hpp"

#include <algorithm>
#include <numeric>

#include "support/oracles.hpp"
#include "support/spec_builder.hpp"

using hrc::Generator;
using hrc::PathBundle;
using hrc::Player;
using hrc::RegressionBasis;
using hrc::Vec;

namespace {
std::vector<double> terminal_states(const PathBundle& b) {
    std::vector<double> xi(static_cast<std::size_t>(b.n_paths));
    for (int p = 0; p < b.n_paths; ++p) xi[static_cast<std::size_t>(p)] = b.state_ptr(p, b.n_steps)[0];
    return xi;
}
}  // namespace

TEST_CASE("constant terminal propagates unchanged for any admissible driver") {
    auto b = hrc::brownian_only(1, 1.0, 1.0 / 16.0, 512, 1);
    std::vector<double> xi(static_cast<std::size_t>(b.n_paths), 2.5);
    for (auto g : {Generator::zero(), Generator::scaled_l1(0.5), Generator::scaled_quadratic(1.0)}) {
        auto sol = hrc::solve_bsde(b, g, xi, RegressionBasis{2});
        CHECK(sol.y0 == Catch::Approx(2.5).margin(1e-12));
        for (int p = 0; p < b.n_paths; ++p) {
            CHECK(sol.y_at(p, b.n_steps) == 2.5);
            for (int k = 0; k < b.n_steps; ++k) {
                CHECK(sol.y_at(p, k) == Catch::Approx(2.5).margin(1e-10));
                CHECK(std::abs(sol.z_at(p, k, 0)) <= 1e-10);
            }
        }
    }
}

TEST_CASE("zero driver reduces to the sample mean of the terminal") {
    auto b = hrc::brownian_only(1, 1.0, 1.0 / 32.0, 20000, 2);
    auto xi = terminal_states(b);
    double mc = std::accumulate(xi.begin(), xi.end(), 0.0) / static_cast<double>(xi.size());
    auto sol = hrc::solve_bsde(b, Generator::zero(), xi, RegressionBasis{2});
    CHECK(std::abs(sol.y0 - mc) <= 3.0 * sol.y0_standard_error + 1e-9);
}

TEST_CASE("l1 driver with noise terminal reaches the closed-form value") {
    const double kappa = 0.5;
    const double expected = oracle::l1_noise_terminal_value(kappa, 1.0, 4096);
    REQUIRE(expected == Catch::Approx(0.5).margin(1e-12));
    auto b = hrc::brownian_only(1, 1.0, 1.0 / 64.0, 16384, 3);
    auto xi = terminal_states(b);
    auto sol = hrc::solve_bsde(b, Generator::scaled_l1(kappa), xi, RegressionBasis{2});
    CHECK(std::abs(sol.y0 - expected) <= 0.04 * expected);
    // the gradient weight is 1 along the whole interval
    double zbar = 0.0;
    for (int p = 0; p < b.n_paths; ++p) zbar += sol.z_at(p, b.n_steps / 2, 0);
    zbar /= b.n_paths;
    CHECK(zbar == Catch::Approx(1.0).margin(0.05));
}

TEST_CASE("conditional values at the last step equal the terminal data") {
    auto b = hrc::brownian_only(1, 1.0, 0.25, 256, 4);
    auto xi = terminal_states(b);
    auto vals = hrc::conditional_g_expectation(b, Generator::zero(), xi, RegressionBasis{2},
                                               b.n_steps);
    for (int p = 0; p < b.n_paths; ++p) CHECK(vals[static_cast<std::size_t>(p)] == xi[static_cast<std::size_t>(p)]);
}

TEST_CASE("conditional values at step 0 are the initial value") {
    auto b = hrc::brownian_only(1, 1.0, 0.25, 256, 5);
    auto xi = terminal_states(b);
    for (auto& v : xi) v = v * v;  // nonlinear payoff
    auto sol = hrc::solve_bsde(b, Generator::zero(), xi, RegressionBasis{2});
    auto vals = hrc::conditional_g_expectation(b, Generator::zero(), xi, RegressionBasis{2}, 0);
    for (int p = 0; p < b.n_paths; ++p) CHECK(vals[static_cast<std::size_t>(p)] == sol.y0);
}

TEST_CASE("martingale property of the conditional values") {
    auto b = hrc::brownian_only(1, 1.0, 1.0 / 32.0, 30000, 6);
    auto xi = terminal_states(b);
    auto sol = hrc::solve_bsde(b, Generator::zero(), xi, RegressionBasis{2});
    for (int k : {8, 16, 24}) {
        double rms = 0.0;
        for (int p = 0; p < b.n_paths; ++p) {
            double err = sol.y_at(p, k) - b.state_ptr(p, k)[0];
            rms += err * err;
        }
        rms = std::sqrt(rms / b.n_paths);
        CHECK(rms <= 0.05);
    }
}

TEST_CASE("path order does not matter") {
    auto b = hrc::brownian_only(1, 1.0, 1.0 / 16.0, 4096, 7);
    auto xi = terminal_states(b);
    for (auto& v : xi) v = std::abs(v);
    auto sol = hrc::solve_bsde(b, Generator::scaled_l1(0.4), xi, RegressionBasis{2});

    // reversed path order
    PathBundle r = b;
    std::vector<double> xir(xi.size());
    for (int p = 0; p < b.n_paths; ++p) {
        int q = b.n_paths - 1 - p;
        xir[static_cast<std::size_t>(p)] = xi[static_cast<std::size_t>(q)];
        for (int k = 0; k <= b.n_steps; ++k) r.state_ptr(p, k)[0] = b.state_ptr(q, k)[0];
        for (int k = 0; k < b.n_steps; ++k) r.increment_ptr(p, k)[0] = b.increment_ptr(q, k)[0];
    }
    auto solr = hrc::solve_bsde(r, Generator::scaled_l1(0.4), xir, RegressionBasis{2});
    CHECK(std::abs(sol.y0 - solr.y0) <= 1e-10 * (1.0 + std::abs(sol.y0)));
}

TEST_CASE("step-size refinement keeps the closed-form error small") {
    // The regression scheme is exact in the population for this case, so the
    // residual error is statistical; both step sizes must hit the closed form.
    const double kappa = 0.4;
    for (double dt : {1.0 / 32.0, 1.0 / 64.0}) {
        auto b = hrc::brownian_only(1, 1.0, dt, 16384, 8);
        auto xi = terminal_states(b);
        auto sol = hrc::solve_bsde(b, Generator::scaled_l1(kappa), xi, RegressionBasis{2});
        CHECK(std::abs(sol.y0 - kappa) <= 0.04 * kappa);
    }
}

TEST_CASE("solver determinism across worker counts") {
    auto b = hrc::brownian_only(1, 1.0, 1.0 / 16.0, 8192, 9);
    auto xi = terminal_states(b);
    auto s1 = hrc::solve_bsde(b, Generator::scaled_l1(0.5), xi, RegressionBasis{2}, 1);
    auto s3 = hrc::solve_bsde(b, Generator::scaled_l1(0.5), xi, RegressionBasis{2}, 3);
    CHECK(s1.y0 == s3.y0);
    CHECK(s1.y == s3.y);
    CHECK(s1.z == s3.z);
}

TEST_CASE("too few paths for the basis is an error") {
    auto b = hrc::brownian_only(1, 1.0, 0.5, 16, 10);
    std::vector<double> xi(16, 0.0);
    CHECK_THROWS_AS(hrc::solve_bsde(b, Generator::zero(), xi, RegressionBasis{2}),
                    std::invalid_argument);
}

TEST_CASE("comparison: identical inputs tie exactly") {
    auto b = hrc::brownian_only(1, 1.0, 1.0 / 16.0, 2048, 11);
    auto xi = terminal_states(b);
    for (auto& v : xi) v = std::abs(v);
    auto rep = hrc::comparison_check(b, Generator::scaled_l1(0.3), Generator::scaled_l1(0.3), xi,
                                     xi, RegressionBasis{2});
    CHECK(rep.ordered);
    CHECK(rep.y_a0 == rep.y_b0);
}

TEST_CASE("comparison: constant lift shifts the value by the lift") {
    auto b = hrc::brownian_only(1, 1.0, 1.0 / 16.0, 2048, 12);
    auto xi = terminal_states(b);
    std::vector<double> lifted(xi);
    for (auto& v : lifted) v += 1.0;
    auto rep = hrc::comparison_check(b, Generator::scaled_l1(0.3), Generator::scaled_l1(0.3),
                                     lifted, xi, RegressionBasis{2});
    CHECK(rep.ordered);
    CHECK(rep.y_a0 - rep.y_b0 == Catch::Approx(1.0).margin(1e-6));
}

TEST_CASE("comparison preconditions are enforced") {
    auto b = hrc::brownian_only(1, 1.0, 0.25, 512, 13);
    auto xi = terminal_states(b);
    std::vector<double> lower(xi);
    lower[7] -= 1.0;
    CHECK_THROWS_WITH(hrc::comparison_check(b, Generator::zero(), Generator::zero(), lower, xi,
                                            RegressionBasis{2}),
                      Catch::Matchers::ContainsSubstring("path 7"));
    CHECK_THROWS_AS(hrc::comparison_check(b, Generator::zero(), Generator::scaled_l1(0.5), xi, xi,
                                          RegressionBasis{2}),
                    std::invalid_argument);
}

TEST_CASE("risk value: zero costs give zero value") {
    testutil::Spec1dOptions o;
    o.sigma = 0.5;
    o.gen1 = "scaled-l1";
    o.kappa1 = 0.3;
    auto spec = testutil::spec1d(o);
    auto z = hrc::FeedbackPolicy::constant([&] { Vec v(1); v[0] = 0.0; return v; }());
    double val = hrc::risk_value(spec, z, z, Player::Leader, 2048, 1.0 / 32.0, 5,
                                 RegressionBasis{2});
    CHECK(val == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("risk value: deterministic unit running cost") {
    testutil::Spec1dOptions o;
    o.sigma = 0.5;
    o.c1_0 = 1.0;
    auto spec = testutil::spec1d(o);
    auto z = hrc::FeedbackPolicy::constant([&] { Vec v(1); v[0] = 0.0; return v; }());
    double val = hrc::risk_value(spec, z, z, Player::Leader, 2048, 1.0 / 64.0, 5,
                                 RegressionBasis{2});
    CHECK(val == Catch::Approx(1.0).margin(1e-6));
}

TEST_CASE("risk value: quadratic terminal under frozen controls") {
    testutil::Spec1dOptions o;
    o.sigma = 0.5;
    o.bv = 1.0;
    o.bw = 1.0;
    o.psi1_xx = 1.0;
    o.c1_uu = 1.0;
    o.v_lo = -1.0;
    o.v_hi = 1.0;
    o.v_pts = 3;
    o.w_lo = -1.0;
    o.w_hi = 1.0;
    o.w_pts = 3;
    o.x0 = 0.25;
    auto spec = testutil::spec1d(o);
    auto z = hrc::FeedbackPolicy::constant([&] { Vec v(1); v[0] = 0.0; return v; }());
    auto res = hrc::risk_value_detailed(spec, z, z, Player::Leader, 30000, 1.0 / 64.0, 21,
                                        RegressionBasis{2});
    const double exact = 0.25 * 0.25 + 0.25 * 1.0;  // E[(x0 + 0.5 B_T)^2]
    CHECK(std::abs(res.value - exact) <= 3.0 * res.standard_error + 1e-9);
}

TEST_CASE("two-dimensional solve recovers the gradient weights") {
    auto b = hrc::brownian_only(2, 1.0, 1.0 / 32.0, 20000, 14);
    std::vector<double> xi(static_cast<std::size_t>(b.n_paths));
    for (int p = 0; p < b.n_paths; ++p) {
        const double* x = b.state_ptr(p, b.n_steps);
        xi[static_cast<std::size_t>(p)] = x[0] + 2.0 * x[1];
    }
    auto sol = hrc::solve_bsde(b, Generator::zero(), xi, RegressionBasis{2});
    CHECK(std::abs(sol.y0) <= 3.0 * sol.y0_standard_error + 1e-9);
    double z1 = 0.0, z2 = 0.0;
    const int k = b.n_steps / 2;
    for (int p = 0; p < b.n_paths; ++p) {
        z1 += sol.z_at(p, k, 0);
        z2 += sol.z_at(p, k, 1);
    }
    z1 /= b.n_paths;
    z2 /= b.n_paths;
    CHECK(z1 == Catch::Approx(1.0).margin(0.06));
    CHECK(z2 == Catch::Approx(2.0).margin(0.06));
}

TEST_CASE("diagnostics carry per-step condition numbers and residuals") {
    auto b = hrc::brownian_only(1, 1.0, 1.0 / 8.0, 2048, 15);
    auto xi = terminal_states(b);
    for (auto& v : xi) v = v * v;
    auto sol = hrc::solve_bsde(b, Generator::zero(), xi, RegressionBasis{2});
    REQUIRE(sol.diagnostics.size() == static_cast<std::size_t>(b.n_steps));
    for (const auto& d : sol.diagnostics) {
        CHECK(d.condition >= 1.0);
        CHECK(d.condition < 1e6);
        CHECK(d.residual_rms >= 0.0);
    }
    // the deterministic start state drops the non-intercept columns
    CHECK(sol.diagnostics[0].dropped_columns == 2);
}
