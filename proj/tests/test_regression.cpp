#include "catch_amalgamated.hpp"

#include "support/spec_builder.hpp"

using hrc::RegressionBasis;
using hrc::StepRegressor;

TEST_CASE("constant targets are reproduced exactly") {
    auto b = hrc::brownian_only(1, 1.0, 0.25, 500, 1);
    StepRegressor reg(b, 2, RegressionBasis{2});
    Eigen::VectorXd y = Eigen::VectorXd::Constant(b.n_paths, 3.25);
    Eigen::VectorXd pred = reg.project(y);
    for (int p = 0; p < b.n_paths; ++p) CHECK(pred[p] == Catch::Approx(3.25).margin(1e-10));
}

TEST_CASE("linear functions of the state are in the span") {
    auto b = hrc::brownian_only(1, 1.0, 0.25, 2000, 2);
    StepRegressor reg(b, 3, RegressionBasis{2});
    Eigen::VectorXd y(b.n_paths);
    for (int p = 0; p < b.n_paths; ++p) y[p] = 2.0 * b.state_ptr(p, 3)[0] - 0.7;
    Eigen::VectorXd pred = reg.project(y);
    for (int p = 0; p < b.n_paths; ++p) CHECK(pred[p] == Catch::Approx(y[p]).margin(1e-9));
}

TEST_CASE("a deterministic start state collapses to the intercept") {
    auto b = hrc::brownian_only(1, 1.0, 0.25, 400, 3);
    StepRegressor reg(b, 0, RegressionBasis{2});
    CHECK(reg.constant_only());
    CHECK(reg.dropped_columns() == 2);
    Eigen::VectorXd y(b.n_paths);
    for (int p = 0; p < b.n_paths; ++p) y[p] = b.state_ptr(p, b.n_steps)[0];
    Eigen::VectorXd pred = reg.project(y);
    for (int p = 1; p < b.n_paths; ++p) CHECK(pred[p] == pred[0]);
}

TEST_CASE("two-valued states collapse onto the surviving columns") {
    // With two distinct state values the standardized square duplicates the
    // intercept; it is dropped and the fit stays full-rank on {1, x}.
    hrc::PathBundle b;
    b.n_paths = 64;
    b.n_steps = 6;
    b.dim = 1;
    b.t0 = 0.0;
    b.dt = 0.125;
    b.states.assign(static_cast<std::size_t>(b.n_paths) * (b.n_steps + 1), 0.0);
    b.increments.assign(static_cast<std::size_t>(b.n_paths) * b.n_steps, 0.0);
    for (int p = 0; p < b.n_paths; ++p)
        for (int k = 0; k <= b.n_steps; ++k) b.state_ptr(p, k)[0] = p % 2 ? 1.0 : -1.0;
    StepRegressor reg(b, 4, RegressionBasis{2});
    CHECK(reg.dropped_columns() == 1);
    CHECK(reg.active_columns() == 2);
}

TEST_CASE("rank deficiency names the step") {
    // Perfectly collinear coordinates leave individually healthy columns but
    // a singular normal system.
    hrc::PathRng rng(5, 0);
    hrc::PathBundle b;
    b.n_paths = 128;
    b.n_steps = 6;
    b.dim = 2;
    b.t0 = 0.0;
    b.dt = 0.125;
    b.states.assign(static_cast<std::size_t>(b.n_paths) * (b.n_steps + 1) * 2, 0.0);
    b.increments.assign(static_cast<std::size_t>(b.n_paths) * b.n_steps * 2, 0.0);
    for (int p = 0; p < b.n_paths; ++p)
        for (int k = 0; k <= b.n_steps; ++k) {
            double x = rng.uniform(-1.0, 1.0);
            b.state_ptr(p, k)[0] = x;
            b.state_ptr(p, k)[1] = x;  // second coordinate identical
        }
    try {
        StepRegressor reg(b, 4, RegressionBasis{2});
        FAIL("expected RegressionRankError");
    } catch (const hrc::RegressionRankError& e) {
        CHECK(e.step == 4);
        CHECK(std::string(e.what()).find("step 4") != std::string::npos);
    }
}

TEST_CASE("projection is worker-count independent") {
    auto b = hrc::brownian_only(2, 1.0, 1.0 / 16.0, 30000, 4);
    Eigen::VectorXd y(b.n_paths);
    for (int p = 0; p < b.n_paths; ++p) {
        const double* x = b.state_ptr(p, 8);
        y[p] = x[0] * x[0] + 0.3 * x[1] - 0.1 * x[0] * x[1];
    }
    StepRegressor r1(b, 8, RegressionBasis{2}, 1);
    StepRegressor r3(b, 8, RegressionBasis{2}, 3);
    Eigen::VectorXd p1 = r1.project(y);
    Eigen::VectorXd p3 = r3.project(y);
    REQUIRE(p1.size() == p3.size());
    for (int p = 0; p < p1.size(); ++p) CHECK(p1[p] == p3[p]);
    CHECK(r1.condition() == r3.condition());
}

TEST_CASE("basis sizes") {
    RegressionBasis basis{2};
    CHECK(basis.size(1) == 3);
    CHECK(basis.size(2) == 6);
    CHECK(RegressionBasis{3}.size(1) == 4);
}
