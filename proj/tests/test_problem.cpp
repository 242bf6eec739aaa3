#include "catch_amalgamated.hpp"

#include "support/spec_builder.hpp"

using hrc::build_problem;
using hrc::ConfigError;
using hrc::json;
using testutil::Spec1dOptions;
using testutil::spec1d_config;

namespace {
json base_config() {
    Spec1dOptions o;
    o.bv = 1.0;
    o.bw = 1.0;
    o.sigma = 1.0;
    o.v_lo = -1.0;
    o.v_hi = 1.0;
    o.v_pts = 3;
    o.w_lo = -1.0;
    o.w_hi = 1.0;
    o.w_pts = 3;
    o.floor_ = 0.5;
    return spec1d_config(o);
}
}  // namespace

TEST_CASE("well-formed config builds with the expected control grid") {
    auto spec = build_problem(base_config());
    REQUIRE(spec.leader_controls.size() == 3);
    CHECK(spec.leader_controls.point(0)[0] == -1.0);
    CHECK(spec.leader_controls.point(1)[0] == 0.0);
    CHECK(spec.leader_controls.point(2)[0] == 1.0);
    CHECK(spec.horizon == 1.0);
    CHECK(spec.dim == 1);
}

TEST_CASE("negative horizon is rejected with a named issue") {
    json cfg = base_config();
    cfg["horizon"] = -1.0;
    try {
        build_problem(cfg);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        bool found = false;
        for (const auto& s : e.issues())
            if (s.find("horizon") != std::string::npos &&
                s.find("positive") != std::string::npos)
                found = true;
        CHECK(found);
    }
}

TEST_CASE("unknown keys are an error") {
    json cfg = base_config();
    cfg["surprise"] = 1;
    CHECK_THROWS_AS(build_problem(cfg), ConfigError);
    cfg = base_config();
    cfg["drift"]["unknown_coeff"] = 2.0;
    CHECK_THROWS_AS(build_problem(cfg), ConfigError);
}

TEST_CASE("unknown preset family is an error") {
    json cfg = base_config();
    cfg["diffusion"]["family"] = "stochastic-vol";
    CHECK_THROWS_AS(build_problem(cfg), ConfigError);
}

TEST_CASE("shape mismatches are named") {
    json cfg = base_config();
    cfg["drift"]["a"] = json::array({json::array({1.0, 2.0})});  // 1x2 into 1x1
    CHECK_THROWS_AS(build_problem(cfg), ConfigError);
}

TEST_CASE("empty control axis is an error") {
    json cfg = base_config();
    cfg["leader_controls"]["points"] = json::array({0});
    CHECK_THROWS_AS(build_problem(cfg), ConfigError);
}

TEST_CASE("initial state must lie inside the box") {
    json cfg = base_config();
    cfg["initial_state"] = json::array({5.0});
    CHECK_THROWS_AS(build_problem(cfg), ConfigError);
}

TEST_CASE("multiple issues are all reported") {
    json cfg = base_config();
    cfg["horizon"] = -1.0;
    cfg["ellipticity_floor"] = 0.0;
    try {
        build_problem(cfg);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.issues().size() >= 2);
    }
}

TEST_CASE("building is a pure function of the config") {
    auto a = build_problem(base_config());
    auto b = build_problem(base_config());
    CHECK(a.drift.a == b.drift.a);
    CHECK(a.drift.bv == b.drift.bv);
    CHECK(a.diffusion.s0 == b.diffusion.s0);
    CHECK(a.leader_cost.r_uu == b.leader_cost.r_uu);
    CHECK(a.leader_terminal.p_xx == b.leader_terminal.p_xx);
    CHECK(a.initial_state == b.initial_state);
    REQUIRE(a.leader_controls.size() == b.leader_controls.size());
    for (int i = 0; i < a.leader_controls.size(); ++i)
        CHECK(a.leader_controls.point(i) == b.leader_controls.point(i));
    CHECK(a.resolved_config == b.resolved_config);
}

TEST_CASE("dim-2 identity diffusion clears a 0.5 floor") {
    json cfg = base_config();
    cfg["dim"] = 2;
    cfg["drift"] = {{"family", "affine-drift"}};
    cfg["diffusion"] = {{"family", "constant-diffusion"},
                        {"s0", {{1.0, 0.0}, {0.0, 1.0}}}};
    cfg["leader_cost"] = {{"family", "quadratic-cost"}};
    cfg["follower_cost"] = {{"family", "quadratic-cost"}};
    cfg["leader_terminal"] = {{"family", "quadratic-terminal"}};
    cfg["follower_terminal"] = {{"family", "quadratic-terminal"}};
    cfg["leader_controls"] = {{"lower", {0.0}}, {"upper", {0.0}}, {"points", {1}}};
    cfg["follower_controls"] = {{"lower", {0.0}}, {"upper", {0.0}}, {"points", {1}}};
    cfg["domain_box"] = {{"lower", {-1.0, -1.0}}, {"upper", {1.0, 1.0}}};
    cfg["initial_state"] = {0.0, 0.0};
    cfg["ellipticity_floor"] = 0.5;
    auto spec = build_problem(cfg);
    auto report = hrc::validate_assumptions(spec, 200, 3);
    const auto* el = report.find("ellipticity");
    REQUIRE(el != nullptr);
    CHECK(el->pass);
    CHECK(el->estimate == Catch::Approx(1.0));
}
