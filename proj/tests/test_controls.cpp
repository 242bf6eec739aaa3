#include "catch_amalgamated.hpp"

#include "hrc/controls.hpp"

using hrc::ControlSet;
using hrc::Vec;

namespace {
Vec v1(double a) {
    Vec v(1);
    v[0] = a;
    return v;
}
Vec v2(double a, double b) {
    Vec v(2);
    v[0] = a;
    v[1] = b;
    return v;
}
}  // namespace

TEST_CASE("uniform 3-point interval") {
    auto s = ControlSet::uniform_grid(v1(-1.0), v1(1.0), {3});
    REQUIRE(s.size() == 3);
    CHECK(s.point(0)[0] == -1.0);
    CHECK(s.point(1)[0] == 0.0);
    CHECK(s.point(2)[0] == 1.0);
}

TEST_CASE("single point collapses to the midpoint") {
    auto s = ControlSet::uniform_grid(v1(0.2), v1(0.8), {1});
    REQUIRE(s.size() == 1);
    CHECK(s.point(0)[0] == Catch::Approx(0.5));
}

TEST_CASE("two-dimensional enumeration is lexicographic and duplicate-free") {
    auto s = ControlSet::uniform_grid(v2(-1.0, 0.0), v2(1.0, 2.0), {3, 2});
    REQUIRE(s.size() == 6);
    for (int i = 1; i < s.size(); ++i) {
        const Vec& a = s.point(i - 1);
        const Vec& b = s.point(i);
        bool less = a[0] < b[0] || (a[0] == b[0] && a[1] < b[1]);
        CHECK(less);
    }
    for (const auto& p : s.points) CHECK(s.contains(p));
}

TEST_CASE("invalid control sets are rejected") {
    CHECK_THROWS_AS(ControlSet::uniform_grid(v1(1.0), v1(-1.0), {3}), std::invalid_argument);
    CHECK_THROWS_AS(ControlSet::uniform_grid(v1(-1.0), v1(1.0), {0}), std::invalid_argument);
    CHECK_THROWS_AS(ControlSet::uniform_grid(v2(0, 0), v2(1, 1), {2}), std::invalid_argument);
}
