#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <stdexcept>

#include "dtcsim/controllers.hpp"
#include "dtcsim/geometry.hpp"
#include "dtcsim/path.hpp"

using namespace dtcsim;

namespace {

ReferencePath line_40() {
    return ReferencePath({0.0, 0.0}, 0.0, {{SegmentType::line, 40.0, 0.0, 0.0}});
}

}  // namespace

TEST_CASE("stanley: frozen cross-track response", "[controllers]") {
    StanleyController c(StanleyParams{3.0, 1.0});
    const auto path = line_40();

    // Rear axle 1 m right of the path, aligned: front axle sees e = -1,
    // steering turns left by atan(k*|e|/v).
    const ControlDecision d = c.control({{0.0, -1.0}, 0.0}, 1.0, path);
    CHECK(d.delta == Catch::Approx(1.2490457723982544).margin(1e-12));
    CHECK(d.e == Catch::Approx(-1.0).margin(1e-12));

    // Doubling speed shrinks the cross-track term.
    StanleyController c2(StanleyParams{3.0, 1.0});
    const ControlDecision fast = c2.control({{0.0, -1.0}, 0.0}, 2.0, path);
    CHECK(fast.delta == Catch::Approx(std::atan(1.5)).margin(1e-12));
}

TEST_CASE("stanley: heading error alone is fed back with opposite sign", "[controllers]") {
    StanleyController c(StanleyParams{3.0, 1.0});
    const auto path = line_40();

    // Rear axle placed so the front axle sits exactly on the path.
    const ControlDecision d = c.control({{0.0, -std::sin(0.1)}, 0.1}, 1.0, path);
    CHECK(d.e == Catch::Approx(0.0).margin(1e-12));
    CHECK(d.delta == Catch::Approx(-0.1).margin(1e-12));
}

TEST_CASE("stanley: exactly on path commands zero steering", "[controllers]") {
    StanleyController c(StanleyParams{3.0, 1.0});
    const auto path = line_40();
    const ControlDecision d = c.control({{2.0, 0.0}, 0.0}, 1.0, path);
    CHECK(d.delta == 0.0);
}

TEST_CASE("stanley: rejects zero speed", "[controllers]") {
    StanleyController c(StanleyParams{3.0, 1.0});
    const auto path = line_40();
    CHECK_THROWS_AS(c.control({{0.0, -1.0}, 0.0}, 0.0, path), std::domain_error);
}

TEST_CASE("pure pursuit: on-path straight ahead gives zero steering", "[controllers]") {
    PurePursuitController c(PurePursuitParams{1.45, 1.0});
    const auto path = line_40();
    const ControlDecision d = c.control({{5.0, 0.0}, 0.0}, 1.0, path);
    CHECK(d.delta == 0.0);
    CHECK_FALSE(d.endpoint_fallback);
}

TEST_CASE("pure pursuit: frozen curvature toward an offset goal", "[controllers]") {
    PurePursuitController c(PurePursuitParams{1.45, 1.0});
    const auto path = line_40();

    // Rear axle at (0, -0.5): goal (sqrt(1.45^2 - 0.25), 0), lateral goal
    // offset 0.5, delta = atan(2 * l * 0.5 / lh^2).
    const ControlDecision d = c.control({{0.0, -0.5}, 0.0}, 1.0, path);
    CHECK(d.delta == Catch::Approx(0.44395755073072035).margin(1e-9));
    CHECK_FALSE(d.endpoint_fallback);
}

TEST_CASE("pure pursuit: falls back to the endpoint when no lookahead hit", "[controllers]") {
    PurePursuitController c(PurePursuitParams{1.45, 1.0});
    const auto path = line_40();
    const ControlDecision d = c.control({{39.5, 0.0}, 0.0}, 1.0, path);
    CHECK(d.endpoint_fallback);
    CHECK(d.delta == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("dubins robust: effective radius halves with k_rob", "[controllers]") {
    DubinsRobustController c(DubinsRobustParams{0.25 * kPi, 0.5, 0.05, 1.0});
    CHECK(c.effective_radius() == Catch::Approx(2.0).margin(1e-12));
}

TEST_CASE("dubins robust: saturates toward the path outside the layer", "[controllers]") {
    DubinsRobustController c(DubinsRobustParams{0.25 * kPi, 0.5, 0.05, 1.0});
    const auto path = line_40();

    // 1 m right of the path: full left steering.
    const ControlDecision below = c.control({{5.0, -1.0}, 0.0}, 1.0, path);
    CHECK(below.delta == Catch::Approx(0.25 * kPi).margin(1e-15));

    // Far beyond twice the effective radius: merge angle caps at pi.
    const ControlDecision far = c.control({{5.0, -10.0}, 0.0}, 1.0, path);
    CHECK(far.delta == Catch::Approx(0.25 * kPi).margin(1e-15));
}

TEST_CASE("dubins robust: frozen boundary layer response", "[controllers]") {
    DubinsRobustController c(DubinsRobustParams{0.25 * kPi, 0.5, 0.05, 1.0});
    const auto path = line_40();

    const ControlDecision below = c.control({{5.0, -0.01}, 0.0}, 1.0, path);
    CHECK(below.delta == Catch::Approx(0.3506525854817203).margin(1e-12));

    const ControlDecision above = c.control({{5.0, 0.01}, 0.0}, 1.0, path);
    CHECK(above.delta == Catch::Approx(-0.3506525854817203).margin(1e-12));
}

TEST_CASE("dubins robust: heading error dominates on the path", "[controllers]") {
    DubinsRobustController c(DubinsRobustParams{0.25 * kPi, 0.5, 0.05, 1.0});
    const auto path = line_40();
    const ControlDecision d = c.control({{5.0, 0.0}, 0.3}, 1.0, path);
    CHECK(d.delta == Catch::Approx(-0.25 * kPi).margin(1e-15));
}

TEST_CASE("dubins robust: parameter validation", "[controllers]") {
    CHECK_THROWS_AS(DubinsRobustController(DubinsRobustParams{0.0, 0.5, 0.05, 1.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(DubinsRobustController(DubinsRobustParams{0.5 * kPi, 0.5, 0.05, 1.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(DubinsRobustController(DubinsRobustParams{0.25 * kPi, 0.0, 0.05, 1.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(DubinsRobustController(DubinsRobustParams{0.25 * kPi, 1.5, 0.05, 1.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(DubinsRobustController(DubinsRobustParams{0.25 * kPi, 0.5, 0.0, 1.0}),
                    std::invalid_argument);
}
