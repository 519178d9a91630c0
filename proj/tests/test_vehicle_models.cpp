#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <stdexcept>

#include "dtcsim/geometry.hpp"
#include "dtcsim/vehicle_models.hpp"
#include "support/rk4_oracle.hpp"

using namespace dtcsim;

TEST_CASE("kinematic increment: frozen single step", "[vehicle]") {
    // psi=0.2, delta=0.1, v=1.3, dt=0.01, l=1; values from an independent
    // evaluation of the exact-arc formulas.
    const PoseIncrement inc = kinematic_increment(0.2, 0.1, 1.3, 0.01, 1.0);
    CHECK(inc.dp.x == Catch::Approx(0.012739177525264938).margin(1e-15));
    CHECK(inc.dp.y == Catch::Approx(0.0025910098454804452).margin(1e-15));
    CHECK(inc.dpsi == Catch::Approx(0.0013043507371108573).margin(1e-17));
}

TEST_CASE("kinematic increment: quarter circle in a single exact step", "[vehicle]") {
    // R = v/psi_dot = 1, swept angle pi/2: chord (1, 1) regardless of dt size.
    const PoseIncrement inc = kinematic_increment(0.0, 0.25 * kPi, 1.0, 0.5 * kPi, 1.0);
    CHECK(inc.dp.x == Catch::Approx(1.0).margin(1e-12));
    CHECK(inc.dp.y == Catch::Approx(1.0).margin(1e-12));
    CHECK(inc.dpsi == Catch::Approx(0.5 * kPi).margin(1e-12));
}

TEST_CASE("kinematic increment: straight motion is exact", "[vehicle]") {
    const PoseIncrement inc = kinematic_increment(0.0, 0.0, 2.0, 0.01, 1.0);
    CHECK(inc.dp.x == 0.02);
    CHECK(inc.dp.y == 0.0);
    CHECK(inc.dpsi == 0.0);
}

TEST_CASE("kinematic increment: rotational equivariance", "[vehicle]") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> angle(-3.0, 3.0);
    std::uniform_real_distribution<double> steer(-1.2, 1.2);
    for (int i = 0; i < 100; ++i) {
        const double psi = angle(rng);
        const double theta = angle(rng);
        const double delta = steer(rng);
        const PoseIncrement base = kinematic_increment(psi, delta, 2.5, 0.02, 1.7);
        const PoseIncrement turned = kinematic_increment(psi + theta, delta, 2.5, 0.02, 1.7);
        const Vec2 expected = rotate(theta, base.dp);
        CHECK(turned.dp.x == Catch::Approx(expected.x).margin(1e-12));
        CHECK(turned.dp.y == Catch::Approx(expected.y).margin(1e-12));
        CHECK(turned.dpsi == base.dpsi);
    }
}

TEST_CASE("kinematic step stays on the exact circle", "[vehicle]") {
    // Constant steering: rear axle moves on a circle of radius l/tan(delta).
    const double radius = 3.2327281437658275;  // 1/tan(0.3)
    VehicleState s{{2.0, -1.0}, 0.4};
    const Vec2 center = s.p + radius * Vec2{-std::sin(s.psi), std::cos(s.psi)};
    const KinematicParams params{1.0, 0.25 * kPi};
    for (int i = 0; i < 5000; ++i) {
        s = kinematic_step(s, 0.3, 1.0, 0.01, params);
        CHECK((s.p - center).norm() == Catch::Approx(radius).margin(1e-9));
    }
}

TEST_CASE("kinematic step matches a fine RK4 of the continuous model", "[vehicle]") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> psi_d(-kPi, kPi);
    std::uniform_real_distribution<double> delta_d(-1.2, 1.2);
    std::uniform_real_distribution<double> v_d(0.0, 15.0);
    std::uniform_real_distribution<double> dt_d(0.001, 0.1);
    std::uniform_real_distribution<double> l_d(0.5, 4.0);

    for (int i = 0; i < 50; ++i) {
        const double psi = psi_d(rng);
        const double delta = delta_d(rng);
        const double v = v_d(rng);
        const double dt = dt_d(rng);
        const double l = l_d(rng);

        const PoseIncrement inc = kinematic_increment(psi, delta, v, dt, l);
        const auto ref = rk4_oracle::integrate({0.0, 0.0, psi}, delta, v, l, dt, 1000);
        CHECK(std::abs(inc.dp.x - ref.x) < 1e-8);
        CHECK(std::abs(inc.dp.y - ref.y) < 1e-8);
        CHECK(std::abs(psi + inc.dpsi - ref.psi) < 1e-10);
    }
}

TEST_CASE("kinematic increment validates inputs", "[vehicle]") {
    CHECK_THROWS_AS(kinematic_increment(0.0, 0.0, 1.0, 0.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(kinematic_increment(0.0, 0.0, 1.0, 0.01, 0.0), std::domain_error);
    CHECK_THROWS_AS(kinematic_increment(std::nan(""), 0.0, 1.0, 0.01, 1.0), std::domain_error);
}

TEST_CASE("pacejka: small-angle slope, symmetry, saturation", "[vehicle]") {
    const PacejkaCoeffs k{};
    const double fz = 1000.0;

    // Linear regime: F ~ B*C*D*fz*alpha; frozen from independent evaluation.
    CHECK(pacejka_lateral_force(1e-4, fz, k) == Catch::Approx(1.899997609170488).margin(1e-9));

    CHECK(pacejka_lateral_force(0.0, fz, k) == 0.0);
    CHECK(pacejka_lateral_force(-0.05, fz, k) == -pacejka_lateral_force(0.05, fz, k));
    CHECK(pacejka_lateral_force(0.05, fz, k) <= k.d * fz);
    CHECK(pacejka_lateral_force(0.03, fz, k) == Catch::Approx(0.0).margin(k.d * fz));

    // Monotone below the peak (peak sits near alpha = 0.11 for B=10, C=1.9).
    double prev = 0.0;
    for (double alpha = 0.005; alpha <= 0.1; alpha += 0.005) {
        const double f = pacejka_lateral_force(alpha, fz, k);
        CHECK(f > prev);
        prev = f;
    }

    CHECK(pacejka_lateral_force(0.1, 0.0, k) == 0.0);
    CHECK_THROWS_AS(pacejka_lateral_force(0.1, -1.0, k), std::domain_error);
}

TEST_CASE("kinetic: straight driving tracks the commanded speed lag", "[vehicle]") {
    const KineticParams params{};
    KineticState s;
    s.v_long = 5.0;
    const double v_cmd = 10.0;
    const double dt = 0.01;
    double t = 0.0;
    for (int i = 0; i < 200; ++i) {
        s = kinetic_step(s, 0.0, v_cmd, dt, params);
        t += dt;
        const double expected = v_cmd + (5.0 - v_cmd) * std::exp(-t / params.speed_lag_tau);
        CHECK(s.v_long == Catch::Approx(expected).margin(1e-5));
    }
    CHECK(s.p.y == 0.0);
    CHECK(s.psi == 0.0);
    CHECK(s.v_lat == 0.0);
    CHECK(s.yaw_rate == 0.0);
}

TEST_CASE("kinetic: low-speed steady circle approaches the kinematic radius", "[vehicle]") {
    const KineticParams params{};
    const double delta = 0.3;
    KineticState s;
    s.v_long = 1.0;
    for (int i = 0; i < 4000; ++i) {
        s = kinetic_step(s, delta, 1.0, 0.01, params);
    }
    const double r_dyn = s.v_long / s.yaw_rate;
    const double r_kin = params.wheelbase() / std::tan(delta);
    CHECK(r_dyn == Catch::Approx(r_kin).epsilon(0.02));
}

TEST_CASE("kinetic: tire slip widens the circle at speed (understeer)", "[vehicle]") {
    const KineticParams params{};
    const double delta = 0.2;
    KineticState s;
    s.v_long = 11.1;
    for (int i = 0; i < 4000; ++i) {
        s = kinetic_step(s, delta, 11.1, 0.01, params);
    }
    CHECK(std::abs(s.v_lat) < 5.0);
    CHECK(std::abs(s.yaw_rate) < 2.0);
    const double r_dyn = s.v_long / s.yaw_rate;
    const double r_kin = params.wheelbase() / std::tan(delta);
    CHECK(r_dyn > 1.005 * r_kin);  // wider than kinematic, direction pinned
    CHECK(r_dyn < 1.5 * r_kin);
}

TEST_CASE("steering filter: 95 percent rise time near 0.315 s", "[vehicle]") {
    SteeringFilter filter;
    double t = 0.0;
    double prev = 0.0;
    double t95 = -1.0;
    for (int i = 0; i < 100; ++i) {
        const double out = filter.step(1.0, 0.01);
        t += 0.01;
        CHECK(out >= prev);  // monotone step response
        prev = out;
        if (t95 < 0.0 && out >= 0.95) {
            t95 = t;
        }
    }
    CHECK(t95 >= 0.30);
    CHECK(t95 <= 0.33);
    CHECK(filter.output() >= 1.0 - 1e-5);
}

TEST_CASE("steering filter: holds a matched state exactly", "[vehicle]") {
    SteeringFilter filter;
    filter.reset(0.7);
    CHECK(filter.step(0.7, 0.01) == 0.7);
    CHECK(filter.output() == 0.7);
}

TEST_CASE("steering filter: dt must be a multiple of the inner step", "[vehicle]") {
    SteeringFilter filter;
    CHECK_THROWS_AS(filter.step(1.0, 0.0105), std::domain_error);
    CHECK_THROWS_AS(filter.step(1.0, 0.0), std::domain_error);
    CHECK_NOTHROW(filter.step(1.0, 0.001));
    CHECK_NOTHROW(filter.step(1.0, 0.01));
}
