#pragma once

/**
 * @file vehicle_models.hpp
 * @brief Discrete vehicle plants: kinematic single track with an exact arc
 *        step, a kinetic single track with Pacejka tires, and a third-order
 *        steering actuator filter.
 */

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>

#include "dtcsim/geometry.hpp"

namespace dtcsim {

inline constexpr double kGravity = 9.81;  // m/s^2

/// Planar pose of the reference point (rear axle center).
struct VehicleState {
    Vec2 p;
    double psi = 0.0;  // unwrapped heading, radians
};

struct KinematicParams {
    double wheelbase = 1.0;             // m
    double delta_max = 0.25 * kPi;      // rad, symmetric steering limit
};

struct PoseIncrement {
    Vec2 dp;           // world-frame position increment
    double dpsi = 0.0; // heading increment
};

/**
 * One control period of the kinematic single track under zero-order hold.
 *
 * The vehicle moves along a circular arc of yaw rate v*tan(delta)/l; the
 * world-frame chord is the exact integral of the continuous model over dt.
 * Below |psi_dot*dt| = 1e-6 the arc is replaced by its 2nd-order series to
 * avoid 0/0, with relative error < 1e-12.
 */
inline PoseIncrement kinematic_increment(double psi, double delta, double v, double dt,
                                         double wheelbase) {
    require_finite(psi, "heading");
    require_finite(delta, "steering angle");
    require_finite(v, "velocity");
    if (!(dt > 0.0)) {
        throw std::domain_error("dt must be > 0");
    }
    if (!(wheelbase > 0.0)) {
        throw std::domain_error("wheelbase must be > 0");
    }
    const double psi_dot = std::tan(delta) / wheelbase * v;
    const double arc = psi_dot * dt;
    Vec2 local;
    if (std::abs(arc) < 1e-6) {
        local = {v * dt, 0.5 * v * psi_dot * dt * dt};
    } else {
        const double radius = v / psi_dot;
        local = {radius * std::sin(arc), radius * (1.0 - std::cos(arc))};
    }
    return {rotate(psi, local), arc};
}

inline VehicleState kinematic_step(const VehicleState& state, double delta, double v,
                                   double dt, const KinematicParams& params) {
    const PoseIncrement inc = kinematic_increment(state.psi, delta, v, dt, params.wheelbase);
    return {state.p + inc.dp, state.psi + inc.dpsi};
}

// ---------------------------------------------------------------------------
// Kinetic single track
// ---------------------------------------------------------------------------

/// Magic-formula shape coefficients; d scales the peak as a fraction of the
/// normal load.
struct PacejkaCoeffs {
    double b = 10.0;
    double c = 1.9;
    double d = 1.0;
    double e = 0.97;
};

/// Lateral tire force for slip angle alpha (rad) under normal load fz (N).
inline double pacejka_lateral_force(double alpha, double fz, const PacejkaCoeffs& k) {
    require_finite(alpha, "slip angle");
    if (!(fz >= 0.0)) {
        throw std::domain_error("normal load must be >= 0");
    }
    const double ba = k.b * alpha;
    return k.d * fz * std::sin(k.c * std::atan(ba - k.e * (ba - std::atan(ba))));
}

struct KineticParams {
    double mass = 1500.0;          // kg
    double yaw_inertia = 2500.0;   // kg m^2
    double dist_cg_front = 1.35;   // m, CG to front axle
    double dist_cg_rear = 1.35;    // m, CG to rear axle
    double cg_height = 0.5;        // m, for longitudinal load transfer
    double delta_max = std::atan(2.7 / 3.8);  // rad
    double speed_lag_tau = 0.2;    // s, first-order v -> v_cmd lag
    PacejkaCoeffs tire_front{};
    PacejkaCoeffs tire_rear{};

    double wheelbase() const { return dist_cg_front + dist_cg_rear; }
};

struct KineticState {
    Vec2 p;                 // rear axle position
    double psi = 0.0;       // heading
    double v_long = 0.0;    // body-frame longitudinal velocity, m/s
    double v_lat = 0.0;     // body-frame lateral velocity at CG, m/s
    double yaw_rate = 0.0;  // rad/s

    VehicleState pose() const { return {p, psi}; }
};

namespace detail {

struct KineticDerivative {
    Vec2 dp;
    double dpsi;
    double dv_long;
    double dv_lat;
    double dyaw;
};

inline KineticDerivative kinetic_derivative(const KineticState& x, double delta,
                                            double v_cmd, const KineticParams& k) {
    const double a = k.dist_cg_front;
    const double b = k.dist_cg_rear;
    const double wb = a + b;
    const double a_long = (v_cmd - x.v_long) / k.speed_lag_tau;

    const double alpha_f = delta - std::atan2(x.v_lat + a * x.yaw_rate, x.v_long);
    const double alpha_r = -std::atan2(x.v_lat - b * x.yaw_rate, x.v_long);

    // Static axle loads shifted by the longitudinal acceleration.
    const double transfer = k.mass * a_long * k.cg_height / wb;
    const double fz_front = std::max(0.0, k.mass * kGravity * b / wb - transfer);
    const double fz_rear = std::max(0.0, k.mass * kGravity * a / wb + transfer);

    const double fy_front = pacejka_lateral_force(alpha_f, fz_front, k.tire_front);
    const double fy_rear = pacejka_lateral_force(alpha_r, fz_rear, k.tire_rear);

    KineticDerivative d;
    d.dp = rotate(x.psi, {x.v_long, x.v_lat});
    d.dpsi = x.yaw_rate;
    d.dv_long = a_long;
    d.dv_lat = (fy_front + fy_rear) / k.mass - x.v_long * x.yaw_rate;
    d.dyaw = (a * fy_front - b * fy_rear) / k.yaw_inertia;
    return d;
}

inline KineticState kinetic_add(const KineticState& x, const KineticDerivative& d,
                                double h) {
    return {x.p + h * d.dp, x.psi + h * d.dpsi, x.v_long + h * d.dv_long,
            x.v_lat + h * d.dv_lat, x.yaw_rate + h * d.dyaw};
}

}  // namespace detail

/**
 * One control period of the kinetic single track (RK4, zero-order hold on
 * delta and v_cmd). Longitudinal speed tracks v_cmd through a first-order lag;
 * lateral dynamics use the classic small-angle force resolution with Pacejka
 * axle forces and longitudinal load transfer.
 */
inline KineticState kinetic_step(const KineticState& state, double delta, double v_cmd,
                                 double dt, const KineticParams& params) {
    require_finite(delta, "steering angle");
    require_finite(v_cmd, "commanded velocity");
    if (!(dt > 0.0)) {
        throw std::domain_error("dt must be > 0");
    }
    using detail::kinetic_add;
    using detail::kinetic_derivative;
    const auto k1 = kinetic_derivative(state, delta, v_cmd, params);
    const auto k2 = kinetic_derivative(kinetic_add(state, k1, 0.5 * dt), delta, v_cmd, params);
    const auto k3 = kinetic_derivative(kinetic_add(state, k2, 0.5 * dt), delta, v_cmd, params);
    const auto k4 = kinetic_derivative(kinetic_add(state, k3, dt), delta, v_cmd, params);

    KineticState out = state;
    const double h = dt / 6.0;
    out.p += h * (k1.dp + 2.0 * k2.dp + 2.0 * k3.dp + k4.dp);
    out.psi += h * (k1.dpsi + 2.0 * k2.dpsi + 2.0 * k3.dpsi + k4.dpsi);
    out.v_long += h * (k1.dv_long + 2.0 * k2.dv_long + 2.0 * k3.dv_long + k4.dv_long);
    out.v_lat += h * (k1.dv_lat + 2.0 * k2.dv_lat + 2.0 * k3.dv_lat + k4.dv_lat);
    out.yaw_rate += h * (k1.dyaw + 2.0 * k2.dyaw + 2.0 * k3.dyaw + k4.dyaw);
    return out;
}

// ---------------------------------------------------------------------------
// Steering actuator
// ---------------------------------------------------------------------------

/**
 * Third-order low-pass steering actuator: three identical first-order lags in
 * series, integrated exactly (zero-order hold) on a fixed 1 ms inner grid.
 * Unity DC gain; the step response stays within [0, 1] and is monotone.
 */
class SteeringFilter {
  public:
    explicit SteeringFilter(double tau = 0.05, double inner_dt = 1e-3)
        : tau_(tau), inner_dt_(inner_dt) {
        if (!(tau > 0.0) || !(inner_dt > 0.0)) {
            throw std::domain_error("filter time constants must be > 0");
        }
        decay_ = 1.0 - std::exp(-inner_dt_ / tau_);
    }

    double inner_dt() const { return inner_dt_; }

    void reset(double value) { stages_.fill(value); }

    /// Advances the cascade by dt (must be an integer multiple of the inner
    /// step) with the command held constant; returns the actuator output.
    double step(double command, double dt) {
        require_finite(command, "steering command");
        const double ratio = dt / inner_dt_;
        const auto n = static_cast<long>(std::llround(ratio));
        if (n < 1 || std::abs(ratio - static_cast<double>(n)) > 1e-9) {
            throw std::domain_error("dt must be a positive integer multiple of the inner step");
        }
        for (long i = 0; i < n; ++i) {
            stages_[0] += (command - stages_[0]) * decay_;
            stages_[1] += (stages_[0] - stages_[1]) * decay_;
            stages_[2] += (stages_[1] - stages_[2]) * decay_;
        }
        return stages_[2];
    }

    double output() const { return stages_[2]; }

  private:
    double tau_;
    double inner_dt_;
    double decay_;
    std::array<double, 3> stages_{};
};

}  // namespace dtcsim
