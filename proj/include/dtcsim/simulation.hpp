#pragma once

/**
 * @file simulation.hpp
 * @brief Closed-loop harness: plant abstraction plus the deterministic
 *        scenario runner.
 *
 * Per-step order, fixed so that every run is reproducible bit for bit:
 *   1. sample the speed profile at t
 *   2. read the plant pose, add measurement noise if configured
 *   3. push the measurement through the output delay line
 *   4. compensator tick with the previous period's steering command
 *   5. controller computes the steering command from the predicted pose
 *   6. clamp the command, push it through the input delay line
 *   7. steering filter (when enabled) produces the actuated angle
 *   8. record the trace row, then advance the plant
 *
 * The trace error column is always computed from the true plant pose, never
 * from the delayed or predicted one.
 */

#include <cmath>
#include <memory>
#include <optional>
#include <random>
#include <vector>

#include "dtcsim/compensator.hpp"
#include "dtcsim/controllers.hpp"
#include "dtcsim/delay_line.hpp"
#include "dtcsim/geometry.hpp"
#include "dtcsim/path.hpp"
#include "dtcsim/scenario.hpp"
#include "dtcsim/vehicle_models.hpp"

namespace dtcsim {

/// Minimal plant interface; pose is the rear-axle frame in both models.
class Plant {
  public:
    virtual ~Plant() = default;
    virtual VehicleState pose() const = 0;
    /// Longitudinal speed reported in the trace for the current instant.
    virtual double speed(double v_cmd) const = 0;
    virtual void step(double delta, double v_cmd, double dt) = 0;
};

class KinematicPlant final : public Plant {
  public:
    KinematicPlant(const KinematicParams& params, const VehicleState& initial)
        : params_(params), state_(initial) {}

    VehicleState pose() const override { return state_; }
    double speed(double v_cmd) const override { return v_cmd; }

    void step(double delta, double v_cmd, double dt) override {
        state_ = kinematic_step(state_, delta, v_cmd, dt, params_);
    }

  private:
    KinematicParams params_;
    VehicleState state_;
};

class KineticPlant final : public Plant {
  public:
    KineticPlant(const KineticParams& params, const VehicleState& initial, double v_initial)
        : params_(params) {
        state_.p = initial.p;
        state_.psi = initial.psi;
        state_.v_long = v_initial;
        state_.v_lat = 0.0;
        state_.yaw_rate = 0.0;
    }

    VehicleState pose() const override { return state_.pose(); }
    double speed(double /*v_cmd*/) const override { return state_.v_long; }

    void step(double delta, double v_cmd, double dt) override {
        state_ = kinetic_step(state_, delta, v_cmd, dt, params_);
    }

    const KineticState& state() const { return state_; }

  private:
    KineticParams params_;
    KineticState state_;
};

struct TraceRow {
    double t = 0.0;
    VehicleState pose{};     // true plant pose
    double v = 0.0;          // true longitudinal speed
    double e = 0.0;          // signed cross-track error of the true pose
    double s_star = 0.0;     // arc length of the true projection
    double delta_cmd = 0.0;  // clamped controller output
    double delta_act = 0.0;  // angle applied to the plant this period
    VehicleState y_hat{};    // compensator output fed to the controller
    VehicleState y_del{};    // delayed measurement entering the compensator
    Vec2 model_shift{};      // newest shifted prediction-model position
    VehicleState model_pose{};  // absolute prediction-model pose (diagnostic)
    bool pp_fallback = false;   // pure pursuit fell back to the path endpoint
};

struct SimTrace {
    ScenarioConfig config;
    std::vector<TraceRow> rows;
};

inline std::unique_ptr<Plant> make_plant(const ScenarioConfig& c) {
    const VehicleState initial = c.initial_pose.state();
    if (c.plant.type == PlantType::kinematic) {
        return std::make_unique<KinematicPlant>(c.plant.kinematic, initial);
    }
    return std::make_unique<KineticPlant>(c.plant.kinetic, initial, c.speed.at(0.0));
}

inline std::unique_ptr<LateralController> make_controller(const ScenarioConfig& c) {
    switch (c.controller.type) {
        case ControllerType::stanley:
            return std::make_unique<StanleyController>(c.controller.stanley);
        case ControllerType::pure_pursuit:
            return std::make_unique<PurePursuitController>(c.controller.pure_pursuit);
        case ControllerType::dubins_robust:
        default:
            return std::make_unique<DubinsRobustController>(c.controller.dubins);
    }
}

inline SimTrace run_scenario(const ScenarioConfig& config) {
    validate_or_throw(config);

    const double dt = config.dt_s;
    const long n_steps = config.steps();
    const DelaySteps steps = delay_steps(config);
    const double delta_max = config.plant.delta_max();

    const ReferencePath path = config.path.build();
    const auto plant = make_plant(config);
    const auto controller = make_controller(config);

    // Delay lines start filled: the pose line with the initial pose (the
    // vehicle was at rest there before t = 0), the command line with zeros.
    DelayLine<VehicleState> output_line(steps.output, plant->pose());
    DelayLine<double> input_line(steps.input, 0.0);

    SteeringFilter filter(config.plant.steering_filter.tau_s,
                          config.plant.steering_filter.inner_dt_s);
    const bool use_filter = config.plant.steering_filter.enabled;

    CompensatorConfig comp_config;
    comp_config.enabled = config.compensator.enabled;
    comp_config.horizon_steps = steps.compensated;
    comp_config.wheelbase = config.compensator.wheelbase_hat;
    if (config.compensator.model_initial_pose) {
        comp_config.initial_model_pose = config.compensator.model_initial_pose->state();
    }
    DeadTimeCompensator compensator(comp_config);

    std::mt19937_64 rng(config.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const bool noisy = config.noise.enabled();

    SimTrace trace;
    trace.config = config;
    trace.rows.reserve(static_cast<std::size_t>(n_steps) + 1);

    double last_cmd = 0.0;
    std::optional<double> true_hint;

    for (long i = 0; i <= n_steps; ++i) {
        const double t = static_cast<double>(i) * dt;
        const double v_cmd = config.speed.at(t);

        const VehicleState true_pose = plant->pose();
        VehicleState measured = true_pose;
        if (noisy) {
            measured.p.x += config.noise.std_xy_m * gauss(rng);
            measured.p.y += config.noise.std_xy_m * gauss(rng);
            measured.psi += config.noise.std_psi_rad * gauss(rng);
        }

        const VehicleState y_del = output_line.push(measured);
        const VehicleState y_hat = compensator.tick(y_del, last_cmd, v_cmd, dt);

        const ControlDecision decision = controller->control(y_hat, v_cmd, path);
        const double delta_cmd = std::clamp(decision.delta, -delta_max, delta_max);

        const double delta_in = input_line.push(delta_cmd);
        const double delta_act = use_filter ? filter.step(delta_in, dt) : delta_in;

        const PathProjection proj =
            true_hint ? path.project(true_pose.p, *true_hint) : path.project(true_pose.p);
        true_hint = proj.s_star;

        TraceRow row;
        row.t = t;
        row.pose = true_pose;
        row.v = plant->speed(v_cmd);
        row.e = proj.e_signed;
        row.s_star = proj.s_star;
        row.delta_cmd = delta_cmd;
        row.delta_act = delta_act;
        row.y_hat = y_hat;
        row.y_del = y_del;
        if (compensator.active()) {
            row.model_shift = compensator.queue()->newest_shifted_position();
            row.model_pose = compensator.model_pose();
        } else {
            row.model_pose = y_del;
        }
        row.pp_fallback = decision.endpoint_fallback;
        trace.rows.push_back(row);

        if (i < n_steps) {
            plant->step(delta_act, v_cmd, dt);
            last_cmd = delta_cmd;
        }
    }

    return trace;
}

}  // namespace dtcsim
