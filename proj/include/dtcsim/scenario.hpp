#pragma once

/**
 * @file scenario.hpp
 * @brief Scenario configuration: typed structs, JSON (de)serialization with
 *        strict key checking, and semantic validation.
 *
 * The canonical config format is JSON; // comments are accepted on parse so
 * annotated examples remain valid configs. Every field has a default, and
 * to_json always emits the fully normalized form.
 */

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <initializer_list>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "dtcsim/controllers.hpp"
#include "dtcsim/geometry.hpp"
#include "dtcsim/path.hpp"
#include "dtcsim/vehicle_models.hpp"

namespace dtcsim {

class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

enum class PlantType { kinematic, kinetic };
enum class ControllerType { stanley, pure_pursuit, dubins_robust };
enum class SpeedProfileType { constant, ramp };

struct PoseConfig {
    double x = 0.0;
    double y = 0.0;
    double psi = 0.0;

    VehicleState state() const { return {{x, y}, psi}; }
};

struct SteeringFilterConfig {
    bool enabled = false;
    double tau_s = 0.05;
    double inner_dt_s = 1e-3;
};

struct PlantConfig {
    PlantType type = PlantType::kinematic;
    KinematicParams kinematic{};
    KineticParams kinetic{};
    SteeringFilterConfig steering_filter{};

    double delta_max() const {
        return type == PlantType::kinematic ? kinematic.delta_max : kinetic.delta_max;
    }
};

struct SpeedProfileConfig {
    SpeedProfileType type = SpeedProfileType::constant;
    double v_mps = 1.0;            // constant profile
    double v0_mps = 1.0;           // ramp start
    double v1_mps = 1.0;           // ramp end
    double ramp_duration_s = 1.0;  // ramp length from t = 0

    double at(double t) const {
        if (type == SpeedProfileType::constant) {
            return v_mps;
        }
        if (t >= ramp_duration_s) {
            return v1_mps;
        }
        return v0_mps + (v1_mps - v0_mps) * (t / ramp_duration_s);
    }

    double max() const {
        return type == SpeedProfileType::constant ? v_mps : std::max(v0_mps, v1_mps);
    }

    double min() const {
        return type == SpeedProfileType::constant ? v_mps : std::min(v0_mps, v1_mps);
    }
};

struct DelayConfig {
    double input_s = 0.0;
    double output_s = 0.0;
    double constant_dead_time_s = 0.0;  // kinetic plant only, split input/output

    double total() const { return input_s + output_s + constant_dead_time_s; }
};

struct ControllerConfig {
    ControllerType type = ControllerType::stanley;
    StanleyParams stanley{};
    PurePursuitParams pure_pursuit{};
    DubinsRobustParams dubins{};
};

struct CompensatorUserConfig {
    bool enabled = false;
    double dt_hat_s = 0.0;       // compensated dead time
    double wheelbase_hat = 1.0;  // prediction-model wheelbase
    std::optional<PoseConfig> model_initial_pose;
};

struct PathSegmentConfig {
    SegmentType type = SegmentType::line;
    double length_m = 1.0;
    double start_curvature = 0.0;  // 1/m
    double end_curvature = 0.0;    // 1/m

    SegmentSpec spec() const { return {type, length_m, start_curvature, end_curvature}; }
};

struct PathConfig {
    PoseConfig start{};
    std::vector<PathSegmentConfig> segments{PathSegmentConfig{SegmentType::line, 40.0, 0.0, 0.0}};

    ReferencePath build() const {
        std::vector<SegmentSpec> specs;
        specs.reserve(segments.size());
        for (const auto& s : segments) {
            specs.push_back(s.spec());
        }
        return ReferencePath({start.x, start.y}, start.psi, specs);
    }
};

struct MetricsParams {
    double eps_settle_m = 0.05;     // settled band
    double reach_threshold_m = 0.5; // |e| below this opens the analysis window
    double window_s = 30.0;         // analysis window length after reach
};

struct NoiseConfig {
    double std_xy_m = 0.0;
    double std_psi_rad = 0.0;

    bool enabled() const { return std_xy_m > 0.0 || std_psi_rad > 0.0; }
};

struct ScenarioConfig {
    std::string name = "scenario";
    double dt_s = 0.01;
    double duration_s = 30.0;
    std::uint64_t seed = 0;
    PlantConfig plant{};
    PoseConfig initial_pose{};
    SpeedProfileConfig speed{};
    DelayConfig delays{};
    ControllerConfig controller{};
    CompensatorUserConfig compensator{};
    PathConfig path{};
    MetricsParams metrics{};
    NoiseConfig noise{};

    long steps() const { return std::llround(duration_s / dt_s); }
};

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

namespace detail {

/// dt multiple check shared by every delay-like duration.
inline bool integer_ratio(double value, double dt, long* out = nullptr) {
    const double ratio = value / dt;
    const long n = std::llround(ratio);
    if (std::abs(ratio - static_cast<double>(n)) > 1e-9 * std::max(1.0, std::abs(ratio))) {
        return false;
    }
    if (out != nullptr) {
        *out = n;
    }
    return true;
}

}  // namespace detail

/// Delay-line lengths in steps; the constant dead time is split half to the
/// input side, the remainder to the output side.
struct DelaySteps {
    std::size_t input = 0;
    std::size_t output = 0;
    std::size_t compensated = 0;  // prediction horizon k
};

inline DelaySteps delay_steps(const ScenarioConfig& c) {
    long k_in = 0;
    long k_out = 0;
    long k_const = 0;
    long k_hat = 0;
    detail::integer_ratio(c.delays.input_s, c.dt_s, &k_in);
    detail::integer_ratio(c.delays.output_s, c.dt_s, &k_out);
    detail::integer_ratio(c.delays.constant_dead_time_s, c.dt_s, &k_const);
    detail::integer_ratio(c.compensator.dt_hat_s, c.dt_s, &k_hat);
    const long k_const_in = k_const / 2;
    return {static_cast<std::size_t>(k_in + k_const_in),
            static_cast<std::size_t>(k_out + (k_const - k_const_in)),
            static_cast<std::size_t>(k_hat)};
}

/// Semantic checks; returns one "field: problem" line per violation.
inline std::vector<std::string> validate(const ScenarioConfig& c) {
    std::vector<std::string> errors;
    const auto fail = [&errors](const std::string& field, const std::string& msg) {
        errors.push_back(field + ": " + msg);
    };

    if (!(c.dt_s > 0.0)) {
        fail("dt_s", "must be > 0");
    }
    if (!(c.duration_s > 0.0)) {
        fail("duration_s", "must be > 0");
    }
    if (c.dt_s > 0.0 && c.duration_s > 0.0 && !detail::integer_ratio(c.duration_s, c.dt_s)) {
        fail("duration_s", "must be an integer multiple of dt_s");
    }

    const bool kinematic = c.plant.type == PlantType::kinematic;
    if (kinematic) {
        if (!(c.plant.kinematic.wheelbase > 0.0)) {
            fail("plant.wheelbase_m", "must be > 0");
        }
    } else {
        const auto& k = c.plant.kinetic;
        if (!(k.mass > 0.0)) fail("plant.mass_kg", "must be > 0");
        if (!(k.yaw_inertia > 0.0)) fail("plant.yaw_inertia_kgm2", "must be > 0");
        if (!(k.dist_cg_front > 0.0)) fail("plant.dist_cg_front_m", "must be > 0");
        if (!(k.dist_cg_rear > 0.0)) fail("plant.dist_cg_rear_m", "must be > 0");
        if (!(k.cg_height >= 0.0)) fail("plant.cg_height_m", "must be >= 0");
        if (!(k.speed_lag_tau > 0.0)) fail("plant.speed_lag_tau_s", "must be > 0");
        for (const auto* tire : {&k.tire_front, &k.tire_rear}) {
            if (!(tire->b > 0.0) || !(tire->c > 0.0) || !(tire->d > 0.0)) {
                fail("plant.pacejka", "b, c, d must be > 0");
                break;
            }
        }
    }
    const double delta_max = c.plant.delta_max();
    if (!(delta_max > 0.0) || delta_max >= 0.5 * kPi) {
        fail("plant.delta_max_rad", "must be in (0, pi/2)");
    }

    if (c.plant.steering_filter.enabled) {
        if (kinematic) {
            fail("plant.steering_filter.enabled", "steering filter requires the kinetic plant");
        }
        if (!(c.plant.steering_filter.tau_s > 0.0)) {
            fail("plant.steering_filter.tau_s", "must be > 0");
        }
        if (!(c.plant.steering_filter.inner_dt_s > 0.0)) {
            fail("plant.steering_filter.inner_dt_s", "must be > 0");
        } else if (c.dt_s > 0.0 &&
                   !detail::integer_ratio(c.dt_s, c.plant.steering_filter.inner_dt_s)) {
            fail("dt_s", "must be an integer multiple of the steering filter inner step");
        }
    }

    if (c.speed.type == SpeedProfileType::constant) {
        if (!(c.speed.v_mps > 0.0)) {
            fail("speed_profile.v_mps", "must be > 0");
        }
    } else {
        if (!(c.speed.v0_mps > 0.0)) fail("speed_profile.v0_mps", "must be > 0");
        if (!(c.speed.v1_mps > 0.0)) fail("speed_profile.v1_mps", "must be > 0");
        if (!(c.speed.ramp_duration_s > 0.0)) fail("speed_profile.ramp_duration_s", "must be > 0");
    }

    const struct {
        const char* field;
        double value;
    } delays[] = {{"delays.input_s", c.delays.input_s},
                  {"delays.output_s", c.delays.output_s},
                  {"delays.constant_dead_time_s", c.delays.constant_dead_time_s},
                  {"compensator.dt_hat_s", c.compensator.dt_hat_s}};
    for (const auto& d : delays) {
        if (d.value < 0.0) {
            fail(d.field, "must be >= 0");
        } else if (c.dt_s > 0.0 && !detail::integer_ratio(d.value, c.dt_s)) {
            fail(d.field, "must be an integer multiple of dt_s");
        }
    }
    if (kinematic && c.delays.constant_dead_time_s != 0.0) {
        fail("delays.constant_dead_time_s", "requires the kinetic plant");
    }
    if (c.compensator.enabled && !(c.compensator.wheelbase_hat > 0.0)) {
        fail("compensator.wheelbase_hat_m", "must be > 0");
    }

    switch (c.controller.type) {
        case ControllerType::stanley:
            if (!(c.controller.stanley.gain > 0.0)) {
                fail("controller.gain_per_s", "must be > 0");
            }
            if (!(c.controller.stanley.wheelbase > 0.0)) {
                fail("controller.wheelbase_m", "must be > 0");
            }
            if (!(c.speed.min() > 0.0)) {
                fail("speed_profile", "stanley law requires v > 0 throughout");
            }
            break;
        case ControllerType::pure_pursuit:
            if (!(c.controller.pure_pursuit.lookahead > 0.0)) {
                fail("controller.lookahead_m", "must be > 0");
            }
            if (!(c.controller.pure_pursuit.wheelbase > 0.0)) {
                fail("controller.wheelbase_m", "must be > 0");
            }
            break;
        case ControllerType::dubins_robust: {
            const auto& d = c.controller.dubins;
            if (!(d.delta_bar > 0.0) || d.delta_bar >= 0.5 * kPi) {
                fail("controller.delta_bar_rad", "must be in (0, pi/2)");
            } else if (delta_max > 0.0 && d.delta_bar > delta_max + 1e-12) {
                fail("controller.delta_bar_rad", "must not exceed plant.delta_max_rad");
            }
            if (!(d.k_rob > 0.0) || d.k_rob > 1.0) {
                fail("controller.k_rob", "must be in (0, 1]");
            }
            if (!(d.boundary_layer > 0.0)) {
                fail("controller.boundary_layer_m", "must be > 0");
            }
            if (!(d.wheelbase > 0.0)) {
                fail("controller.wheelbase_m", "must be > 0");
            }
            break;
        }
    }

    if (c.path.segments.empty()) {
        fail("path.segments", "must not be empty");
    }
    for (std::size_t i = 0; i < c.path.segments.size(); ++i) {
        const auto& s = c.path.segments[i];
        const std::string field = "path.segments[" + std::to_string(i) + "]";
        if (!(s.length_m > 0.0)) {
            fail(field + ".length_m", "must be > 0");
        }
        switch (s.type) {
            case SegmentType::line:
                if (s.start_curvature != 0.0 || s.end_curvature != 0.0) {
                    fail(field, "line curvature must be 0");
                }
                break;
            case SegmentType::arc:
                if (s.start_curvature == 0.0 || s.start_curvature != s.end_curvature) {
                    fail(field, "arc needs equal, nonzero start/end curvature");
                }
                break;
            case SegmentType::spiral:
                if (s.start_curvature == 0.0 || s.end_curvature == 0.0 ||
                    s.start_curvature * s.end_curvature < 0.0) {
                    fail(field, "spiral curvature must keep one sign and stay nonzero");
                } else if (s.start_curvature == s.end_curvature) {
                    fail(field, "spiral with constant curvature should be an arc");
                }
                break;
        }
    }

    if (!(c.metrics.eps_settle_m > 0.0)) fail("metrics.eps_settle_m", "must be > 0");
    if (!(c.metrics.reach_threshold_m > 0.0)) fail("metrics.reach_threshold_m", "must be > 0");
    if (!(c.metrics.window_s > 0.0)) fail("metrics.window_s", "must be > 0");
    if (c.noise.std_xy_m < 0.0) fail("noise.std_xy_m", "must be >= 0");
    if (c.noise.std_psi_rad < 0.0) fail("noise.std_psi_rad", "must be >= 0");

    return errors;
}

inline void validate_or_throw(const ScenarioConfig& c) {
    const auto errors = validate(c);
    if (!errors.empty()) {
        std::ostringstream oss;
        oss << "invalid scenario config:";
        for (const auto& e : errors) {
            oss << "\n  " << e;
        }
        throw ConfigError(oss.str());
    }
}

// ---------------------------------------------------------------------------
// JSON mapping
// ---------------------------------------------------------------------------

namespace detail {

using json = nlohmann::json;

inline void expect_keys(const json& j, const std::string& ctx,
                        std::initializer_list<std::string_view> allowed) {
    if (!j.is_object()) {
        throw ConfigError(ctx + ": expected an object");
    }
    for (const auto& item : j.items()) {
        if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end()) {
            throw ConfigError(ctx + ": unknown key '" + item.key() + "'");
        }
    }
}

inline double get_num(const json& j, const std::string& ctx, const char* key, double fallback) {
    if (!j.contains(key)) {
        return fallback;
    }
    const auto& v = j.at(key);
    if (!v.is_number()) {
        throw ConfigError(ctx + "." + key + ": expected a number");
    }
    return v.get<double>();
}

inline bool get_bool(const json& j, const std::string& ctx, const char* key, bool fallback) {
    if (!j.contains(key)) {
        return fallback;
    }
    const auto& v = j.at(key);
    if (!v.is_boolean()) {
        throw ConfigError(ctx + "." + key + ": expected a boolean");
    }
    return v.get<bool>();
}

inline std::string get_str(const json& j, const std::string& ctx, const char* key,
                           const std::string& fallback) {
    if (!j.contains(key)) {
        return fallback;
    }
    const auto& v = j.at(key);
    if (!v.is_string()) {
        throw ConfigError(ctx + "." + key + ": expected a string");
    }
    return v.get<std::string>();
}

inline PoseConfig pose_from_json(const json& j, const std::string& ctx) {
    expect_keys(j, ctx, {"x_m", "y_m", "psi_rad"});
    return {get_num(j, ctx, "x_m", 0.0), get_num(j, ctx, "y_m", 0.0),
            get_num(j, ctx, "psi_rad", 0.0)};
}

inline json pose_to_json(const PoseConfig& p) {
    return {{"x_m", p.x}, {"y_m", p.y}, {"psi_rad", p.psi}};
}

inline PacejkaCoeffs pacejka_from_json(const json& j, const std::string& ctx,
                                       const PacejkaCoeffs& fallback) {
    expect_keys(j, ctx, {"b", "c", "d", "e"});
    return {get_num(j, ctx, "b", fallback.b), get_num(j, ctx, "c", fallback.c),
            get_num(j, ctx, "d", fallback.d), get_num(j, ctx, "e", fallback.e)};
}

inline json pacejka_to_json(const PacejkaCoeffs& p) {
    return {{"b", p.b}, {"c", p.c}, {"d", p.d}, {"e", p.e}};
}

}  // namespace detail

inline ScenarioConfig scenario_from_json(const nlohmann::json& j) {
    using detail::expect_keys;
    using detail::get_bool;
    using detail::get_num;
    using detail::get_str;
    using nlohmann::json;

    expect_keys(j, "config",
                {"name", "dt_s", "duration_s", "seed", "plant", "initial_pose", "speed_profile",
                 "delays", "controller", "compensator", "path", "metrics", "noise"});

    ScenarioConfig c;
    c.name = get_str(j, "config", "name", c.name);
    c.dt_s = get_num(j, "config", "dt_s", c.dt_s);
    c.duration_s = get_num(j, "config", "duration_s", c.duration_s);
    if (j.contains("seed")) {
        if (!j.at("seed").is_number_unsigned()) {
            throw ConfigError("config.seed: expected a non-negative integer");
        }
        c.seed = j.at("seed").get<std::uint64_t>();
    }

    if (j.contains("plant")) {
        const auto& jp = j.at("plant");
        const std::string type = get_str(jp, "plant", "type", "kinematic");
        if (type == "kinematic") {
            c.plant.type = PlantType::kinematic;
            expect_keys(jp, "plant", {"type", "wheelbase_m", "delta_max_rad", "steering_filter"});
            c.plant.kinematic.wheelbase =
                get_num(jp, "plant", "wheelbase_m", c.plant.kinematic.wheelbase);
            c.plant.kinematic.delta_max =
                get_num(jp, "plant", "delta_max_rad", c.plant.kinematic.delta_max);
        } else if (type == "kinetic") {
            c.plant.type = PlantType::kinetic;
            expect_keys(jp, "plant",
                        {"type", "mass_kg", "yaw_inertia_kgm2", "dist_cg_front_m",
                         "dist_cg_rear_m", "cg_height_m", "delta_max_rad", "speed_lag_tau_s",
                         "pacejka_front", "pacejka_rear", "steering_filter"});
            auto& k = c.plant.kinetic;
            k.mass = get_num(jp, "plant", "mass_kg", k.mass);
            k.yaw_inertia = get_num(jp, "plant", "yaw_inertia_kgm2", k.yaw_inertia);
            k.dist_cg_front = get_num(jp, "plant", "dist_cg_front_m", k.dist_cg_front);
            k.dist_cg_rear = get_num(jp, "plant", "dist_cg_rear_m", k.dist_cg_rear);
            k.cg_height = get_num(jp, "plant", "cg_height_m", k.cg_height);
            k.delta_max = get_num(jp, "plant", "delta_max_rad", k.delta_max);
            k.speed_lag_tau = get_num(jp, "plant", "speed_lag_tau_s", k.speed_lag_tau);
            if (jp.contains("pacejka_front")) {
                k.tire_front =
                    detail::pacejka_from_json(jp.at("pacejka_front"), "plant.pacejka_front", {});
            }
            if (jp.contains("pacejka_rear")) {
                k.tire_rear =
                    detail::pacejka_from_json(jp.at("pacejka_rear"), "plant.pacejka_rear", {});
            }
        } else {
            throw ConfigError("plant.type: expected 'kinematic' or 'kinetic'");
        }
        if (jp.contains("steering_filter")) {
            const auto& jf = jp.at("steering_filter");
            expect_keys(jf, "plant.steering_filter", {"enabled", "tau_s", "inner_dt_s"});
            c.plant.steering_filter.enabled =
                get_bool(jf, "plant.steering_filter", "enabled", false);
            c.plant.steering_filter.tau_s =
                get_num(jf, "plant.steering_filter", "tau_s", c.plant.steering_filter.tau_s);
            c.plant.steering_filter.inner_dt_s = get_num(jf, "plant.steering_filter", "inner_dt_s",
                                                         c.plant.steering_filter.inner_dt_s);
        }
    }

    if (j.contains("initial_pose")) {
        c.initial_pose = detail::pose_from_json(j.at("initial_pose"), "initial_pose");
    }

    if (j.contains("speed_profile")) {
        const auto& js = j.at("speed_profile");
        const std::string type = get_str(js, "speed_profile", "type", "constant");
        if (type == "constant") {
            c.speed.type = SpeedProfileType::constant;
            expect_keys(js, "speed_profile", {"type", "v_mps"});
            c.speed.v_mps = get_num(js, "speed_profile", "v_mps", c.speed.v_mps);
        } else if (type == "ramp") {
            c.speed.type = SpeedProfileType::ramp;
            expect_keys(js, "speed_profile", {"type", "v0_mps", "v1_mps", "ramp_duration_s"});
            c.speed.v0_mps = get_num(js, "speed_profile", "v0_mps", c.speed.v0_mps);
            c.speed.v1_mps = get_num(js, "speed_profile", "v1_mps", c.speed.v1_mps);
            c.speed.ramp_duration_s =
                get_num(js, "speed_profile", "ramp_duration_s", c.speed.ramp_duration_s);
        } else {
            throw ConfigError("speed_profile.type: expected 'constant' or 'ramp'");
        }
    }

    if (j.contains("delays")) {
        const auto& jd = j.at("delays");
        expect_keys(jd, "delays", {"input_s", "output_s", "constant_dead_time_s"});
        c.delays.input_s = get_num(jd, "delays", "input_s", 0.0);
        c.delays.output_s = get_num(jd, "delays", "output_s", 0.0);
        c.delays.constant_dead_time_s = get_num(jd, "delays", "constant_dead_time_s", 0.0);
    }

    if (j.contains("controller")) {
        const auto& jc = j.at("controller");
        const std::string type = get_str(jc, "controller", "type", "stanley");
        if (type == "stanley") {
            c.controller.type = ControllerType::stanley;
            expect_keys(jc, "controller", {"type", "gain_per_s", "wheelbase_m"});
            c.controller.stanley.gain =
                get_num(jc, "controller", "gain_per_s", c.controller.stanley.gain);
            c.controller.stanley.wheelbase =
                get_num(jc, "controller", "wheelbase_m", c.controller.stanley.wheelbase);
        } else if (type == "pure_pursuit") {
            c.controller.type = ControllerType::pure_pursuit;
            expect_keys(jc, "controller", {"type", "lookahead_m", "wheelbase_m"});
            c.controller.pure_pursuit.lookahead =
                get_num(jc, "controller", "lookahead_m", c.controller.pure_pursuit.lookahead);
            c.controller.pure_pursuit.wheelbase =
                get_num(jc, "controller", "wheelbase_m", c.controller.pure_pursuit.wheelbase);
        } else if (type == "dubins_robust") {
            c.controller.type = ControllerType::dubins_robust;
            expect_keys(jc, "controller",
                        {"type", "delta_bar_rad", "k_rob", "boundary_layer_m", "wheelbase_m"});
            c.controller.dubins.delta_bar =
                get_num(jc, "controller", "delta_bar_rad", c.controller.dubins.delta_bar);
            c.controller.dubins.k_rob = get_num(jc, "controller", "k_rob", c.controller.dubins.k_rob);
            c.controller.dubins.boundary_layer =
                get_num(jc, "controller", "boundary_layer_m", c.controller.dubins.boundary_layer);
            c.controller.dubins.wheelbase =
                get_num(jc, "controller", "wheelbase_m", c.controller.dubins.wheelbase);
        } else {
            throw ConfigError(
                "controller.type: expected 'stanley', 'pure_pursuit' or 'dubins_robust'");
        }
    }

    if (j.contains("compensator")) {
        const auto& jc = j.at("compensator");
        expect_keys(jc, "compensator",
                    {"enabled", "dt_hat_s", "wheelbase_hat_m", "model_initial_pose"});
        c.compensator.enabled = get_bool(jc, "compensator", "enabled", false);
        c.compensator.dt_hat_s = get_num(jc, "compensator", "dt_hat_s", 0.0);
        c.compensator.wheelbase_hat =
            get_num(jc, "compensator", "wheelbase_hat_m", c.compensator.wheelbase_hat);
        if (jc.contains("model_initial_pose")) {
            c.compensator.model_initial_pose =
                detail::pose_from_json(jc.at("model_initial_pose"), "compensator.model_initial_pose");
        }
    }

    if (j.contains("path")) {
        const auto& jp = j.at("path");
        expect_keys(jp, "path", {"start_pose", "segments"});
        if (jp.contains("start_pose")) {
            c.path.start = detail::pose_from_json(jp.at("start_pose"), "path.start_pose");
        }
        if (jp.contains("segments")) {
            if (!jp.at("segments").is_array()) {
                throw ConfigError("path.segments: expected an array");
            }
            c.path.segments.clear();
            std::size_t i = 0;
            for (const auto& js : jp.at("segments")) {
                const std::string ctx = "path.segments[" + std::to_string(i++) + "]";
                expect_keys(js, ctx,
                            {"type", "length_m", "start_curvature_per_m", "end_curvature_per_m",
                             "curvature_per_m"});
                PathSegmentConfig seg;
                const std::string type = get_str(js, ctx, "type", "line");
                if (type == "line") {
                    seg.type = SegmentType::line;
                } else if (type == "arc") {
                    seg.type = SegmentType::arc;
                } else if (type == "spiral") {
                    seg.type = SegmentType::spiral;
                } else {
                    throw ConfigError(ctx + ".type: expected 'line', 'arc' or 'spiral'");
                }
                seg.length_m = get_num(js, ctx, "length_m", seg.length_m);
                if (js.contains("curvature_per_m")) {
                    seg.start_curvature = get_num(js, ctx, "curvature_per_m", 0.0);
                    seg.end_curvature = seg.start_curvature;
                } else {
                    seg.start_curvature = get_num(js, ctx, "start_curvature_per_m", 0.0);
                    seg.end_curvature = get_num(js, ctx, "end_curvature_per_m", 0.0);
                }
                c.path.segments.push_back(seg);
            }
        }
    }

    if (j.contains("metrics")) {
        const auto& jm = j.at("metrics");
        expect_keys(jm, "metrics", {"eps_settle_m", "reach_threshold_m", "window_s"});
        c.metrics.eps_settle_m = get_num(jm, "metrics", "eps_settle_m", c.metrics.eps_settle_m);
        c.metrics.reach_threshold_m =
            get_num(jm, "metrics", "reach_threshold_m", c.metrics.reach_threshold_m);
        c.metrics.window_s = get_num(jm, "metrics", "window_s", c.metrics.window_s);
    }

    if (j.contains("noise")) {
        const auto& jn = j.at("noise");
        expect_keys(jn, "noise", {"std_xy_m", "std_psi_rad"});
        c.noise.std_xy_m = get_num(jn, "noise", "std_xy_m", 0.0);
        c.noise.std_psi_rad = get_num(jn, "noise", "std_psi_rad", 0.0);
    }

    return c;
}

inline nlohmann::json scenario_to_json(const ScenarioConfig& c) {
    using nlohmann::json;
    json j;
    j["name"] = c.name;
    j["dt_s"] = c.dt_s;
    j["duration_s"] = c.duration_s;
    j["seed"] = c.seed;

    json jp;
    if (c.plant.type == PlantType::kinematic) {
        jp["type"] = "kinematic";
        jp["wheelbase_m"] = c.plant.kinematic.wheelbase;
        jp["delta_max_rad"] = c.plant.kinematic.delta_max;
    } else {
        const auto& k = c.plant.kinetic;
        jp["type"] = "kinetic";
        jp["mass_kg"] = k.mass;
        jp["yaw_inertia_kgm2"] = k.yaw_inertia;
        jp["dist_cg_front_m"] = k.dist_cg_front;
        jp["dist_cg_rear_m"] = k.dist_cg_rear;
        jp["cg_height_m"] = k.cg_height;
        jp["delta_max_rad"] = k.delta_max;
        jp["speed_lag_tau_s"] = k.speed_lag_tau;
        jp["pacejka_front"] = detail::pacejka_to_json(k.tire_front);
        jp["pacejka_rear"] = detail::pacejka_to_json(k.tire_rear);
    }
    jp["steering_filter"] = {{"enabled", c.plant.steering_filter.enabled},
                             {"tau_s", c.plant.steering_filter.tau_s},
                             {"inner_dt_s", c.plant.steering_filter.inner_dt_s}};
    j["plant"] = jp;

    j["initial_pose"] = detail::pose_to_json(c.initial_pose);

    if (c.speed.type == SpeedProfileType::constant) {
        j["speed_profile"] = {{"type", "constant"}, {"v_mps", c.speed.v_mps}};
    } else {
        j["speed_profile"] = {{"type", "ramp"},
                              {"v0_mps", c.speed.v0_mps},
                              {"v1_mps", c.speed.v1_mps},
                              {"ramp_duration_s", c.speed.ramp_duration_s}};
    }

    j["delays"] = {{"input_s", c.delays.input_s},
                   {"output_s", c.delays.output_s},
                   {"constant_dead_time_s", c.delays.constant_dead_time_s}};

    json jc;
    switch (c.controller.type) {
        case ControllerType::stanley:
            jc = {{"type", "stanley"},
                  {"gain_per_s", c.controller.stanley.gain},
                  {"wheelbase_m", c.controller.stanley.wheelbase}};
            break;
        case ControllerType::pure_pursuit:
            jc = {{"type", "pure_pursuit"},
                  {"lookahead_m", c.controller.pure_pursuit.lookahead},
                  {"wheelbase_m", c.controller.pure_pursuit.wheelbase}};
            break;
        case ControllerType::dubins_robust:
            jc = {{"type", "dubins_robust"},
                  {"delta_bar_rad", c.controller.dubins.delta_bar},
                  {"k_rob", c.controller.dubins.k_rob},
                  {"boundary_layer_m", c.controller.dubins.boundary_layer},
                  {"wheelbase_m", c.controller.dubins.wheelbase}};
            break;
    }
    j["controller"] = jc;

    json jcomp = {{"enabled", c.compensator.enabled},
                  {"dt_hat_s", c.compensator.dt_hat_s},
                  {"wheelbase_hat_m", c.compensator.wheelbase_hat}};
    if (c.compensator.model_initial_pose) {
        jcomp["model_initial_pose"] = detail::pose_to_json(*c.compensator.model_initial_pose);
    }
    j["compensator"] = jcomp;

    json segments = json::array();
    for (const auto& s : c.path.segments) {
        const char* type = s.type == SegmentType::line
                               ? "line"
                               : (s.type == SegmentType::arc ? "arc" : "spiral");
        segments.push_back({{"type", type},
                            {"length_m", s.length_m},
                            {"start_curvature_per_m", s.start_curvature},
                            {"end_curvature_per_m", s.end_curvature}});
    }
    j["path"] = {{"start_pose", detail::pose_to_json(c.path.start)}, {"segments", segments}};

    j["metrics"] = {{"eps_settle_m", c.metrics.eps_settle_m},
                    {"reach_threshold_m", c.metrics.reach_threshold_m},
                    {"window_s", c.metrics.window_s}};
    j["noise"] = {{"std_xy_m", c.noise.std_xy_m}, {"std_psi_rad", c.noise.std_psi_rad}};
    return j;
}

/// Parses a config file; // comments are allowed.
inline ScenarioConfig load_scenario(const std::string& file_path) {
    std::ifstream in(file_path);
    if (!in) {
        throw ConfigError("cannot open config file: " + file_path);
    }
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in, nullptr, /*allow_exceptions=*/true,
                                  /*ignore_comments=*/true);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    return scenario_from_json(j);
}

}  // namespace dtcsim
