#pragma once

/**
 * @file controllers.hpp
 * @brief Lateral path-tracking controllers: Stanley, pure pursuit and a
 *        Dubins-based robust (switching) law.
 *
 * All controllers consume the (possibly compensated) vehicle pose plus the
 * current speed and emit a steering angle; saturation to the plant's steering
 * limit is the caller's job. Each instance threads its own arc-length hint so
 * projections stay on the expected branch of the path.
 */

#include <algorithm>
#include <cmath>
#include <memory>
#include <optional>
#include <stdexcept>

#include "dtcsim/geometry.hpp"
#include "dtcsim/path.hpp"
#include "dtcsim/vehicle_models.hpp"

namespace dtcsim {

struct ControlDecision {
    double delta = 0.0;             // steering command, rad (unsaturated)
    double s_star = 0.0;            // projection arc length used
    double e = 0.0;                 // signed error seen by the controller
    bool endpoint_fallback = false; // pure pursuit ran out of path
};

class LateralController {
  public:
    virtual ~LateralController() = default;

    virtual ControlDecision control(const VehicleState& pose, double v,
                                    const ReferencePath& path) = 0;

    void reset_hint(double s) { s_hint_ = s; }

  protected:
    /// Windowed tracking projection; falls back to a whole-path search until
    /// the first result seeds the hint.
    PathProjection track_projection(const ReferencePath& path, const Vec2& p) {
        const PathProjection proj = s_hint_ ? path.project(p, *s_hint_) : path.project(p);
        s_hint_ = proj.s_star;
        return proj;
    }

    std::optional<double> s_hint_;
};

struct StanleyParams {
    double gain = 3.0;       // 1/s
    double wheelbase = 1.0;  // m, projects the front axle
};

/**
 * Stanley front-axle law: heading alignment plus arctan cross-track term,
 * delta = (phi_ref - phi) - arctan(k * e_front / v).
 *
 * e_front > 0 (front axle left of the path) steers right, toward the path.
 * Requires v > 0.
 */
class StanleyController final : public LateralController {
  public:
    explicit StanleyController(const StanleyParams& params) : params_(params) {
        if (!(params.gain > 0.0) || !(params.wheelbase > 0.0)) {
            throw std::invalid_argument("stanley parameters must be > 0");
        }
    }

    ControlDecision control(const VehicleState& pose, double v,
                            const ReferencePath& path) override {
        if (!(v > 0.0)) {
            throw std::domain_error("stanley law requires v > 0");
        }
        const Vec2 front = pose.p + params_.wheelbase * heading_vector(pose.psi);
        const PathProjection proj = track_projection(path, front);
        const double heading_error = wrap_signed(pose.psi - proj.heading_ref);
        const double delta = -heading_error - std::atan(params_.gain * proj.e_signed / v);
        return {delta, proj.s_star, proj.e_signed, false};
    }

  private:
    StanleyParams params_;
};

struct PurePursuitParams {
    double lookahead = 1.45;  // m, Euclidean distance from the rear axle
    double wheelbase = 1.0;   // m
};

/**
 * Pure pursuit: steers onto the circle through the rear axle and the first
 * path point at the lookahead distance, delta = arctan(2 l e_pp / l_h^2) with
 * e_pp the goal's lateral offset in the vehicle frame.
 *
 * When no path point ahead of the hint lies at the lookahead distance (path
 * exhausted or vehicle too far away) the path endpoint is used and the
 * decision is flagged.
 */
class PurePursuitController final : public LateralController {
  public:
    explicit PurePursuitController(const PurePursuitParams& params) : params_(params) {
        if (!(params.lookahead > 0.0) || !(params.wheelbase > 0.0)) {
            throw std::invalid_argument("pure pursuit parameters must be > 0");
        }
    }

    ControlDecision control(const VehicleState& pose, double v,
                            const ReferencePath& path) override {
        (void)v;
        const PathProjection proj = track_projection(path, pose.p);

        // Goal: the path point one lookahead radius ahead; when the vehicle is
        // farther off the path than the radius no such point exists, so chase
        // an arc-length carrot ahead of the projection instead. Only a carrot
        // clamped at the path end counts as running out of path.
        const auto goal_s = path.first_point_at_distance(pose.p, params_.lookahead, proj.s_star);
        const double carrot_s = proj.s_star + params_.lookahead;
        const bool fallback = !goal_s.has_value() && carrot_s >= path.total_length();
        const double goal_arc = goal_s ? *goal_s : std::min(carrot_s, path.total_length());

        // Circular-arc law through the goal; the chord equals the lookahead
        // radius whenever the Euclidean goal exists.
        const Vec2 rel = rotate(-pose.psi, path.point_at(goal_arc).position - pose.p);
        const double chord_sq = std::max(rel.squared_norm(), 1e-12);
        const double delta = std::atan(2.0 * params_.wheelbase * rel.y / chord_sq);
        return {delta, proj.s_star, proj.e_signed, fallback};
    }

  private:
    PurePursuitParams params_;
};

struct DubinsRobustParams {
    double delta_bar = 0.25 * kPi;  // rad, bang-bang steering magnitude
    double k_rob = 0.5;             // (0, 1], shrinks the assumed turn authority
    double boundary_layer = 0.05;   // m, linearization width around sigma = 0
    double wheelbase = 1.0;         // m
};

/**
 * Dubins-based robust switching law. The switching function compares the
 * heading error against the angle still available on a merge arc of radius
 * r_eff = (l / tan(delta_bar)) / k_rob:
 *
 *   sigma = (phi_ref - phi) - sign(e) * acos(1 - min(|e|, 2 r_eff) / r_eff)
 *   delta = delta_bar * clamp(sigma / sigma_bl, -1, 1)
 *
 * k_rob < 1 inflates the assumed radius, so switching happens early and the
 * path is reached without overshoot under model error. The boundary layer
 * (given in meters of aligned cross-track error, converted to sigma units)
 * removes chattering on the path.
 */
class DubinsRobustController final : public LateralController {
  public:
    explicit DubinsRobustController(const DubinsRobustParams& params) : params_(params) {
        if (!(params.delta_bar > 0.0) || params.delta_bar >= 0.5 * kPi) {
            throw std::invalid_argument("delta_bar must be in (0, pi/2)");
        }
        if (!(params.k_rob > 0.0) || params.k_rob > 1.0) {
            throw std::invalid_argument("k_rob must be in (0, 1]");
        }
        if (!(params.boundary_layer > 0.0) || !(params.wheelbase > 0.0)) {
            throw std::invalid_argument("boundary layer and wheelbase must be > 0");
        }
        r_eff_ = (params.wheelbase / std::tan(params.delta_bar)) / params.k_rob;
        sigma_bl_ = merge_angle(params.boundary_layer);
    }

    ControlDecision control(const VehicleState& pose, double v,
                            const ReferencePath& path) override {
        (void)v;
        const PathProjection proj = track_projection(path, pose.p);
        const double heading_error = wrap_signed(pose.psi - proj.heading_ref);
        const double e = proj.e_signed;
        const double sign_e = (e > 0.0) - (e < 0.0);
        const double sigma = -heading_error - sign_e * merge_angle(std::abs(e));
        const double delta = params_.delta_bar * std::clamp(sigma / sigma_bl_, -1.0, 1.0);
        return {delta, proj.s_star, e, false};
    }

    double effective_radius() const { return r_eff_; }

  private:
    /// Heading change left on a merge arc that still has `dist` of lateral
    /// travel to cover; saturates at pi once dist >= 2 r_eff.
    double merge_angle(double dist) const {
        const double ratio = 1.0 - std::min(dist, 2.0 * r_eff_) / r_eff_;
        return std::acos(std::clamp(ratio, -1.0, 1.0));
    }

    DubinsRobustParams params_;
    double r_eff_;
    double sigma_bl_;
};

}  // namespace dtcsim
