#pragma once

/**
 * @file compensator.hpp
 * @brief Dead-time compensation for the kinematic single track built on a
 *        bounded queue of model states.
 *
 * The compensator runs the prediction model one step per control period and
 * keeps the last k+1 model poses in a queue. Two measures keep every stored
 * number bounded regardless of runtime:
 *
 *  - positions are re-based every update so the oldest entry is exactly the
 *    origin; the remaining entries are chords of at most k model steps, hence
 *    |p| <= v_max * k * dt;
 *  - stored headings are wrapped to [0, 2*pi); an unwrapped shadow accumulator
 *    is kept alongside so heading differences and the model increments never
 *    see a wrap seam.
 *
 * The prediction rotates the queued displacement into the measured frame:
 *
 *    y_hat = y_del + R(psi_del - psi_model_oldest) * p_queue_newest,
 *    psi_hat = psi_del + (psi_model_newest - psi_model_oldest).
 *
 * Only heading *differences* of the model enter the output, which is what
 * makes the scheme exact for a matched model under pure dead time: the model
 * replays the same steering sequence the plant saw, so its chord equals the
 * plant's chord up to the rigid rotation applied above, for any initial model
 * pose.
 */

#include <cmath>
#include <cstddef>
#include <deque>
#include <optional>
#include <stdexcept>

#include "dtcsim/geometry.hpp"
#include "dtcsim/vehicle_models.hpp"

namespace dtcsim {

/// Prediction-model increment for one control period (kinematic single track,
/// shared with the plant implementation so matched setups are bit-identical).
inline PoseIncrement prediction_model_increment(double psi, double delta, double v,
                                                double dt, double wheelbase) {
    return kinematic_increment(psi, delta, v, dt, wheelbase);
}

/// Queue of the last k+1 prediction-model poses, positions re-based so the
/// oldest entry sits at the origin.
class PredictorQueue {
  public:
    PredictorQueue(std::size_t k, double wheelbase, double initial_heading)
        : k_(k),
          wheelbase_(wheelbase),
          positions_(k + 1, Vec2{0.0, 0.0}),
          headings_(k + 1, wrap_angle(initial_heading)),
          shadow_(k + 1, initial_heading) {
        if (!(wheelbase > 0.0)) {
            throw std::invalid_argument("wheelbase must be > 0");
        }
        require_finite(initial_heading, "initial heading");
    }

    std::size_t horizon() const { return k_; }

    /// Advances the model by one period with the given command and re-bases
    /// the queue: append the new pose, drop the oldest, shift all positions so
    /// the (new) oldest is exactly [0, 0].
    void advance(double delta, double v, double dt) {
        const PoseIncrement inc =
            prediction_model_increment(shadow_.back(), delta, v, dt, wheelbase_);
        const double psi_new = shadow_.back() + inc.dpsi;
        positions_.push_back(positions_.back() + inc.dp);
        shadow_.push_back(psi_new);
        headings_.push_back(wrap_angle(psi_new));
        positions_.pop_front();
        shadow_.pop_front();
        headings_.pop_front();

        const Vec2 origin = positions_.front();
        for (Vec2& p : positions_) {
            p -= origin;  // front becomes exactly (0, 0)
        }
    }

    /// Predicts the delay-free pose from the delayed measurement.
    VehicleState predict(const VehicleState& y_del) const {
        const double rotation = y_del.psi - shadow_.front();
        return {y_del.p + rotate(rotation, positions_.back()),
                y_del.psi + (shadow_.back() - shadow_.front())};
    }

    const std::deque<Vec2>& shifted_positions() const { return positions_; }
    const std::deque<double>& headings() const { return headings_; }  // wrapped
    Vec2 newest_shifted_position() const { return positions_.back(); }

  private:
    std::size_t k_;
    double wheelbase_;
    std::deque<Vec2> positions_;
    std::deque<double> headings_;  // wrapped to [0, 2*pi)
    std::deque<double> shadow_;    // unwrapped accumulator
};

struct CompensatorConfig {
    bool enabled = false;
    std::size_t horizon_steps = 0;  // k = dead time / dt
    double wheelbase = 1.0;         // prediction-model wheelbase
    // Optional explicit initial model pose (diagnostic path start and initial
    // queue heading); defaults to the first delayed measurement.
    std::optional<VehicleState> initial_model_pose;
};

/**
 * Per-loop compensator facade. Call tick() once per control period, at the
 * top of the loop, passing the steering command applied over the preceding
 * period; the first call only predicts since no command interval has elapsed
 * yet. Until the first measurement arrives the queue assumes the vehicle was
 * at rest, so predictions during the first k periods use however much real
 * motion has occurred.
 *
 * Disabled (or k = 0) configurations return the measurement unchanged and
 * leave no state behind.
 */
class DeadTimeCompensator {
  public:
    explicit DeadTimeCompensator(const CompensatorConfig& config) : config_(config) {}

    VehicleState tick(const VehicleState& y_del, double prev_delta_cmd, double v, double dt) {
        if (!config_.enabled || config_.horizon_steps == 0) {
            return y_del;
        }
        if (!queue_) {
            const VehicleState init = config_.initial_model_pose.value_or(y_del);
            queue_.emplace(config_.horizon_steps, config_.wheelbase, init.psi);
            model_pose_ = init;
            return queue_->predict(y_del);
        }
        queue_->advance(prev_delta_cmd, v, dt);
        const PoseIncrement inc = prediction_model_increment(model_pose_.psi, prev_delta_cmd,
                                                             v, dt, config_.wheelbase);
        model_pose_ = {model_pose_.p + inc.dp, model_pose_.psi + inc.dpsi};
        return queue_->predict(y_del);
    }

    bool active() const { return queue_.has_value(); }
    const PredictorQueue* queue() const { return queue_ ? &*queue_ : nullptr; }

    /// Absolute prediction-model pose (diagnostic only; predictions use the
    /// bounded queue, never this accumulator).
    const VehicleState& model_pose() const { return model_pose_; }

  private:
    CompensatorConfig config_;
    std::optional<PredictorQueue> queue_;
    VehicleState model_pose_{};
};

}  // namespace dtcsim
