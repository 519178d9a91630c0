#pragma once

/**
 * @file path.hpp
 * @brief Piecewise-analytic reference paths: lines, circular arcs and
 *        linear-radius spirals, with closest-point projection.
 *
 * Curvature is signed: positive bends left (heading increases with arc
 * length). Segments are chained with continuous position and tangent (G1).
 * Arc length s is the global parameter, s = 0 at the path start.
 */

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "dtcsim/geometry.hpp"

namespace dtcsim {

enum class SegmentType { line, arc, spiral };

/// Config-facing description of one segment, curvature in 1/m.
struct SegmentSpec {
    SegmentType type = SegmentType::line;
    double length = 0.0;
    double kappa0 = 0.0;
    double kappa1 = 0.0;
};

struct PathPoint {
    Vec2 position;
    double heading = 0.0;    // unwrapped tangent heading, radians
    double curvature = 0.0;  // 1/m, signed
};

struct PathProjection {
    double s_star = 0.0;       // arc length of the closest point
    double e_signed = 0.0;     // lateral offset, > 0 left of the path
    double heading_ref = 0.0;  // tangent heading at s_star
    double curvature = 0.0;    // curvature at s_star
};

namespace detail {

// 10-point Gauss-Legendre rule on [-1, 1]; machine precision for the smooth
// heading integrands that arise on sub-meter spiral intervals.
inline constexpr std::array<double, 5> kGlNodes = {
    0.1488743389816312, 0.4333953941292472, 0.6794095682990244,
    0.8650633666889845, 0.9739065285171717};
inline constexpr std::array<double, 5> kGlWeights = {
    0.2955242247147529, 0.2692667193099963, 0.2190863625159820,
    0.1494513491505806, 0.0666713443086881};

}  // namespace detail

/// One chained piece of a reference path. Local parameter u in [0, length].
class PathSegment {
  public:
    PathSegment(SegmentType type, Vec2 start, double heading0, double length,
                double kappa0, double kappa1)
        : type_(type),
          start_(start),
          heading0_(heading0),
          length_(length),
          kappa0_(kappa0),
          kappa1_(kappa1) {
        if (!(length > 0.0)) {
            throw std::invalid_argument("segment length must be > 0");
        }
        if (type_ == SegmentType::spiral) {
            if (kappa0_ == 0.0 || kappa1_ == 0.0 || kappa0_ * kappa1_ < 0.0) {
                throw std::invalid_argument(
                    "spiral curvature must keep one sign (radius stays finite)");
            }
            r0_ = 1.0 / kappa0_;
            dr_ds_ = (1.0 / kappa1_ - r0_) / length_;
            build_knots();
        }
    }

    SegmentType type() const { return type_; }
    double length() const { return length_; }

    double heading_at(double u) const {
        switch (type_) {
            case SegmentType::line:
                return heading0_;
            case SegmentType::arc:
                return heading0_ + kappa0_ * u;
            case SegmentType::spiral:
                if (dr_ds_ == 0.0) {
                    return heading0_ + u / r0_;
                }
                // d(psi)/du = 1/(r0 + dr_ds*u), integrated in closed form.
                return heading0_ + std::log1p(dr_ds_ * u / r0_) / dr_ds_;
        }
        return heading0_;
    }

    double curvature_at(double u) const {
        switch (type_) {
            case SegmentType::line:
                return 0.0;
            case SegmentType::arc:
                return kappa0_;
            case SegmentType::spiral:
                return 1.0 / (r0_ + dr_ds_ * u);
        }
        return 0.0;
    }

    Vec2 position_at(double u) const {
        switch (type_) {
            case SegmentType::line:
                return start_ + u * heading_vector(heading0_);
            case SegmentType::arc: {
                const double h = heading0_ + kappa0_ * u;
                return start_ + Vec2{(std::sin(h) - std::sin(heading0_)) / kappa0_,
                                     (std::cos(heading0_) - std::cos(h)) / kappa0_};
            }
            case SegmentType::spiral: {
                const auto idx = static_cast<std::size_t>(u / kKnotSpacing);
                const std::size_t i = std::min(idx, knots_.size() - 1);
                return integrate_from(knots_[i], static_cast<double>(i) * kKnotSpacing, u);
            }
        }
        return start_;
    }

    PathPoint at(double u) const {
        return {position_at(u), heading_at(u), curvature_at(u)};
    }

  private:
    static constexpr double kKnotSpacing = 0.25;  // m, spiral position cache

    void build_knots() {
        const auto n = static_cast<std::size_t>(std::floor(length_ / kKnotSpacing)) + 1;
        knots_.reserve(n);
        knots_.push_back(start_);
        for (std::size_t i = 1; i < n; ++i) {
            const double u0 = static_cast<double>(i - 1) * kKnotSpacing;
            knots_.push_back(integrate_from(knots_.back(), u0, u0 + kKnotSpacing));
        }
    }

    Vec2 integrate_from(Vec2 base, double u0, double u1) const {
        const double half = 0.5 * (u1 - u0);
        const double mid = 0.5 * (u0 + u1);
        Vec2 acc{0.0, 0.0};
        for (std::size_t j = 0; j < detail::kGlNodes.size(); ++j) {
            const double d = half * detail::kGlNodes[j];
            acc += detail::kGlWeights[j] *
                   (heading_vector(heading_at(mid - d)) + heading_vector(heading_at(mid + d)));
        }
        return base + half * acc;
    }

    SegmentType type_;
    Vec2 start_;
    double heading0_;
    double length_;
    double kappa0_;
    double kappa1_;
    double r0_ = 0.0;     // signed start radius (spiral)
    double dr_ds_ = 0.0;  // linear radius slope (spiral)
    std::vector<Vec2> knots_;
};

/// G1-continuous chain of segments, parameterized by global arc length.
class ReferencePath {
  public:
    ReferencePath(Vec2 start, double heading0, const std::vector<SegmentSpec>& specs) {
        if (specs.empty()) {
            throw std::invalid_argument("path needs at least one segment");
        }
        Vec2 p = start;
        double h = heading0;
        double s = 0.0;
        for (const auto& spec : specs) {
            segments_.emplace_back(spec.type, p, h, spec.length, spec.kappa0, spec.kappa1);
            starts_.push_back(s);
            const auto& seg = segments_.back();
            p = seg.position_at(spec.length);
            h = seg.heading_at(spec.length);
            s += spec.length;
        }
        total_length_ = s;
    }

    double total_length() const { return total_length_; }
    std::size_t segment_count() const { return segments_.size(); }

    /// Pose of the path at arc length s in [0, total_length].
    PathPoint point_at(double s) const {
        constexpr double kEdgeTol = 1e-9;
        if (!(s >= -kEdgeTol && s <= total_length_ + kEdgeTol)) {
            throw std::out_of_range("arc length outside path");
        }
        s = std::clamp(s, 0.0, total_length_);
        const std::size_t i = locate(s);
        return segments_[i].at(s - starts_[i]);
    }

    /**
     * Closest point on the path near a hint.
     *
     * Newton iteration on the perpendicularity condition seeded from a coarse
     * scan of [s_hint - window_back, s_hint + window_fwd]; falls back to
     * golden-section search when Newton leaves its bracket. The result is the
     * local minimizer of the distance nearest the hint, to about 1e-9 m.
     */
    /// Closest point on the whole path: coarse global scan, then the local
    /// solver around the best cell. For the first call, before any hint exists.
    PathProjection project(const Vec2& p) const {
        constexpr double kGridStep = 0.25;
        const auto cells = static_cast<std::size_t>(std::ceil(total_length_ / kGridStep));
        const std::size_t n = std::max<std::size_t>(cells, 8) + 1;
        double best_s = 0.0;
        double best_d2 = (point_at(0.0).position - p).squared_norm();
        for (std::size_t i = 1; i < n; ++i) {
            const double s = total_length_ * static_cast<double>(i) / static_cast<double>(n - 1);
            const double d2 = (point_at(s).position - p).squared_norm();
            if (d2 < best_d2) {
                best_d2 = d2;
                best_s = s;
            }
        }
        return project(p, best_s);
    }

    PathProjection project(const Vec2& p, double s_hint, double window_back = 10.0,
                           double window_fwd = 10.0) const {
        const double hint = std::clamp(s_hint, 0.0, total_length_);
        const double lo = std::max(0.0, hint - window_back);
        const double hi = std::min(total_length_, hint + window_fwd);

        // Coarse scan; the grid only needs to isolate the right basin.
        constexpr double kGridStep = 0.25;
        const auto cells = static_cast<std::size_t>(std::ceil((hi - lo) / kGridStep));
        const std::size_t n = std::max<std::size_t>(cells, 8) + 1;
        double best_s = lo;
        double best_d2 = (point_at(lo).position - p).squared_norm();
        for (std::size_t i = 1; i < n; ++i) {
            const double s = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
            const double d2 = (point_at(s).position - p).squared_norm();
            if (d2 < best_d2) {
                best_d2 = d2;
                best_s = s;
            }
        }
        const double step = (hi - lo) / static_cast<double>(n - 1);
        double blo = std::max(lo, best_s - step);
        double bhi = std::min(hi, best_s + step);

        double s = best_s;
        bool converged = false;
        for (int it = 0; it < 50; ++it) {
            const PathPoint q = point_at(s);
            const Vec2 t = heading_vector(q.heading);
            const Vec2 d = q.position - p;
            const double g = dot(d, t);
            const double gp = 1.0 + q.curvature * cross(t, d);
            if (!(std::abs(gp) > 1e-12)) {
                break;
            }
            const double next = s - g / gp;
            if (next < blo - step || next > bhi + step) {
                break;  // escaping the basin; let golden section decide
            }
            const double moved = std::abs(next - s);
            s = std::clamp(next, lo, hi);
            if (moved < 1e-12 * std::max(1.0, total_length_)) {
                converged = true;
                break;
            }
        }
        if (!converged) {
            s = golden_section(p, blo, bhi);
        }
        return projection_at(p, s);
    }

    /**
     * Smallest arc length s >= s_from where the path is at Euclidean distance
     * `dist` from p, or nullopt when no such point exists up to the path end.
     */
    std::optional<double> first_point_at_distance(const Vec2& p, double dist,
                                                  double s_from) const {
        if (!(dist > 0.0)) {
            throw std::invalid_argument("distance must be > 0");
        }
        const double start = std::clamp(s_from, 0.0, total_length_);
        const double step = std::max(0.05, dist / 20.0);
        double s_prev = start;
        double f_prev = (point_at(s_prev).position - p).norm() - dist;
        if (f_prev == 0.0) {
            return s_prev;
        }
        while (s_prev < total_length_) {
            const double s_next = std::min(s_prev + step, total_length_);
            const double f_next = (point_at(s_next).position - p).norm() - dist;
            if (f_prev * f_next <= 0.0) {
                double a = s_prev;
                double b = s_next;
                double fa = f_prev;
                for (int i = 0; i < 80 && (b - a) > 1e-12; ++i) {
                    const double m = 0.5 * (a + b);
                    const double fm = (point_at(m).position - p).norm() - dist;
                    if (fa * fm <= 0.0) {
                        b = m;
                    } else {
                        a = m;
                        fa = fm;
                    }
                }
                return 0.5 * (a + b);
            }
            s_prev = s_next;
            f_prev = f_next;
        }
        return std::nullopt;
    }

  private:
    std::size_t locate(double s) const {
        const auto it = std::upper_bound(starts_.begin(), starts_.end(), s);
        const auto idx = static_cast<std::size_t>(std::distance(starts_.begin(), it));
        return std::min(idx == 0 ? 0 : idx - 1, segments_.size() - 1);
    }

    PathProjection projection_at(const Vec2& p, double s) const {
        const PathPoint q = point_at(s);
        const Vec2 t = heading_vector(q.heading);
        return {s, cross(t, p - q.position), q.heading, q.curvature};
    }

    double golden_section(const Vec2& p, double a, double b) const {
        constexpr double kInvPhi = 0.6180339887498949;
        double x1 = b - kInvPhi * (b - a);
        double x2 = a + kInvPhi * (b - a);
        double f1 = (point_at(x1).position - p).squared_norm();
        double f2 = (point_at(x2).position - p).squared_norm();
        while (b - a > 1e-10) {
            if (f1 < f2) {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - kInvPhi * (b - a);
                f1 = (point_at(x1).position - p).squared_norm();
            } else {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + kInvPhi * (b - a);
                f2 = (point_at(x2).position - p).squared_norm();
            }
        }
        return 0.5 * (a + b);
    }

    std::vector<PathSegment> segments_;
    std::vector<double> starts_;
    double total_length_ = 0.0;
};

}  // namespace dtcsim
