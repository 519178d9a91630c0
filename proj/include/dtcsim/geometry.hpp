#pragma once

/**
 * @file geometry.hpp
 * @brief Planar vectors, rotations and angle normalization helpers.
 *
 * Conventions used throughout the library: x forward, y to the left, angles in
 * radians measured counter-clockwise from +x. A positive lateral offset means
 * "left of" the reference direction.
 */

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dtcsim {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    constexpr Vec2() = default;
    constexpr Vec2(double x_, double y_) : x(x_), y(y_) {}

    constexpr Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    constexpr Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
    constexpr Vec2 operator-() const { return {-x, -y}; }
    Vec2& operator+=(const Vec2& o) {
        x += o.x;
        y += o.y;
        return *this;
    }
    Vec2& operator-=(const Vec2& o) {
        x -= o.x;
        y -= o.y;
        return *this;
    }

    double norm() const { return std::hypot(x, y); }
    constexpr double squared_norm() const { return x * x + y * y; }
};

constexpr Vec2 operator*(double s, const Vec2& v) { return v * s; }

constexpr double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }

/// z component of the 3-D cross product; > 0 when b points left of a.
constexpr double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }

inline void require_finite(double value, const char* what) {
    if (!std::isfinite(value)) {
        throw std::domain_error(std::string("non-finite ") + what);
    }
}

/// Normalizes an angle to [0, 2*pi).
inline double wrap_angle(double angle) {
    require_finite(angle, "angle");
    double r = std::fmod(angle, kTwoPi);
    if (r < 0.0) {
        r += kTwoPi;
    }
    if (r >= kTwoPi) {  // fmod rounding can land exactly on 2*pi
        r -= kTwoPi;
    }
    return r;
}

/// Normalizes an angle to (-pi, pi].
inline double wrap_signed(double angle) {
    require_finite(angle, "angle");
    double r = std::remainder(angle, kTwoPi);
    if (r <= -kPi) {
        r += kTwoPi;
    }
    return r;
}

/// Rotates v counter-clockwise by psi.
inline Vec2 rotate(double psi, const Vec2& v) {
    const double c = std::cos(psi);
    const double s = std::sin(psi);
    return {c * v.x - s * v.y, s * v.x + c * v.y};
}

/// Unit direction vector for a heading.
inline Vec2 heading_vector(double psi) { return {std::cos(psi), std::sin(psi)}; }

}  // namespace dtcsim
