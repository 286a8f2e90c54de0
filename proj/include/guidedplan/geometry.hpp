#pragma once

#include <cmath>
#include <numbers>

namespace guidedplan
{

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Wraps an angle to (-pi, pi].
double normalize_angle(double angle);

/// Wraps an angle to [0, 2 pi).
double wrap_two_pi(double angle);

/// Unsigned angular distance in [0, pi].
inline double angle_distance(double a, double b) { return std::abs(normalize_angle(a - b)); }

struct Vec2
{
    double x = 0.0;
    double y = 0.0;

    friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
    friend Vec2 operator*(Vec2 a, double s) { return {s * a.x, s * a.y}; }
    friend bool operator==(Vec2 a, Vec2 b) = default;

    double norm() const { return std::hypot(x, y); }
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline Vec2 unit(double angle) { return {std::cos(angle), std::sin(angle)}; }
inline Vec2 rotate(Vec2 v, double angle)
{
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    return {c * v.x - s * v.y, s * v.x + c * v.y};
}

/// Planar rigid pose. The heading is kept in (-pi, pi] at all times.
class Pose
{
  public:
    Pose() = default;
    Pose(double x, double y, double theta) : x_(x), y_(y), theta_(normalize_angle(theta)) {}
    Pose(Vec2 position, double theta) : Pose(position.x, position.y, theta) {}

    double x() const { return x_; }
    double y() const { return y_; }
    double theta() const { return theta_; }
    Vec2 position() const { return {x_, y_}; }
    Vec2 heading() const { return unit(theta_); }

    /// Interprets this pose as expressed in `frame` and returns it in the parent frame.
    Pose in_frame(const Pose &frame) const;
    /// Expresses this (parent-frame) pose relative to `frame`.
    Pose relative_to(const Pose &frame) const;
    /// Maps a point given in this pose's local frame to the parent frame.
    Vec2 apply(Vec2 local) const;
    /// Inverse of `apply`.
    Vec2 apply_inverse(Vec2 world) const;

    friend bool operator==(const Pose &, const Pose &) = default;

  private:
    double x_ = 0.0;
    double y_ = 0.0;
    double theta_ = 0.0;
};

/// Vehicle state: pose plus curvature and signed speed.
struct State
{
    Pose pose;
    double kappa = 0.0;
    double v = 0.0;

    friend bool operator==(const State &, const State &) = default;
};

} // namespace guidedplan
