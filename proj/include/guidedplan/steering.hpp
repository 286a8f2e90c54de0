#pragma once

#include <guidedplan/geometry.hpp>
#include <guidedplan/vehicle.hpp>

#include <string_view>
#include <vector>

namespace guidedplan
{

enum class SteeringFamily
{
    Dubins,
    ReedsShepp,
};

/// Accepts "dubins" and "reeds_shepp" (also "rs"); throws ConfigError otherwise.
SteeringFamily parse_steering_family(std::string_view name);
std::string_view to_string(SteeringFamily family);

enum class SegmentType
{
    Left,
    Right,
    Straight,
};

/// Constant-curvature piece. kappa is signed (+ left, - right, 0 straight);
/// a negative signed_length drives the piece in reverse.
struct Segment
{
    SegmentType type = SegmentType::Straight;
    double signed_length = 0.0;
    double kappa = 0.0;
};

/// Pose reached after driving `s` meters (signed) along a constant-curvature arc.
Pose advance(const Pose &pose, double kappa, double s);

class SteeringPath
{
  public:
    SteeringPath() = default;
    SteeringPath(Pose start, Pose end, SteeringFamily family, std::vector<Segment> segments);

    const Pose &start() const { return start_; }
    const Pose &end() const { return end_; }
    SteeringFamily family() const { return family_; }
    const std::vector<Segment> &segments() const { return segments_; }

    /// Total unsigned length.
    double length() const { return length_; }
    /// Sign changes between consecutive segment lengths.
    int cusps() const;
    /// Endpoint obtained by integrating the segments forward from start().
    Pose integrated_end() const;
    /// State at arc length s in [0, length()]; carries the containing segment's kappa and direction.
    State state_at(double s) const;

  private:
    Pose start_;
    Pose end_;
    SteeringFamily family_ = SteeringFamily::Dubins;
    std::vector<Segment> segments_;
    double length_ = 0.0;
};

/// Shortest forward-only path over the six Dubins words. Ties go to the earlier
/// word in the order LSL, RSR, LSR, RSL, LRL, RLR.
SteeringPath dubins_shortest(const Pose &q0, const Pose &q1, double kappa_max);

/// Shortest path over the Reeds-Shepp word families (total unsigned length).
SteeringPath reeds_shepp_shortest(const Pose &q0, const Pose &q1, double kappa_max);

/// States at arc-length multiples of `step`, plus the end state when the length
/// is not a multiple. Speeds are unit with the segment's sign.
std::vector<State> discretize(const SteeringPath &path, double step = 0.1);

SteeringPath steer(const Pose &q0, const Pose &q1, SteeringFamily family, const VehicleParams &vehicle);

/// Length of the path steer() would return.
double steering_distance(const Pose &q0, const Pose &q1, SteeringFamily family, double kappa_max);

} // namespace guidedplan
