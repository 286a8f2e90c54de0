#pragma once

#include <guidedplan/geometry.hpp>

#include <vector>

namespace guidedplan
{

using Polygon = std::vector<Vec2>;

/// Ego-vehicle geometry and curvature limits. Poses refer to the rear-axle center.
struct VehicleParams
{
    double length = 4.926;
    double width = 2.086;
    double wheel_base = 2.912;
    double kappa_max = 0.1982;
    double kappa_rate_max = 0.1868;
    int footprint_vertices = 20;
    double hard_buffer = 0.10;

    /// Throws PreconditionError on non-physical values.
    void validate() const;

    double rear_overhang() const { return 0.5 * (length - wheel_base); }
    double min_turning_radius() const { return 1.0 / kappa_max; }
    /// Distance from the rear axle to the rectangle center along the heading.
    double center_offset() const { return 0.5 * length - rear_overhang(); }
};

/// Convex footprint in the body frame (rear axle at the origin, heading +x), CCW.
///
/// The rectangle is grown by hard_buffer with rounded corners; each corner arc is
/// replaced by tangent edges so the polygon circumscribes the rounded rectangle.
Polygon body_footprint(const VehicleParams &vehicle);

/// Footprint posed at `state`.
Polygon footprint(const VehicleParams &vehicle, const State &state);

Polygon transform(const Polygon &body, const Pose &pose);
double polygon_area(const Polygon &polygon);

} // namespace guidedplan
