#pragma once

#include <guidedplan/costmap.hpp>
#include <guidedplan/vehicle.hpp>

namespace guidedplan
{

/// True iff the convex polygon (world frame) overlaps a blocked cell square or
/// leaves the grid. Touching counts as overlap.
bool polygon_collides(const Polygon &polygon, const CostMap &map);

/// Footprint-vs-map predicate.
bool collides(const State &state, const CostMap &map, const VehicleParams &vehicle);

/// Reusable checker that caches the body footprint and its bounding circle.
///
/// A clearance lookup accepts most states without rasterizing; the remaining
/// ones go through the exact scanline test of polygon_collides.
class CollisionChecker
{
  public:
    CollisionChecker(const CostMap &map, const VehicleParams &vehicle);

    bool collides(const Pose &pose) const;
    bool collides(const State &state) const { return collides(state.pose); }

    const CostMap &map() const { return *map_; }
    const VehicleParams &vehicle() const { return vehicle_; }

  private:
    const CostMap *map_;
    VehicleParams vehicle_;
    Polygon body_;
    Vec2 body_center_;
    double bounding_radius_ = 0.0;
};

} // namespace guidedplan
