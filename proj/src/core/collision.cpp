#include <guidedplan/collision.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace guidedplan
{

namespace
{

// x-range of the convex polygon restricted to the closed strip y in [y0, y1].
bool strip_range(const Polygon &poly, double y0, double y1, double &x_lo, double &x_hi)
{
    x_lo = std::numeric_limits<double>::infinity();
    x_hi = -x_lo;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i)
    {
        const Vec2 a = poly[i];
        const Vec2 b = poly[(i + 1) % n];
        double t0 = 0.0;
        double t1 = 1.0;
        const double dy = b.y - a.y;
        if (dy == 0.0)
        {
            if (a.y < y0 || a.y > y1)
                continue;
        }
        else
        {
            double ta = (y0 - a.y) / dy;
            double tb = (y1 - a.y) / dy;
            if (ta > tb)
                std::swap(ta, tb);
            t0 = std::max(t0, ta);
            t1 = std::min(t1, tb);
            if (t0 > t1)
                continue;
        }
        const double xa = a.x + t0 * (b.x - a.x);
        const double xb = a.x + t1 * (b.x - a.x);
        x_lo = std::min({x_lo, xa, xb});
        x_hi = std::max({x_hi, xa, xb});
    }
    return x_lo <= x_hi;
}

} // namespace

bool polygon_collides(const Polygon &polygon, const CostMap &map)
{
    const GridGeometry &g = map.geometry();
    const double inv = 1.0 / g.resolution();
    Polygon local;
    local.reserve(polygon.size());
    double y_min = std::numeric_limits<double>::infinity();
    double y_max = -y_min;
    for (const Vec2 &p : polygon)
    {
        const Vec2 q = inv * g.to_local(p);
        local.push_back(q);
        y_min = std::min(y_min, q.y);
        y_max = std::max(y_max, q.y);
    }

    // Closed cells: row iy spans [iy, iy + 1], so touching rows are included.
    const int iy0 = static_cast<int>(std::ceil(y_min)) - 1;
    const int iy1 = static_cast<int>(std::floor(y_max));
    if (iy0 < 0 || iy1 >= g.height())
        return true;
    for (int iy = iy0; iy <= iy1; ++iy)
    {
        double x_lo = 0.0;
        double x_hi = 0.0;
        if (!strip_range(local, iy, iy + 1.0, x_lo, x_hi))
            continue;
        const int ix0 = static_cast<int>(std::ceil(x_lo)) - 1;
        const int ix1 = static_cast<int>(std::floor(x_hi));
        if (ix0 < 0 || ix1 >= g.width())
            return true;
        if (map.blocked_in_row(iy, ix0, ix1) > 0)
            return true;
    }
    return false;
}

bool collides(const State &state, const CostMap &map, const VehicleParams &vehicle)
{
    return polygon_collides(footprint(vehicle, state), map);
}

CollisionChecker::CollisionChecker(const CostMap &map, const VehicleParams &vehicle)
    : map_(&map), vehicle_(vehicle), body_(body_footprint(vehicle)), body_center_{vehicle.center_offset(), 0.0}
{
    for (const Vec2 &p : body_)
        bounding_radius_ = std::max(bounding_radius_, (p - body_center_).norm());
}

bool CollisionChecker::collides(const Pose &pose) const
{
    const Vec2 center = pose.apply(body_center_);
    const CellIndex c = map_->geometry().cell_of(center);
    if (!map_->geometry().contains(c) || map_->blocked(c))
        return true;
    // Every point of a blocked cell is at least clearance - res * sqrt(2) away from `center`.
    if (map_->clearance(c) - map_->resolution() * std::sqrt(2.0) > bounding_radius_)
        return false;
    return polygon_collides(transform(body_, pose), *map_);
}

} // namespace guidedplan
