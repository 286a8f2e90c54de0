#include <guidedplan/errors.hpp>
#include <guidedplan/vehicle.hpp>

#include <cmath>

namespace guidedplan
{

void VehicleParams::validate() const
{
    if (!(length > 0.0) || !(width > 0.0))
        throw PreconditionError("vehicle dimensions must be positive");
    if (!(wheel_base > 0.0) || wheel_base > length)
        throw PreconditionError("wheel base must lie in (0, length]");
    if (!(kappa_max > 0.0))
        throw PreconditionError("kappa_max must be positive");
    if (footprint_vertices < 4)
        throw PreconditionError("footprint needs at least 4 vertices");
    if (!(hard_buffer >= 0.0))
        throw PreconditionError("hard buffer must be non-negative");
}

Polygon body_footprint(const VehicleParams &vehicle)
{
    vehicle.validate();
    const double x_rear = -vehicle.rear_overhang();
    const double x_front = vehicle.length - vehicle.rear_overhang();
    const double half_w = 0.5 * vehicle.width;
    const double b = vehicle.hard_buffer;

    // Corners in CCW order, each followed by the start angle of its 90 degree arc.
    const Vec2 corners[4] = {{x_front, -half_w}, {x_front, half_w}, {x_rear, half_w}, {x_rear, -half_w}};
    const double start_angle[4] = {-0.5 * kPi, 0.0, 0.5 * kPi, kPi};

    const int n = vehicle.footprint_vertices;
    Polygon polygon;
    polygon.reserve(n);
    for (int c = 0; c < 4; ++c)
    {
        const int m = n / 4 + (c < n % 4 ? 1 : 0);
        const double step = 0.5 * kPi / m;
        const double r = b / std::cos(0.5 * step);
        for (int k = 0; k < m; ++k)
        {
            const double a = start_angle[c] + (k + 0.5) * step;
            polygon.push_back(corners[c] + r * unit(a));
        }
    }
    return polygon;
}

Polygon transform(const Polygon &body, const Pose &pose)
{
    Polygon out;
    out.reserve(body.size());
    for (const Vec2 &p : body)
        out.push_back(pose.apply(p));
    return out;
}

Polygon footprint(const VehicleParams &vehicle, const State &state)
{
    return transform(body_footprint(vehicle), state.pose);
}

double polygon_area(const Polygon &polygon)
{
    double twice = 0.0;
    for (std::size_t i = 0; i < polygon.size(); ++i)
        twice += cross(polygon[i], polygon[(i + 1) % polygon.size()]);
    return 0.5 * std::abs(twice);
}

} // namespace guidedplan
