#include <guidedplan/costmap.hpp>
#include <guidedplan/errors.hpp>

#include <algorithm>
#include <cmath>

namespace guidedplan
{

CostMap inflate(const OccupancyGrid &grid, double radius, bool unknown_is_obstacle, double cost_peak)
{
    if (!(radius >= 0.0))
        throw PreconditionError("inflation radius must be non-negative");
    if (!(cost_peak > 0.0))
        throw PreconditionError("cost peak must be positive");

    const GridGeometry &g = grid.geometry();
    const int w = g.width();
    const int h = g.height();
    const std::size_t n = g.cell_count();
    const double res = g.resolution();

    CostMap map;
    map.geometry_ = g;
    map.cost_peak_ = cost_peak;
    map.radius_ = radius;
    map.lethal_.assign(n, 0);
    map.blocked_.assign(n, 0);

    std::vector<std::uint8_t> sources(n, 0);
    for (std::size_t i = 0; i < n; ++i)
    {
        const CellState s = grid.cells()[i];
        map.lethal_[i] = s == CellState::Occupied;
        map.blocked_[i] = s != CellState::Free;
        sources[i] = s == CellState::Occupied || (unknown_is_obstacle && s == CellState::Unknown);
    }

    const DistanceField field = distance_transform(sources, w, h);
    map.cost_.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
    {
        const double d = std::sqrt(field.squared[i]) * res;
        if (radius > 0.0)
            map.cost_[i] = cost_peak * std::clamp(1.0 - d / radius, 0.0, 1.0);
        else
            map.cost_[i] = d == 0.0 ? cost_peak : 0.0;
    }

    map.row_prefix_.assign(static_cast<std::size_t>(h) * (w + 1), 0);
    for (int y = 0; y < h; ++y)
    {
        int *prefix = &map.row_prefix_[static_cast<std::size_t>(y) * (w + 1)];
        for (int x = 0; x < w; ++x)
            prefix[x + 1] = prefix[x] + map.blocked_[static_cast<std::size_t>(y) * w + x];
    }

    // Clearance on a grid padded by one ring of blocked cells standing in for the outside.
    const int pw = w + 2;
    const int ph = h + 2;
    std::vector<std::uint8_t> padded(static_cast<std::size_t>(pw) * ph, 1);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            padded[static_cast<std::size_t>(y + 1) * pw + x + 1] = map.blocked_[static_cast<std::size_t>(y) * w + x];
    const DistanceField clear = distance_transform(padded, pw, ph);
    map.clearance_.assign(n, 0.0f);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            map.clearance_[static_cast<std::size_t>(y) * w + x] =
                static_cast<float>(std::sqrt(clear.squared[static_cast<std::size_t>(y + 1) * pw + x + 1]) * res);
    return map;
}

double CostMap::cost_at(Vec2 world) const
{
    const CellIndex c = geometry_.cell_of(world);
    return geometry_.contains(c) ? cost(c) : cost_peak_;
}

double CostMap::clearance(CellIndex c) const { return geometry_.contains(c) ? clearance_[geometry_.index(c)] : 0.0; }

double CostMap::clearance_at(Vec2 world) const { return clearance(geometry_.cell_of(world)); }

int CostMap::blocked_in_row(int iy, int ix0, int ix1) const
{
    if (iy < 0 || iy >= geometry_.height())
        return 0;
    ix0 = std::max(ix0, 0);
    ix1 = std::min(ix1, geometry_.width() - 1);
    if (ix1 < ix0)
        return 0;
    const int *prefix = &row_prefix_[static_cast<std::size_t>(iy) * (geometry_.width() + 1)];
    return prefix[ix1 + 1] - prefix[ix0];
}

} // namespace guidedplan
