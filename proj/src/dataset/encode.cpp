#include <guidedplan/dataset.hpp>
#include <guidedplan/errors.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace guidedplan
{

std::vector<std::pair<std::size_t, std::size_t>> rasterize_polyline(std::span<const Vec2> points,
                                                                    const GridGeometry &window)
{
    std::vector<std::pair<std::size_t, std::size_t>> out;
    if (points.empty())
        return out;
    const double inv = 1.0 / window.resolution();
    auto emit = [&](int ix, int iy, std::size_t seg) {
        const CellIndex c{ix, iy};
        if (!window.contains(c))
            return;
        const std::size_t index = window.index(c);
        if (!out.empty() && out.back().first == index)
        {
            out.back().second = seg;
            return;
        }
        out.emplace_back(index, seg);
    };

    if (points.size() == 1)
    {
        const Vec2 q = inv * window.to_local(points[0]);
        emit(static_cast<int>(std::floor(q.x)), static_cast<int>(std::floor(q.y)), 0);
        return out;
    }

    constexpr double kInf = std::numeric_limits<double>::infinity();
    for (std::size_t seg = 0; seg + 1 < points.size(); ++seg)
    {
        const Vec2 a = inv * window.to_local(points[seg]);
        const Vec2 b = inv * window.to_local(points[seg + 1]);
        int ix = static_cast<int>(std::floor(a.x));
        int iy = static_cast<int>(std::floor(a.y));
        const double dx = b.x - a.x;
        const double dy = b.y - a.y;
        const int sx = dx > 0.0 ? 1 : -1;
        const int sy = dy > 0.0 ? 1 : -1;
        const double t_dx = dx != 0.0 ? 1.0 / std::abs(dx) : kInf;
        const double t_dy = dy != 0.0 ? 1.0 / std::abs(dy) : kInf;
        double t_x = dx > 0.0 ? (ix + 1 - a.x) / dx : dx < 0.0 ? (a.x - ix) / -dx : kInf;
        double t_y = dy > 0.0 ? (iy + 1 - a.y) / dy : dy < 0.0 ? (a.y - iy) / -dy : kInf;
        emit(ix, iy, seg);
        const int max_steps = static_cast<int>(std::abs(dx) + std::abs(dy)) + 4;
        for (int step = 0; step < max_steps; ++step)
        {
            const double t = std::min(t_x, t_y);
            if (t >= 1.0)
                break;
            if (std::abs(t_x - t_y) <= 1e-9 * std::max(1.0, t))
            {
                // Exact corner crossing: move diagonally.
                ix += sx;
                iy += sy;
                t_x += t_dx;
                t_y += t_dy;
            }
            else if (t_x < t_y)
            {
                ix += sx;
                t_x += t_dx;
            }
            else
            {
                iy += sy;
                t_y += t_dy;
            }
            emit(ix, iy, seg);
        }
    }
    return out;
}

std::vector<std::uint8_t> pool_grid(const OccupancyGrid &grid, const GridGeometry &window)
{
    const GridGeometry &g = grid.geometry();
    const double inv = 1.0 / g.resolution();
    const double wr = window.resolution();
    std::vector<std::uint8_t> out(window.cell_count(), 0);
    for (int wy = 0; wy < window.height(); ++wy)
    {
        for (int wx = 0; wx < window.width(); ++wx)
        {
            double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
            for (Vec2 corner : {Vec2{wx * wr, wy * wr}, Vec2{(wx + 1) * wr, wy * wr}, Vec2{wx * wr, (wy + 1) * wr},
                                Vec2{(wx + 1) * wr, (wy + 1) * wr}})
            {
                const Vec2 q = inv * g.to_local(window.to_world(corner));
                x0 = std::min(x0, q.x);
                x1 = std::max(x1, q.x);
                y0 = std::min(y0, q.y);
                y1 = std::max(y1, q.y);
            }
            const int ix0 = static_cast<int>(std::floor(x0 + 1e-9));
            const int ix1 = static_cast<int>(std::ceil(x1 - 1e-9)) - 1;
            const int iy0 = static_cast<int>(std::floor(y0 + 1e-9));
            const int iy1 = static_cast<int>(std::ceil(y1 - 1e-9)) - 1;
            std::uint8_t flags = 0;
            for (int iy = iy0; iy <= iy1; ++iy)
                for (int ix = ix0; ix <= ix1; ++ix)
                {
                    const CellState s = grid.at_or_unknown({ix, iy});
                    if (s == CellState::Occupied)
                        flags |= kPoolOccupied;
                    else if (s == CellState::Unknown)
                        flags |= kPoolUnknown;
                }
            out[window.index({wx, wy})] = flags;
        }
    }
    return out;
}

void draw_marker(std::vector<float> &plane, const GridGeometry &window, const State &state)
{
    const CellIndex c = window.cell_of(state.pose.position());
    const float speed = static_cast<float>(std::clamp(state.v / kMarkerVmax, -1.0, 1.0));
    const Vec2 dir = unit(state.pose.theta() - window.origin().theta());

    int best_dx = 3;
    int best_dy = 0;
    double best_dot = -std::numeric_limits<double>::infinity();
    for (int dy = -3; dy <= 3; ++dy)
        for (int dx = -3; dx <= 3; ++dx)
        {
            if (std::max(std::abs(dx), std::abs(dy)) != 3)
                continue;
            const double d = dot(dir, (1.0 / std::hypot(dx, dy)) * Vec2{double(dx), double(dy)});
            if (d > best_dot + 1e-12)
            {
                best_dot = d;
                best_dx = dx;
                best_dy = dy;
            }
        }

    for (int dy = -3; dy <= 3; ++dy)
        for (int dx = -3; dx <= 3; ++dx)
        {
            const CellIndex m{c.ix + dx, c.iy + dy};
            if (!window.contains(m))
                continue;
            float value = speed;
            if (std::max(std::abs(dx), std::abs(dy)) == 3)
                value = (dx == best_dx && dy == best_dy) ? 1.0f : 0.5f;
            plane[window.index(m)] = value;
        }
}

namespace
{

std::vector<Vec2> positions(const Trajectory &traj)
{
    std::vector<Vec2> out;
    out.reserve(traj.size());
    for (const State &s : traj.states())
        out.push_back(s.pose.position());
    return out;
}

} // namespace

InputPlanes encode_inputs(const OccupancyGrid &observed, const Trajectory &past, const State &current,
                          const State &goal, const GridGeometry &window)
{
    InputPlanes in;
    in.window = window;
    for (auto &plane : in.planes)
        plane.assign(window.cell_count(), 0.0f);

    const std::vector<std::uint8_t> pooled = pool_grid(observed, window);
    for (std::size_t i = 0; i < pooled.size(); ++i)
    {
        in.planes[0][i] = (pooled[i] & kPoolOccupied) ? 1.0f : 0.0f;
        in.planes[1][i] = (pooled[i] & kPoolUnknown) ? 1.0f : 0.0f;
    }
    const std::vector<Vec2> pts = positions(past);
    for (const auto &[cell, seg] : rasterize_polyline(pts, window))
        in.planes[2][cell] = 1.0f;
    draw_marker(in.planes[3], window, current);
    draw_marker(in.planes[4], window, goal);
    return in;
}

InputPlanes encode_inputs(const Scenario &scenario, const Trajectory &past, const GridGeometry &window)
{
    const State current = past.empty() ? scenario.start : past.states().back();
    return encode_inputs(scenario.grid, past, current, scenario.goal, window);
}

PredictionGrids encode_labels(const Trajectory &future, const GridGeometry &window)
{
    if (future.empty())
        throw PreconditionError("encode_labels: empty trajectory");
    PredictionGrids labels(window);
    const std::vector<Vec2> pts = positions(future);
    for (const auto &[cell, seg] : rasterize_polyline(pts, window))
    {
        const double heading = future.states()[seg].pose.theta() - window.origin().theta();
        labels.p_path[cell] = 1.0f;
        labels.sin_theta[cell] = static_cast<float>(std::sin(heading));
        labels.cos_theta[cell] = static_cast<float>(std::cos(heading));
    }
    return labels;
}

PredictionGrids paint_oracle(const Trajectory &traj, const GridGeometry &window, double blur_cells)
{
    if (!(blur_cells >= 0.0))
        throw PreconditionError("paint_oracle: blur must be non-negative");
    const PredictionGrids labels = encode_labels(traj, window);
    std::vector<std::uint8_t> sources(window.cell_count(), 0);
    for (std::size_t i = 0; i < sources.size(); ++i)
        sources[i] = labels.p_path[i] > 0.0f;
    const DistanceField field = distance_transform(sources, window.width(), window.height());

    PredictionGrids out(window);
    for (std::size_t i = 0; i < sources.size(); ++i)
    {
        const double d = std::sqrt(field.squared[i]);
        const double p = std::max(0.0, 1.0 - d / (blur_cells + 1.0));
        if (!(p > 0.0))
            continue;
        const int src = field.nearest[i];
        out.p_path[i] = static_cast<float>(p);
        out.sin_theta[i] = labels.sin_theta[src];
        out.cos_theta[i] = labels.cos_theta[src];
    }
    return out;
}

} // namespace guidedplan
