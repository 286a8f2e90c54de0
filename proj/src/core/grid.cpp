#include <guidedplan/errors.hpp>
#include <guidedplan/grid.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace guidedplan
{

GridGeometry::GridGeometry(int width, int height, double resolution, Pose origin)
    : width_(width), height_(height), resolution_(static_cast<float>(resolution)), origin_(origin)
{
    if (width <= 0 || height <= 0)
        throw PreconditionError("grid dimensions must be positive");
    if (!(resolution_ > 0.0) || !std::isfinite(resolution_))
        throw PreconditionError("grid resolution must be positive");
}

GridGeometry GridGeometry::default_world() { return centered({0.0, 0.0}, 60.0, 600); }

GridGeometry GridGeometry::centered(Vec2 center, double size, int cells, double theta)
{
    const double res = static_cast<float>(size / cells);
    const double half = 0.5 * res * cells;
    const Vec2 corner = center - rotate({half, half}, theta);
    return {cells, cells, res, Pose(corner, theta)};
}

CellIndex GridGeometry::cell_of_local(Vec2 local) const
{
    return {static_cast<int>(std::floor(local.x / resolution_)), static_cast<int>(std::floor(local.y / resolution_))};
}

CellIndex GridGeometry::cell_of(Vec2 world) const { return cell_of_local(to_local(world)); }

Vec2 GridGeometry::center_of(CellIndex c) const
{
    return to_world({(c.ix + 0.5) * resolution_, (c.iy + 0.5) * resolution_});
}

Extent GridGeometry::extent() const
{
    const double w = width_ * resolution_;
    const double h = height_ * resolution_;
    Extent e{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
             std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (Vec2 local : {Vec2{0.0, 0.0}, Vec2{w, 0.0}, Vec2{w, h}, Vec2{0.0, h}})
    {
        const Vec2 p = to_world(local);
        e.x_min = std::min(e.x_min, p.x);
        e.x_max = std::max(e.x_max, p.x);
        e.y_min = std::min(e.y_min, p.y);
        e.y_max = std::max(e.y_max, p.y);
    }
    return e;
}

OccupancyGrid::OccupancyGrid(GridGeometry geometry, CellState fill)
    : geometry_(geometry), cells_(geometry.cell_count(), fill)
{
}

void OccupancyGrid::fill_polygon(const Polygon &polygon, CellState s)
{
    if (polygon.size() < 3)
        return;
    const double res = geometry_.resolution();
    Polygon local;
    local.reserve(polygon.size());
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    for (const Vec2 &p : polygon)
    {
        const Vec2 q = (1.0 / res) * geometry_.to_local(p);
        local.push_back(q);
        x0 = std::min(x0, q.x);
        x1 = std::max(x1, q.x);
        y0 = std::min(y0, q.y);
        y1 = std::max(y1, q.y);
    }
    double orientation = 0.0;
    for (std::size_t i = 0; i < local.size(); ++i)
        orientation += cross(local[i], local[(i + 1) % local.size()]);
    const double sign = orientation >= 0.0 ? 1.0 : -1.0;

    const int ix0 = std::max(0, static_cast<int>(std::floor(x0 - 0.5)));
    const int ix1 = std::min(width() - 1, static_cast<int>(std::ceil(x1 - 0.5)));
    const int iy0 = std::max(0, static_cast<int>(std::floor(y0 - 0.5)));
    const int iy1 = std::min(height() - 1, static_cast<int>(std::ceil(y1 - 0.5)));
    for (int iy = iy0; iy <= iy1; ++iy)
    {
        for (int ix = ix0; ix <= ix1; ++ix)
        {
            const Vec2 c{ix + 0.5, iy + 0.5};
            bool inside = true;
            for (std::size_t i = 0; i < local.size() && inside; ++i)
            {
                const Vec2 a = local[i];
                const Vec2 b = local[(i + 1) % local.size()];
                inside = sign * cross(b - a, c - a) >= 0.0;
            }
            if (inside)
                set({ix, iy}, s);
        }
    }
}

void OccupancyGrid::fill_box(Vec2 center, double length, double width, double theta, CellState s)
{
    const Pose frame(center, theta);
    const double hl = 0.5 * length;
    const double hw = 0.5 * width;
    fill_polygon({frame.apply({-hl, -hw}), frame.apply({hl, -hw}), frame.apply({hl, hw}), frame.apply({-hl, hw})}, s);
}

std::size_t OccupancyGrid::count(CellState s) const
{
    return static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), s));
}

namespace
{

constexpr double kInf = std::numeric_limits<double>::infinity();

// Lower envelope of parabolas over the finite entries of f (Felzenszwalb & Huttenlocher).
void distance_1d(const double *f, int n, double *d, int *arg, std::vector<int> &v, std::vector<double> &z)
{
    int k = -1;
    for (int q = 0; q < n; ++q)
    {
        if (f[q] == kInf)
            continue;
        if (k < 0)
        {
            k = 0;
            v[0] = q;
            z[0] = -kInf;
            z[1] = kInf;
            continue;
        }
        double s = 0.0;
        while (true)
        {
            const int p = v[k];
            s = ((f[q] + double(q) * q) - (f[p] + double(p) * p)) / (2.0 * (q - p));
            if (s > z[k])
                break;
            --k;
        }
        ++k;
        v[k] = q;
        z[k] = s;
        z[k + 1] = kInf;
    }
    if (k < 0)
    {
        std::fill(d, d + n, kInf);
        std::fill(arg, arg + n, -1);
        return;
    }
    int j = 0;
    for (int q = 0; q < n; ++q)
    {
        while (z[j + 1] < q)
            ++j;
        const double dq = q - v[j];
        d[q] = dq * dq + f[v[j]];
        arg[q] = v[j];
    }
}

} // namespace

DistanceField distance_transform(const std::vector<std::uint8_t> &sources, int width, int height)
{
    const std::size_t n = static_cast<std::size_t>(width) * height;
    if (sources.size() != n)
        throw PreconditionError("distance transform: source mask size mismatch");

    const int m = std::max(width, height);
    std::vector<int> v(m);
    std::vector<double> z(m + 1);
    std::vector<double> f(m), d(m);
    std::vector<int> arg(m);

    // Column pass: squared vertical distance and nearest source row.
    std::vector<double> column(n);
    std::vector<int> column_row(n);
    for (int x = 0; x < width; ++x)
    {
        for (int y = 0; y < height; ++y)
            f[y] = sources[static_cast<std::size_t>(y) * width + x] ? 0.0 : kInf;
        distance_1d(f.data(), height, d.data(), arg.data(), v, z);
        for (int y = 0; y < height; ++y)
        {
            column[static_cast<std::size_t>(y) * width + x] = d[y];
            column_row[static_cast<std::size_t>(y) * width + x] = arg[y];
        }
    }

    DistanceField out{std::vector<double>(n), std::vector<int>(n)};
    for (int y = 0; y < height; ++y)
    {
        const std::size_t row = static_cast<std::size_t>(y) * width;
        distance_1d(&column[row], width, &out.squared[row], arg.data(), v, z);
        for (int x = 0; x < width; ++x)
        {
            const int q = arg[x];
            out.nearest[row + x] = q < 0 ? -1 : column_row[row + q] * width + q;
        }
    }
    return out;
}

} // namespace guidedplan
