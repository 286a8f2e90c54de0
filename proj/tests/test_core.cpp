#include <guidedplan/collision.hpp>
#include <guidedplan/costmap.hpp>
#include <guidedplan/errors.hpp>
#include <guidedplan/grid_io.hpp>
#include <guidedplan/path_cost.hpp>
#include <guidedplan/rng.hpp>
#include <guidedplan/vehicle.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#ifndef GUIDEDPLAN_TEST_DATA
#define GUIDEDPLAN_TEST_DATA "data"
#endif

using namespace guidedplan;

namespace
{

// Squared distance (in cells) from every cell to the nearest source, by exhaustive scan.
std::vector<double> brute_distance(const std::vector<std::uint8_t> &src, int w, int h)
{
    std::vector<double> out(src.size(), std::numeric_limits<double>::infinity());
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            for (int sy = 0; sy < h; ++sy)
                for (int sx = 0; sx < w; ++sx)
                    if (src[sy * w + sx])
                        out[y * w + x] = std::min(out[y * w + x], double((x - sx) * (x - sx) + (y - sy) * (y - sy)));
    return out;
}

// Closed convex polygon vs closed axis-aligned square via separating axes.
bool polygon_overlaps_square(const Polygon &poly, double x0, double y0, double x1, double y1)
{
    std::vector<Vec2> axes{{1, 0}, {0, 1}};
    for (std::size_t i = 0; i < poly.size(); ++i)
    {
        const Vec2 e = poly[(i + 1) % poly.size()] - poly[i];
        axes.push_back({-e.y, e.x});
    }
    const Vec2 corners[4] = {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}};
    for (const Vec2 &a : axes)
    {
        double pmin = std::numeric_limits<double>::infinity(), pmax = -pmin, qmin = pmin, qmax = -pmin;
        for (const Vec2 &p : poly)
        {
            pmin = std::min(pmin, dot(a, p));
            pmax = std::max(pmax, dot(a, p));
        }
        for (const Vec2 &q : corners)
        {
            qmin = std::min(qmin, dot(a, q));
            qmax = std::max(qmax, dot(a, q));
        }
        if (pmax < qmin || qmax < pmin)
            return false;
    }
    return true;
}

bool point_in_convex(const Polygon &poly, Vec2 p, double tol = 1e-9)
{
    for (std::size_t i = 0; i < poly.size(); ++i)
        if (cross(poly[(i + 1) % poly.size()] - poly[i], p - poly[i]) < -tol)
            return false;
    return true;
}

State state_at(double x, double y, double theta) { return State{Pose(x, y, theta), 0.0, 0.0}; }

} // namespace

TEST(Pose, ThetaNormalizedToHalfOpenInterval)
{
    EXPECT_DOUBLE_EQ(Pose(0, 0, kPi).theta(), kPi);
    EXPECT_DOUBLE_EQ(Pose(0, 0, -kPi).theta(), kPi);
    EXPECT_NEAR(Pose(0, 0, 3 * kPi).theta(), kPi, 1e-12);
    Rng rng(3);
    for (int i = 0; i < 10000; ++i)
    {
        const double t = Pose(0, 0, rng.uniform(-100, 100)).theta();
        EXPECT_GT(t, -kPi);
        EXPECT_LE(t, kPi);
    }
}

TEST(Pose, FrameRoundTrip)
{
    Rng rng(4);
    for (int i = 0; i < 1000; ++i)
    {
        const Pose frame(rng.uniform(-9, 9), rng.uniform(-9, 9), rng.uniform(-4, 4));
        const Pose p(rng.uniform(-9, 9), rng.uniform(-9, 9), rng.uniform(-4, 4));
        const Pose back = p.relative_to(frame).in_frame(frame);
        EXPECT_NEAR(back.x(), p.x(), 1e-12);
        EXPECT_NEAR(back.y(), p.y(), 1e-12);
        EXPECT_NEAR(angle_distance(back.theta(), p.theta()), 0.0, 1e-12);
    }
}

TEST(Rng, SeededSequencesRepeat)
{
    Rng a(11), b(11), c(12);
    bool differs = false;
    for (int i = 0; i < 100; ++i)
    {
        const double x = a.uniform();
        EXPECT_EQ(x, b.uniform());
        differs |= x != c.uniform();
    }
    EXPECT_TRUE(differs);
    EXPECT_NE(mix_seed(1, 0), mix_seed(1, 1));
}

TEST(Grid, DefaultWorldGeometry)
{
    const GridGeometry g = GridGeometry::default_world();
    EXPECT_EQ(g.width(), 600);
    EXPECT_EQ(g.height(), 600);
    EXPECT_NEAR(g.resolution(), 0.1, 1e-7);
    const Extent e = g.extent();
    EXPECT_NEAR(e.width(), 60.0, 1e-4);
    EXPECT_NEAR(e.height(), 60.0, 1e-4);
}

TEST(Grid, CellCenterRoundTrip)
{
    for (const GridGeometry &g :
         {GridGeometry::default_world(), GridGeometry::centered({3.3, -7.1}, 60.0, 256, 0.7)})
        for (int iy = 0; iy < g.height(); ++iy)
            for (int ix = 0; ix < g.width(); ++ix)
                ASSERT_EQ(g.cell_of(g.center_of({ix, iy})), (CellIndex{ix, iy}));
}

TEST(Grid, DistanceTransformMatchesBruteForce)
{
    Rng rng(21);
    for (int trial = 0; trial < 60; ++trial)
    {
        const int w = 1 + static_cast<int>(rng.index(64));
        const int h = 1 + static_cast<int>(rng.index(64));
        const double density = rng.uniform(0.0, 0.2);
        std::vector<std::uint8_t> src(w * h);
        for (auto &s : src)
            s = rng.bernoulli(density);
        const DistanceField f = distance_transform(src, w, h);
        const std::vector<double> oracle = brute_distance(src, w, h);
        for (int i = 0; i < w * h; ++i)
        {
            ASSERT_EQ(f.squared[i], oracle[i]) << "trial " << trial << " cell " << i;
            if (std::isfinite(oracle[i]))
            {
                const int n = f.nearest[i];
                ASSERT_TRUE(src[n]);
                const int dx = n % w - i % w, dy = n / w - i / w;
                ASSERT_EQ(double(dx * dx + dy * dy), oracle[i]);
            }
        }
    }
}

TEST(CostMap, FreeGridHasNoCost)
{
    const OccupancyGrid grid(GridGeometry(50, 40, 0.1, Pose()));
    const CostMap map = inflate(grid, 0.25);
    for (std::size_t i = 0; i < grid.cells().size(); ++i)
    {
        EXPECT_EQ(map.costs()[i], 0.0);
        EXPECT_EQ(map.lethal_mask()[i], 0);
    }
}

TEST(CostMap, SingleObstacleInflatesWithinRadius)
{
    OccupancyGrid grid(GridGeometry(41, 41, 0.1, Pose()));
    const CellIndex c{20, 20};
    grid.set(c, CellState::Occupied);
    const CostMap map = inflate(grid, 0.25);
    const Vec2 oc = grid.geometry().center_of(c);
    for (int iy = 0; iy < 41; ++iy)
        for (int ix = 0; ix < 41; ++ix)
        {
            const double d = (grid.geometry().center_of({ix, iy}) - oc).norm();
            EXPECT_EQ(map.cost({ix, iy}) > 0.0, d < 0.25 - 1e-9) << ix << "," << iy;
            EXPECT_EQ(map.lethal({ix, iy}), ix == 20 && iy == 20);
        }
}

TEST(CostMap, CostFollowsLinearProfileOfExactDistance)
{
    Rng rng(5);
    const int w = 48, h = 40;
    OccupancyGrid grid(GridGeometry(w, h, 0.1, Pose(-1.0, 2.0, 0.0)));
    std::vector<std::uint8_t> src(w * h);
    for (int i = 0; i < w * h; ++i)
        if (rng.bernoulli(0.03))
        {
            grid.cells()[i] = CellState::Occupied;
            src[i] = 1;
        }
    const double radius = 0.45;
    const CostMap map = inflate(grid, radius);
    const std::vector<double> d2 = brute_distance(src, w, h);
    for (int i = 0; i < w * h; ++i)
    {
        const double d = std::sqrt(d2[i]) * 0.1;
        const double expected = std::clamp(100.0 * (1.0 - d / radius), 0.0, 100.0);
        EXPECT_NEAR(map.costs()[i], expected, 1e-4);
        EXPECT_EQ(map.lethal_mask()[i] != 0, src[i] != 0);
    }
}

TEST(CostMap, ZeroRadiusCostsOnlyLethalCells)
{
    Rng rng(6);
    OccupancyGrid grid(GridGeometry(30, 30, 0.1, Pose()));
    for (auto &c : grid.cells())
        if (rng.bernoulli(0.1))
            c = CellState::Occupied;
    const CostMap map = inflate(grid, 0.0);
    for (std::size_t i = 0; i < grid.cells().size(); ++i)
        EXPECT_EQ(map.costs()[i] > 0.0, map.lethal_mask()[i] != 0);
}

TEST(CostMap, UnknownCellsBlockButAreNotLethal)
{
    OccupancyGrid grid(GridGeometry(20, 20, 0.1, Pose()));
    grid.set({5, 5}, CellState::Unknown);
    const CostMap map = inflate(grid, 0.25);
    EXPECT_FALSE(map.lethal({5, 5}));
    EXPECT_TRUE(map.blocked({5, 5}));
    EXPECT_TRUE(map.blocked({-1, 5}));
    // Counting unknown as an obstacle source raises its cost, not its lethality.
    const CostMap strict = inflate(grid, 0.25, true);
    EXPECT_FALSE(strict.lethal({5, 5}));
    EXPECT_EQ(strict.cost({5, 5}), 100.0);
    EXPECT_GT(strict.cost({6, 5}), 0.0);
    EXPECT_EQ(map.cost({6, 5}), 0.0);
}

TEST(Vehicle, DefaultsAndValidation)
{
    const VehicleParams v;
    EXPECT_DOUBLE_EQ(v.length, 4.926);
    EXPECT_DOUBLE_EQ(v.width, 2.086);
    EXPECT_DOUBLE_EQ(v.wheel_base, 2.912);
    EXPECT_DOUBLE_EQ(v.kappa_max, 0.1982);
    EXPECT_DOUBLE_EQ(v.kappa_rate_max, 0.1868);
    EXPECT_EQ(v.footprint_vertices, 20);
    EXPECT_DOUBLE_EQ(v.hard_buffer, 0.10);
    EXPECT_NEAR(v.rear_overhang(), 1.007, 1e-12);
    VehicleParams bad;
    bad.kappa_max = 0.0;
    EXPECT_THROW(bad.validate(), PreconditionError);
    bad = VehicleParams{};
    bad.footprint_vertices = 3;
    EXPECT_THROW(bad.validate(), PreconditionError);
}

TEST(Vehicle, FootprintCoversBufferedRectangle)
{
    const VehicleParams v;
    const Polygon body = body_footprint(v);
    ASSERT_EQ(body.size(), 20u);
    double x0 = 1e9, x1 = -1e9, y0 = 1e9, y1 = -1e9;
    for (const Vec2 &p : body)
    {
        x0 = std::min(x0, p.x);
        x1 = std::max(x1, p.x);
        y0 = std::min(y0, p.y);
        y1 = std::max(y1, p.y);
    }
    EXPECT_GE(x1 - x0, 5.126 - 1e-9);
    EXPECT_GE(y1 - y0, 2.286 - 1e-9);
    // Convex and counter-clockwise.
    for (std::size_t i = 0; i < body.size(); ++i)
        EXPECT_GT(cross(body[(i + 1) % 20] - body[i], body[(i + 2) % 20] - body[(i + 1) % 20]), -1e-12);
    // Minkowski sum of the rectangle with the buffer disc lies inside.
    const double rx0 = -v.rear_overhang(), rx1 = v.length - v.rear_overhang();
    const double ry = 0.5 * v.width;
    for (Vec2 corner : {Vec2{rx0, -ry}, Vec2{rx1, -ry}, Vec2{rx1, ry}, Vec2{rx0, ry}})
        for (int k = 0; k < 360; ++k)
            EXPECT_TRUE(point_in_convex(body, corner + v.hard_buffer * unit(k * kPi / 180.0)));
}

TEST(Vehicle, FootprintPointReflectsUnderHalfTurn)
{
    const VehicleParams v;
    const State s = state_at(3.0, -2.0, 0.4);
    const State t = state_at(3.0, -2.0, 0.4 + kPi);
    const Polygon a = footprint(v, s), b = footprint(v, t);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
    {
        const Vec2 reflected = Vec2{6.0, -4.0} - a[i];
        EXPECT_NEAR(b[i].x, reflected.x, 1e-9);
        EXPECT_NEAR(b[i].y, reflected.y, 1e-9);
    }
}

TEST(Vehicle, ZeroBufferAreaMatchesRectangle)
{
    VehicleParams v;
    v.hard_buffer = 0.0;
    EXPECT_NEAR(polygon_area(body_footprint(v)), v.length * v.width, 0.01 * v.length * v.width);
}

TEST(Collision, EmptyMapNeverCollides)
{
    const CostMap map = inflate(OccupancyGrid(GridGeometry::default_world()), 0.25);
    Rng rng(8);
    for (int i = 0; i < 200; ++i)
        EXPECT_FALSE(collides(state_at(rng.uniform(-20, 20), rng.uniform(-20, 20), rng.uniform(-4, 4)), map, {}));
}

TEST(Collision, CenteredOnLethalCell)
{
    OccupancyGrid grid(GridGeometry::default_world());
    const CellIndex c = grid.geometry().cell_of({0.0, 0.0});
    grid.set(c, CellState::Occupied);
    const CostMap map = inflate(grid, 0.25);
    EXPECT_TRUE(collides(state_at(0.0, 0.0, 0.3), map, {}));
}

TEST(Collision, ObstacleInsideBufferCollides)
{
    // Occupied cell whose left edge is 0.05 m beyond the front of the body rectangle.
    OccupancyGrid grid(GridGeometry(200, 100, 0.1, Pose(-10.0, -5.0, 0.0)));
    const VehicleParams v;
    const double front = v.length - v.rear_overhang();
    const CellIndex c = grid.geometry().cell_of({front + 0.05 + 0.05, 0.0});
    grid.set(c, CellState::Occupied);
    const Vec2 cc = grid.geometry().center_of(c);
    const CostMap map = inflate(grid, 0.25);
    // Place the vehicle so the cell edge is exactly 0.05 m from the rectangle front.
    const double shift = (cc.x - 0.05) - (front + 0.05);
    EXPECT_TRUE(collides(state_at(shift, cc.y, 0.0), map, v));
    VehicleParams no_buffer = v;
    no_buffer.hard_buffer = 0.0;
    EXPECT_FALSE(collides(state_at(shift, cc.y, 0.0), map, no_buffer));
}

TEST(Collision, MatchesSeparatingAxisOracle)
{
    Rng rng(31);
    OccupancyGrid grid(GridGeometry(160, 160, 0.1, Pose(-8.0, -8.0, 0.0)));
    for (auto &c : grid.cells())
        if (rng.bernoulli(0.0004))
            c = CellState::Occupied;
    const CostMap map = inflate(grid, 0.25);
    const VehicleParams v;
    const GridGeometry &g = grid.geometry();
    int hits = 0;
    for (int trial = 0; trial < 400; ++trial)
    {
        const State s = state_at(rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-kPi, kPi));
        const Polygon poly = footprint(v, s);
        bool oracle = false;
        for (int iy = 0; iy < g.height() && !oracle; ++iy)
            for (int ix = 0; ix < g.width() && !oracle; ++ix)
            {
                if (grid.at({ix, iy}) == CellState::Free)
                    continue;
                const double x0 = -8.0 + ix * 0.1, y0 = -8.0 + iy * 0.1;
                oracle = polygon_overlaps_square(poly, x0, y0, x0 + 0.1, y0 + 0.1);
            }
        hits += oracle;
        ASSERT_EQ(collides(s, map, v), oracle) << "trial " << trial;
        const CollisionChecker checker(map, v);
        ASSERT_EQ(checker.collides(s.pose), oracle) << "trial " << trial;
    }
    EXPECT_GT(hits, 20);
    EXPECT_LT(hits, 380);
}

TEST(Collision, MonotoneInBuffer)
{
    Rng rng(32);
    OccupancyGrid grid(GridGeometry(160, 160, 0.1, Pose(-8.0, -8.0, 0.0)));
    for (auto &c : grid.cells())
        if (rng.bernoulli(0.001))
            c = CellState::Occupied;
    const CostMap map = inflate(grid, 0.25);
    for (int trial = 0; trial < 300; ++trial)
    {
        const State s = state_at(rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-kPi, kPi));
        VehicleParams a, b;
        a.hard_buffer = rng.uniform(0.0, 0.3);
        b.hard_buffer = a.hard_buffer + rng.uniform(0.0, 0.3);
        if (collides(s, map, a))
            EXPECT_TRUE(collides(s, map, b));
    }
}

TEST(PathCost, StraightAndCusp)
{
    const CostMap map = inflate(OccupancyGrid(GridGeometry::default_world()), 0.25);
    std::vector<State> forward;
    for (int i = 0; i <= 100; ++i)
        forward.push_back(State{Pose(-5.0 + 0.1 * i, 0.0, 0.0), 0.0, 1.0});
    EXPECT_NEAR(path_cost(forward, map), 10.0, 1e-9);
    EXPECT_EQ(count_cusps(forward), 0);

    std::vector<State> cusp;
    for (int i = 0; i <= 50; ++i)
        cusp.push_back(State{Pose(-5.0 + 0.1 * i, 0.0, 0.0), 0.0, 1.0});
    for (int i = 1; i <= 50; ++i)
        cusp.push_back(State{Pose(0.0 - 0.1 * i, 0.0, 0.0), 0.0, -1.0});
    EXPECT_EQ(count_cusps(cusp), 1);
    EXPECT_NEAR(path_cost(cusp, map), 15.0, 1e-9);
    EXPECT_THROW(path_cost(std::vector<State>{}, map), PreconditionError);
}

TEST(PathCost, BandIntegralMatchesFineMidpointRule)
{
    OccupancyGrid grid(GridGeometry::default_world());
    grid.fill_box({0.0, 0.7}, 40.0, 0.3, 0.0, CellState::Occupied);
    const CostMap map = inflate(grid, 0.8);
    const Vec2 a{-3.0, -2.0}, b{4.0, 0.2};
    const double len = (b - a).norm();
    const double heading = std::atan2(b.y - a.y, b.x - a.x);
    auto along = [&](double s) { return a + (s / len) * (b - a); };

    std::vector<State> states;
    const int n = static_cast<int>(std::ceil(len / 0.1));
    for (int i = 0; i <= n; ++i)
        states.push_back(State{Pose(along(std::min(len, 0.1 * i)), heading), 0.0, 1.0});

    const double fine = 0.01;
    const int m = static_cast<int>(std::round(len / fine));
    double integral = 0.0, variation = 0.0, prev = map.cost_at(along(0.0));
    for (int k = 0; k < m; ++k)
    {
        const double c = map.cost_at(along((k + 0.5) * len / m));
        integral += c * len / m;
        variation += std::abs(c - prev);
        prev = c;
    }
    ASSERT_GT(integral, 1.0);
    // Trapezoid sampling at 0.1 m deviates from the exact integral by at most
    // total variation times half a step (plus the midpoint rule's own error).
    const double bound = variation * (0.05 + fine);
    EXPECT_NEAR(path_cost(states, map) - len, integral, bound);
}

TEST(PathCost, AdditiveOverConcatenation)
{
    OccupancyGrid grid(GridGeometry::default_world());
    grid.fill_box({1.0, 1.0}, 3.0, 0.3, 0.5, CellState::Occupied);
    const CostMap map = inflate(grid, 1.0);
    std::vector<State> all;
    for (int i = 0; i <= 80; ++i)
        all.push_back(State{Pose(-4.0 + 0.1 * i, 0.3 * std::sin(0.1 * i), 0.0), 0.0, 1.0});
    const std::span<const State> s(all);
    EXPECT_NEAR(path_cost(s, map), path_cost(s.first(41), map) + path_cost(s.subspan(40), map), 1e-9);
}

TEST(GridIo, RoundTrip)
{
    Rng rng(9);
    OccupancyGrid grid(GridGeometry(37, 23, 0.1, Pose(-1.5, 2.25, 0.3)));
    for (auto &c : grid.cells())
        c = static_cast<CellState>(rng.index(3));
    std::stringstream ss;
    write_ogrid(ss, grid);
    EXPECT_EQ(ss.str().size(), 4 + 4 + 4 + 4 + 24 + 37 * 23u);
    const OccupancyGrid back = read_ogrid(ss);
    EXPECT_EQ(back, grid);
}

TEST(GridIo, RejectsCorruptInput)
{
    std::stringstream bad_magic("XGRD0000");
    EXPECT_THROW(read_ogrid(bad_magic), FormatError);
    OccupancyGrid grid(GridGeometry(4, 4, 0.1, Pose()));
    std::stringstream ss;
    write_ogrid(ss, grid);
    std::string bytes = ss.str();
    bytes.back() = 7;
    std::stringstream bad_cell(bytes);
    EXPECT_THROW(read_ogrid(bad_cell), FormatError);
    std::stringstream truncated(ss.str().substr(0, 20));
    EXPECT_THROW(read_ogrid(truncated), FormatError);
}

TEST(GridIo, GoldenFileIsBitExact)
{
    // Fixture written by tests/data/make_golden.py.
    OccupancyGrid grid(GridGeometry(5, 3, 0.1, Pose(-0.25, 1.5, 0.5)));
    grid.set({0, 0}, CellState::Occupied);
    grid.set({4, 0}, CellState::Unknown);
    grid.set({2, 1}, CellState::Occupied);
    grid.set({1, 2}, CellState::Unknown);
    grid.set({4, 2}, CellState::Occupied);
    std::ifstream in(std::string(GUIDEDPLAN_TEST_DATA) + "/golden.ogrid", std::ios::binary);
    ASSERT_TRUE(in.good());
    const std::string golden((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    std::stringstream ss;
    write_ogrid(ss, grid);
    EXPECT_EQ(ss.str(), golden);
    std::stringstream back(golden);
    EXPECT_EQ(read_ogrid(back), grid);
}
