#include <guidedplan/dataset.hpp>
#include <guidedplan/dataset_io.hpp>
#include <guidedplan/errors.hpp>
#include <guidedplan/grid_io.hpp>
#include <guidedplan/steering.hpp>

#include <gtest/gtest.h>

#include <algorithm>
#include <deque>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

using namespace guidedplan;
namespace fs = std::filesystem;

namespace
{

fs::path scratch_dir(const std::string &name)
{
    const fs::path dir = fs::temp_directory_path() / ("guidedplan_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

// 8-connected reachability over FREE cells.
bool bfs_connected(const OccupancyGrid &grid, Vec2 from, Vec2 to)
{
    const GridGeometry &g = grid.geometry();
    const CellIndex a = g.cell_of(from), b = g.cell_of(to);
    std::vector<char> seen(g.cell_count(), 0);
    std::deque<CellIndex> queue{a};
    seen[g.index(a)] = 1;
    while (!queue.empty())
    {
        const CellIndex c = queue.front();
        queue.pop_front();
        if (c == b)
            return true;
        for (int dy = -1; dy <= 1; ++dy)
            for (int dx = -1; dx <= 1; ++dx)
            {
                const CellIndex n{c.ix + dx, c.iy + dy};
                if (g.contains(n) && !seen[g.index(n)] && grid.at(n) == CellState::Free)
                {
                    seen[g.index(n)] = 1;
                    queue.push_back(n);
                }
            }
    }
    return false;
}

// Cells whose closed square meets the segment, in window cell units (Liang-Barsky clip).
std::set<std::size_t> cells_touched(Vec2 a, Vec2 b, const GridGeometry &w)
{
    const double inv = 1.0 / w.resolution();
    const Vec2 p = inv * w.to_local(a), q = inv * w.to_local(b);
    std::set<std::size_t> out;
    const int x0 = static_cast<int>(std::floor(std::min(p.x, q.x))) - 1, x1 = static_cast<int>(std::max(p.x, q.x)) + 1;
    const int y0 = static_cast<int>(std::floor(std::min(p.y, q.y))) - 1, y1 = static_cast<int>(std::max(p.y, q.y)) + 1;
    for (int iy = y0; iy <= y1; ++iy)
        for (int ix = x0; ix <= x1; ++ix)
        {
            double t0 = 0.0, t1 = 1.0;
            bool hit = true;
            const double d[2] = {q.x - p.x, q.y - p.y}, s[2] = {p.x, p.y};
            const double lo[2] = {double(ix), double(iy)}, hi[2] = {ix + 1.0, iy + 1.0};
            for (int k = 0; k < 2 && hit; ++k)
            {
                if (d[k] == 0.0)
                {
                    hit = s[k] >= lo[k] && s[k] <= hi[k];
                    continue;
                }
                double ta = (lo[k] - s[k]) / d[k], tb = (hi[k] - s[k]) / d[k];
                if (ta > tb)
                    std::swap(ta, tb);
                t0 = std::max(t0, ta);
                t1 = std::min(t1, tb);
                hit = t0 <= t1;
            }
            if (hit && w.contains({ix, iy}))
                out.insert(w.index({ix, iy}));
        }
    return out;
}

Trajectory line(Vec2 a, Vec2 b, double step = 0.1)
{
    const double len = (b - a).norm();
    const double th = std::atan2(b.y - a.y, b.x - a.x);
    std::vector<State> states;
    const int n = static_cast<int>(std::ceil(len / step));
    for (int i = 0; i <= n; ++i)
        states.push_back(State{Pose(a + (std::min(len, i * step) / len) * (b - a), th), 0.0, 1.0});
    return Trajectory(states);
}

std::size_t count_on(const std::vector<float> &plane, float threshold = 0.5f)
{
    return static_cast<std::size_t>(std::count_if(plane.begin(), plane.end(), [&](float v) { return v > threshold; }));
}

LogitPlanes planes_of(std::size_t n)
{
    return {std::vector<double>(n), std::vector<double>(n), std::vector<double>(n), std::vector<double>(n)};
}

} // namespace

TEST(Generate, EmptyHasNoObstacles)
{
    for (std::uint64_t seed : {0u, 1u, 99u})
    {
        const Scenario s = generate(ScenarioFamily::Empty, seed);
        EXPECT_EQ(s.grid.count(CellState::Occupied), 0u);
        EXPECT_EQ(s.grid.geometry(), GridGeometry::default_world());
        EXPECT_EQ(s.name(), "empty-" + std::to_string(seed));
    }
}

TEST(Generate, DeterministicPerSeed)
{
    const Scenario a = generate(ScenarioFamily::Passage, 7), b = generate(ScenarioFamily::Passage, 7);
    EXPECT_EQ(a.grid, b.grid);
    EXPECT_EQ(a.start, b.start);
    EXPECT_EQ(a.goal, b.goal);
    EXPECT_NE(generate(ScenarioFamily::Passage, 8).grid, a.grid);
}

TEST(Generate, PassageGapWidth)
{
    for (double gap : {2.4, 2.6, 3.5})
    {
        GenerateOptions opt;
        opt.passage_gap = gap;
        const Scenario s = generate(ScenarioFamily::Passage, 3, opt);
        // Column through the wall center: free run length equals the gap.
        const GridGeometry &g = s.grid.geometry();
        const int ix = g.cell_of({0.05, 0.0}).ix;
        int free_cells = 0;
        for (int iy = 0; iy < g.height(); ++iy)
            free_cells += s.grid.at({ix, iy}) == CellState::Free;
        EXPECT_NEAR(free_cells * 0.1, gap, 0.1 + 1e-9);
    }
}

TEST(Generate, EndpointsValidAcrossFamilies)
{
    const VehicleParams v;
    for (ScenarioFamily f : {ScenarioFamily::Empty, ScenarioFamily::Passage, ScenarioFamily::BlockedIntersection,
                             ScenarioFamily::ParkingRow, ScenarioFamily::Maze})
        for (std::uint64_t seed = 0; seed < 8; ++seed)
        {
            const Scenario s = generate(f, seed);
            const CostMap map = inflate(s.grid);
            for (const State &e : {s.start, s.goal})
            {
                EXPECT_FALSE(collides(e, map, v)) << to_string(f) << " " << seed;
                EXPECT_GE(map.clearance_at(e.pose.position()), 1.041);
            }
            EXPECT_LE(std::abs(s.goal.pose.x() - s.start.pose.x()), 30.0);
            EXPECT_LE(std::abs(s.goal.pose.y() - s.start.pose.y()), 30.0);
            EXPECT_EQ(parse_family(to_string(f)), f);
        }
    EXPECT_THROW(parse_family("forest"), ConfigError);
}

TEST(Generate, MazeAlwaysConnected)
{
    for (std::uint64_t seed = 0; seed < 1000; ++seed)
    {
        const Scenario s = generate(ScenarioFamily::Maze, seed);
        const double density = double(s.grid.count(CellState::Occupied)) / double(s.grid.cells().size());
        ASSERT_GE(density, 0.10) << seed;
        ASSERT_LE(density, 0.21) << seed;
        ASSERT_TRUE(bfs_connected(s.grid, s.start.pose.position(), s.goal.pose.position())) << seed;
    }
}

TEST(Generate, ParkingGoalInsideStall)
{
    for (std::uint64_t seed = 0; seed < 10; ++seed)
    {
        const Scenario s = generate(ScenarioFamily::ParkingRow, seed);
        EXPECT_LT(s.goal.pose.y(), s.start.pose.y());
        const double deg = -s.goal.pose.theta() * 180.0 / kPi;
        const bool listed = std::abs(deg) < 1e-9 || std::abs(deg - 45) < 1e-9 || std::abs(deg - 75) < 1e-9 ||
                            std::abs(deg - 90) < 1e-9;
        EXPECT_TRUE(listed) << deg;
    }
}

TEST(Rasterize, AxisAndDiagonalMatchBresenham)
{
    const GridGeometry w = prediction_window({0, 0});
    const double r = w.resolution();
    auto center = [&](int ix, int iy) { return w.center_of({ix, iy}); };
    struct Case
    {
        int x0, y0, x1, y1;
    };
    for (const Case &c : {Case{10, 10, 60, 10}, Case{40, 200, 40, 20}, Case{5, 5, 105, 105}, Case{200, 30, 120, 110},
                          Case{100, 100, 100, 100}})
    {
        const std::vector<Vec2> pts{center(c.x0, c.y0), center(c.x1, c.y1)};
        const auto cells = rasterize_polyline(pts, w);
        // Bresenham on these lines visits max(|dx|, |dy|) + 1 cells along the line.
        const int n = std::max(std::abs(c.x1 - c.x0), std::abs(c.y1 - c.y0)) + 1;
        ASSERT_EQ(cells.size(), static_cast<std::size_t>(n));
        for (int k = 0; k < n; ++k)
        {
            const int sx = (c.x1 > c.x0) - (c.x1 < c.x0), sy = (c.y1 > c.y0) - (c.y1 < c.y0);
            EXPECT_EQ(cells[k].first, w.index({c.x0 + k * sx, c.y0 + k * sy}));
        }
    }
    (void)r;
}

TEST(Rasterize, GeneralSegmentsMatchClipOracle)
{
    const GridGeometry w = prediction_window({3, -1});
    Rng rng(71);
    for (int trial = 0; trial < 300; ++trial)
    {
        const Vec2 a{rng.uniform(-25, 25), rng.uniform(-25, 25)};
        const Vec2 b = a + Vec2{rng.uniform(-8, 8), rng.uniform(-8, 8)};
        const std::vector<Vec2> pts{a, b};
        std::set<std::size_t> got;
        for (const auto &[cell, seg] : rasterize_polyline(pts, w))
        {
            EXPECT_TRUE(got.insert(cell).second);
            EXPECT_EQ(seg, 0u);
        }
        EXPECT_EQ(got, cells_touched(a, b, w)) << "trial " << trial;
    }
}

TEST(EncodeInputs, EmptyScenario)
{
    const Scenario s = generate(ScenarioFamily::Empty, 4);
    const GridGeometry w = prediction_window(s.start.pose.position());
    const InputPlanes in = encode_inputs(s, Trajectory(), w);
    EXPECT_EQ(count_on(in.planes[0]), 0u);
    EXPECT_EQ(count_on(in.planes[2]), 0u);
    // Cells outside the 60 m world read as unknown.
    const bool window_inside = std::abs(s.start.pose.x()) < 1e-9 && std::abs(s.start.pose.y()) < 1e-9;
    EXPECT_EQ(count_on(in.planes[1]) == 0u, window_inside);
}

TEST(EncodeInputs, ObstaclesAndUnknownPooled)
{
    OccupancyGrid grid(GridGeometry::default_world());
    grid.fill_box({5, 5}, 2.0, 1.0, 0.0, CellState::Occupied);
    grid.fill_box({-5, -5}, 1.0, 1.0, 0.0, CellState::Unknown);
    const GridGeometry w = prediction_window({0, 0});
    const InputPlanes in = encode_inputs(grid, Trajectory(), State{}, State{Pose(10, 0, 0)}, w);
    // 2 m x 1 m at 0.234375 m cells spans 9 or 10 by 5 window cells.
    const std::size_t occ = count_on(in.planes[0]);
    EXPECT_GE(occ, 9u * 5u);
    EXPECT_LE(occ, 10u * 6u);
    for (std::size_t i = 0; i < w.cell_count(); ++i)
        if (in.planes[0][i] > 0.5f)
        {
            const Vec2 c = w.center_of(w.cell_at(i));
            EXPECT_LT(std::abs(c.x - 5), 1.0 + w.resolution());
            EXPECT_LT(std::abs(c.y - 5), 0.5 + w.resolution());
        }
    EXPECT_GE(count_on(in.planes[1]), 16u);
}

TEST(EncodeInputs, MarkerEncodesHeadingAndSpeed)
{
    const GridGeometry w = prediction_window({0, 0});
    const CellIndex c = w.cell_of({1.0, 2.0});
    auto marked = [&](double theta) {
        std::vector<float> plane(w.cell_count(), 0.0f);
        draw_marker(plane, w, State{Pose(1.0, 2.0, theta), 0.0, 1.4});
        std::vector<std::pair<int, int>> ones;
        int ring_half = 0, inner = 0;
        for (int dy = -3; dy <= 3; ++dy)
            for (int dx = -3; dx <= 3; ++dx)
            {
                const float v = plane[w.index({c.ix + dx, c.iy + dy})];
                if (std::max(std::abs(dx), std::abs(dy)) == 3)
                {
                    if (v == 1.0f)
                        ones.push_back({dx, dy});
                    ring_half += v == 0.5f;
                }
                else
                    inner += v == 0.5f;
            }
        EXPECT_EQ(ones.size(), 1u);
        EXPECT_EQ(ring_half, 23);
        EXPECT_EQ(inner, 25);
        EXPECT_EQ(count_on(plane, 0.0f), 49u);
        return ones.empty() ? std::pair<int, int>{99, 99} : ones[0];
    };
    EXPECT_EQ(marked(0.0), (std::pair<int, int>{3, 0}));
    EXPECT_EQ(marked(kPi / 2), (std::pair<int, int>{0, 3}));
    EXPECT_EQ(marked(kPi), (std::pair<int, int>{-3, 0}));
    EXPECT_EQ(marked(kPi / 4), (std::pair<int, int>{3, 3}));
    EXPECT_EQ(marked(-kPi / 2), (std::pair<int, int>{0, -3}));
}

TEST(EncodeInputs, SingleStatePast)
{
    const Scenario s = generate(ScenarioFamily::Empty, 5);
    const GridGeometry w = prediction_window(s.start.pose.position());
    const Trajectory past(std::vector<State>{s.start});
    const InputPlanes in = encode_inputs(s, past, w);
    ASSERT_EQ(count_on(in.planes[2]), 1u);
    EXPECT_EQ(in.planes[2][w.index(w.cell_of(s.start.pose.position()))], 1.0f);
}

TEST(EncodeLabels, StraightEastTrajectory)
{
    const GridGeometry w = prediction_window({0, 0});
    const Trajectory t = line({-10, 0.1}, {10, 0.1});
    const PredictionGrids labels = encode_labels(t, w);
    std::size_t on = 0;
    for (std::size_t i = 0; i < w.cell_count(); ++i)
    {
        if (labels.p_path[i] == 1.0f)
        {
            ++on;
            EXPECT_EQ(labels.sin_theta[i], 0.0f);
            EXPECT_EQ(labels.cos_theta[i], 1.0f);
        }
        else
        {
            EXPECT_EQ(labels.p_path[i], 0.0f);
            EXPECT_EQ(labels.sin_theta[i], 0.0f);
            EXPECT_EQ(labels.cos_theta[i], 0.0f);
        }
    }
    EXPECT_EQ(on, cells_touched({-10, 0.1}, {10, 0.1}, w).size());
    EXPECT_THROW(encode_labels(Trajectory(), w), PreconditionError);
}

TEST(EncodeLabels, LastCrossingWins)
{
    const GridGeometry w = prediction_window({0, 0});
    std::vector<State> states{State{Pose(-3, 0.1, 0)}, State{Pose(3, 0.1, 0)}, State{Pose(3, 3, kPi / 2)},
                              State{Pose(0.1, 3, kPi)}, State{Pose(0.1, -3, -kPi / 2)}};
    const PredictionGrids labels = encode_labels(Trajectory(states), w);
    const std::size_t cross = w.index(w.cell_of({0.1, 0.1}));
    EXPECT_EQ(labels.p_path[cross], 1.0f);
    // Segment 3 runs from (0.1, 3) heading pi and is the last to visit the cell.
    EXPECT_NEAR(labels.cos_theta[cross], std::cos(kPi), 1e-7);
}

TEST(PaintOracle, BlurZeroEqualsLabels)
{
    const GridGeometry w = prediction_window({2, 2});
    const Trajectory t = line({-8, -3}, {12, 9});
    const PredictionGrids labels = encode_labels(t, w);
    const PredictionGrids painted = paint_oracle(t, w, 0.0);
    for (std::size_t i = 0; i < w.cell_count(); ++i)
        EXPECT_EQ(painted.p_path[i] > 0.5f, labels.p_path[i] > 0.5f);
}

TEST(PaintOracle, RangesAndUnitHeading)
{
    const GridGeometry w = prediction_window({0, 0});
    std::vector<State> states;
    const SteeringPath p = reeds_shepp_shortest(Pose(-12, -6, 0.4), Pose(10, 7, -2.0), 0.1982);
    for (const State &s : discretize(p, 0.1))
        states.push_back(s);
    const PredictionGrids g = paint_oracle(Trajectory(states), w, 3.0);
    EXPECT_NO_THROW(g.validate(1e-6));
    for (std::size_t i = 0; i < w.cell_count(); ++i)
    {
        EXPECT_GE(g.p_path[i], 0.0f);
        EXPECT_LE(g.p_path[i], 1.0f);
        if (g.p_path[i] > 0.5f)
            EXPECT_NEAR(g.sin_theta[i] * g.sin_theta[i] + g.cos_theta[i] * g.cos_theta[i], 1.0, 1e-6);
    }
}

TEST(PaintOracle, StraightPathSamplingDeviation)
{
    const GridGeometry w = prediction_window({0, 0});
    const Trajectory t = line({-12, 1}, {12, 1});
    const PredictionGrids g = paint_oracle(t, w, 2.0);
    Rng rng(72);
    const std::vector<PoseSample> samples = sample_prediction(g, 200, 0.5, rng);
    EXPECT_LT(avg_path_deviation(t, samples), 0.3);
}

TEST(PaintOracle, PgridRoundTrip)
{
    const GridGeometry w = prediction_window({0, 0});
    const PredictionGrids g = paint_oracle(line({-12, 1}, {12, -4}), w, 2.0);
    std::stringstream ss;
    write_pgrid(ss, g);
    EXPECT_EQ(read_pgrid(ss), g);
}

TEST(Loss, SingleCellGolden)
{
    PredictionGrids labels(GridGeometry(1, 1, 0.234375, Pose()));
    labels.p_path[0] = 1.0f;
    labels.cos_theta[0] = 1.0f;
    LogitPlanes pred = planes_of(1);
    pred.sin_theta[0] = 0.1;
    pred.cos_theta[0] = 1.0;
    TrainConfig cfg;
    cfg.l2_lambda = 0.0;
    // 25 ln 2 + 25 * 0.1^2 computed by hand.
    EXPECT_NEAR(loss(pred, labels, cfg, 0.0), 25.0 * std::log(2.0) + 0.25, 1e-9);
    EXPECT_NEAR(loss(pred, labels, cfg, 0.0), 17.5786, 1e-4);
}

TEST(Loss, SaturatedPerfectPrediction)
{
    // 8 x 8 grid; at margin 20 each cell contributes at most 25 * 2.1e-9.
    const GridGeometry g(8, 8, 0.234375, Pose());
    PredictionGrids labels(g);
    LogitPlanes pred = planes_of(g.cell_count());
    Rng rng(73);
    for (std::size_t c = 0; c < g.cell_count(); ++c)
    {
        const bool on = rng.bernoulli(0.2);
        labels.p_path[c] = on;
        if (on)
        {
            const double th = rng.uniform(-kPi, kPi);
            labels.sin_theta[c] = static_cast<float>(std::sin(th));
            labels.cos_theta[c] = static_cast<float>(std::cos(th));
        }
        pred.logit_on[c] = on ? 10.0 : -10.0;
        pred.logit_off[c] = -pred.logit_on[c];
        pred.sin_theta[c] = labels.sin_theta[c];
        pred.cos_theta[c] = labels.cos_theta[c];
    }
    TrainConfig cfg;
    cfg.l2_lambda = 0.0;
    const double l = loss(pred, labels, cfg, 0.0);
    EXPECT_GE(l, 0.0);
    EXPECT_LT(l, 1e-6);
    cfg.l2_lambda = 0.003;
    EXPECT_EQ(loss(pred, labels, cfg, 0.0), l);
    EXPECT_NEAR(loss(pred, labels, cfg, 40.0), l + 0.5 * 0.003 * 40.0, 1e-12);
}

TEST(Loss, NonNegativeAndPermutationInvariant)
{
    Rng rng(74);
    const GridGeometry g(16, 16, 0.234375, Pose());
    for (int trial = 0; trial < 20; ++trial)
    {
        PredictionGrids labels(g);
        LogitPlanes pred = planes_of(g.cell_count());
        for (std::size_t c = 0; c < g.cell_count(); ++c)
        {
            labels.p_path[c] = rng.bernoulli(0.1);
            labels.sin_theta[c] = static_cast<float>(rng.uniform(-1, 1));
            labels.cos_theta[c] = static_cast<float>(rng.uniform(-1, 1));
            pred.logit_off[c] = rng.uniform(-30, 30);
            pred.logit_on[c] = rng.uniform(-30, 30);
            pred.sin_theta[c] = rng.uniform(-1.2, 1.2);
            pred.cos_theta[c] = rng.uniform(-1.2, 1.2);
        }
        const TrainConfig cfg;
        const double base = loss(pred, labels, cfg, 3.0);
        EXPECT_GE(base, 0.0);

        std::vector<std::size_t> perm(g.cell_count());
        std::iota(perm.begin(), perm.end(), 0);
        for (std::size_t i = perm.size() - 1; i > 0; --i)
            std::swap(perm[i], perm[rng.index(i + 1)]);
        PredictionGrids l2(g);
        LogitPlanes p2 = planes_of(g.cell_count());
        for (std::size_t i = 0; i < perm.size(); ++i)
        {
            const std::size_t j = perm[i];
            l2.p_path[i] = labels.p_path[j];
            l2.sin_theta[i] = labels.sin_theta[j];
            l2.cos_theta[i] = labels.cos_theta[j];
            p2.logit_off[i] = pred.logit_off[j];
            p2.logit_on[i] = pred.logit_on[j];
            p2.sin_theta[i] = pred.sin_theta[j];
            p2.cos_theta[i] = pred.cos_theta[j];
        }
        EXPECT_NEAR(loss(p2, l2, cfg, 3.0), base, 1e-9 * base);
    }
}

TEST(Loss, ShapeMismatchThrows)
{
    PredictionGrids labels(GridGeometry(2, 2, 0.25, Pose()));
    EXPECT_THROW(loss(planes_of(3), labels, TrainConfig{}, 0.0), PreconditionError);
}

TEST(Loss, TrainDefaults)
{
    const TrainConfig cfg;
    EXPECT_EQ(cfg.gamma_ce, 25.0);
    EXPECT_EQ(cfg.gamma_mse, 25.0);
    EXPECT_EQ(cfg.lr, 1e-5);
    EXPECT_EQ(cfg.lrd, 0.01);
    EXPECT_EQ(cfg.l2_lambda, 0.003);
    EXPECT_EQ(cfg.batch, 20u);
}

TEST(Observe, WallHidesCellsBehindIt)
{
    OccupancyGrid full(GridGeometry::default_world());
    full.fill_box({5, 0}, 0.4, 6.0, 0.0, CellState::Occupied);
    const std::vector<Pose> obs{Pose(0, 0, 0)};
    const OccupancyGrid seen = observe(full, obs, 30.0, 720);
    const GridGeometry &g = full.geometry();
    EXPECT_EQ(seen.at(g.cell_of({0, 0})), CellState::Free);
    EXPECT_EQ(seen.at(g.cell_of({2, 1})), CellState::Free);
    EXPECT_EQ(seen.at(g.cell_of({4.85, 0})), CellState::Occupied);
    EXPECT_EQ(seen.at(g.cell_of({8, 0})), CellState::Unknown);
    EXPECT_EQ(seen.at(g.cell_of({-10, 10})), CellState::Free);
    EXPECT_EQ(seen.at(g.cell_of({-28, -28})), CellState::Unknown);
    // Never reveals something that is not there.
    for (std::size_t i = 0; i < full.cells().size(); ++i)
        if (seen.cells()[i] != CellState::Unknown)
            ASSERT_EQ(seen.cells()[i], full.cells()[i]);
    // A second observer behind the wall reveals it.
    const std::vector<Pose> two{Pose(0, 0, 0), Pose(10, 0, kPi)};
    EXPECT_EQ(observe(full, two).at(g.cell_of({8, 0})), CellState::Free);
    EXPECT_THROW(observe(full, obs, 0.0), PreconditionError);
}

TEST(Recording, SingleAugmentationOnStraightScenario)
{
    Scenario s;
    s.family = ScenarioFamily::Empty;
    s.grid = OccupancyGrid(GridGeometry::default_world());
    s.start = State{Pose(-10, 0, 0)};
    s.goal = State{Pose(10, 0, 0)};
    RecordingConfig cfg;
    cfg.augmentations = 1;
    cfg.planner.optimize_time = 0.5;
    cfg.seed = 3;
    const auto rec = make_recording(s, cfg);
    ASSERT_TRUE(rec.has_value());
    ASSERT_EQ(rec->examples.size(), 1u);
    EXPECT_EQ(rec->examples[0].split_index, 0u);

    std::vector<PoseSample> samples;
    for (const State &st : rec->trajectory.states())
        samples.push_back({st.pose, SampleSource::Uniform});
    EXPECT_LT(avg_path_deviation(line({-10, 0}, {10, 0}), samples), 0.2);
}

TEST(Recording, ExamplesConsistentWithTrajectory)
{
    const Scenario s = generate(ScenarioFamily::Passage, 2);
    RecordingConfig cfg;
    cfg.augmentations = 3;
    cfg.planner.optimize_time = 0.5;
    cfg.seed = 5;
    const auto rec = make_recording(s, cfg);
    ASSERT_TRUE(rec.has_value());
    ASSERT_EQ(rec->examples.size(), 3u);
    const OccupancyGrid &full = s.grid;
    for (const Example &ex : rec->examples)
    {
        ASSERT_LT(ex.split_index, rec->trajectory.size());
        EXPECT_EQ(ex.current, rec->trajectory.states()[ex.split_index]);
        EXPECT_EQ(ex.inputs.window, ex.labels.geometry);
        EXPECT_EQ(ex.inputs.window, prediction_window(ex.current.pose.position()));
        // Label cells follow the centerline, which keeps clear of every obstacle.
        const std::vector<std::uint8_t> pooled = pool_grid(full, ex.labels.geometry);
        std::size_t on = 0;
        for (std::size_t i = 0; i < pooled.size(); ++i)
            if (ex.labels.p_path[i] > 0.5f)
            {
                ++on;
                EXPECT_FALSE(pooled[i] & kPoolOccupied);
            }
        EXPECT_GE(on, 1u);
        EXPECT_EQ(ex.labels, encode_labels(rec->trajectory.suffix(ex.split_index), ex.labels.geometry));
        // Current marker is drawn at the window cell of the current state.
        EXPECT_EQ(ex.inputs.planes[3][ex.inputs.window.index(ex.inputs.window.cell_of(ex.current.pose.position()))],
                  static_cast<float>(std::clamp(ex.current.v / kMarkerVmax, -1.0, 1.0)));
    }
    const auto again = make_recording(s, cfg);
    ASSERT_TRUE(again.has_value());
    EXPECT_EQ(again->trajectory.states(), rec->trajectory.states());
    for (std::size_t k = 0; k < rec->examples.size(); ++k)
    {
        EXPECT_EQ(again->examples[k].split_index, rec->examples[k].split_index);
        EXPECT_EQ(again->examples[k].labels, rec->examples[k].labels);
        EXPECT_EQ(again->examples[k].inputs.planes, rec->examples[k].inputs.planes);
    }
}

TEST(DatasetIo, ScenarioRoundTrip)
{
    const fs::path dir = scratch_dir("scenario");
    const Scenario s = generate(ScenarioFamily::ParkingRow, 4);
    write_scenario(dir / "s.json", s, "grids/s.ogrid");
    EXPECT_TRUE(fs::exists(dir / "grids/s.ogrid"));
    const Scenario back = read_scenario(dir / "s.json");
    EXPECT_EQ(back.family, s.family);
    EXPECT_EQ(back.seed, s.seed);
    EXPECT_EQ(back.grid, s.grid);
    EXPECT_EQ(back.start, s.start);
    EXPECT_EQ(back.goal, s.goal);
    std::ofstream(dir / "bad.json") << "{\"family\": \"passage\"}";
    EXPECT_THROW(read_scenario(dir / "bad.json"), FormatError);
    EXPECT_THROW(read_scenario(dir / "missing.json"), FormatError);
}

TEST(DatasetIo, PlaneStackRoundTrip)
{
    const Scenario s = generate(ScenarioFamily::Maze, 1);
    const InputPlanes in = encode_inputs(s, Trajectory(std::vector<State>{s.start}),
                                         prediction_window(s.start.pose.position()));
    const PlaneStack stack = to_stack(in);
    ASSERT_EQ(stack.planes.size(), 5u);
    std::stringstream ss;
    write_planes(ss, stack);
    EXPECT_EQ(ss.str().size(), 4u + 12u + 4u + 24u + 5u * 4u * 256u * 256u);
    const PlaneStack back = read_planes(ss);
    EXPECT_EQ(back.geometry, stack.geometry);
    EXPECT_EQ(back.planes, stack.planes);
    std::stringstream bad("PLNX");
    EXPECT_THROW(read_planes(bad), FormatError);
}

TEST(DatasetIo, ManifestRoundTrip)
{
    const fs::path dir = scratch_dir("manifest");
    const std::vector<ManifestEntry> entries{{"passage-1-0", "scenarios/passage-1.json", "train", "a.plns", "a.pgrid"},
                                             {"passage-1-1", "scenarios/passage-1.json", "test", "b.plns", "b.pgrid"}};
    write_manifest(dir / "manifest.csv", entries);
    std::ifstream in(dir / "manifest.csv");
    std::string header;
    std::getline(in, header);
    EXPECT_EQ(header, kManifestHeader);
    const std::vector<ManifestEntry> back = read_manifest(dir / "manifest.csv");
    ASSERT_EQ(back.size(), 2u);
    EXPECT_EQ(back[1].example_id, "passage-1-1");
    EXPECT_EQ(back[1].split, "test");
    EXPECT_EQ(back[0].labels, "a.pgrid");
    EXPECT_THROW(write_manifest(dir / "x.csv", {{"a,b", "s", "train", "i", "l"}}), PreconditionError);
    std::ofstream(dir / "bad.csv") << "id,file\n";
    EXPECT_THROW(read_manifest(dir / "bad.csv"), FormatError);
}

TEST(DatasetIo, SplitProportions)
{
    const std::vector<std::string> a = assign_splits(100, 9);
    ASSERT_EQ(a.size(), 100u);
    EXPECT_EQ(std::count(a.begin(), a.end(), "train"), 64);
    EXPECT_EQ(std::count(a.begin(), a.end(), "val"), 16);
    EXPECT_EQ(std::count(a.begin(), a.end(), "test"), 20);
    EXPECT_EQ(assign_splits(100, 9), a);
    EXPECT_NE(assign_splits(100, 10), a);
    const std::vector<std::string> big = assign_splits(1000, 1);
    EXPECT_EQ(std::count(big.begin(), big.end(), "train"), 640);
    EXPECT_EQ(std::count(big.begin(), big.end(), "val"), 160);
}
