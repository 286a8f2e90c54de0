#include <guidedplan/collision.hpp>
#include <guidedplan/dataset.hpp>
#include <guidedplan/errors.hpp>
#include <guidedplan/rng.hpp>

#include <array>
#include <cmath>
#include <deque>
#include <functional>
#include <string>

namespace guidedplan
{

ScenarioFamily parse_family(std::string_view name)
{
    if (name == "empty")
        return ScenarioFamily::Empty;
    if (name == "passage")
        return ScenarioFamily::Passage;
    if (name == "blocked_intersection")
        return ScenarioFamily::BlockedIntersection;
    if (name == "parking_row")
        return ScenarioFamily::ParkingRow;
    if (name == "maze")
        return ScenarioFamily::Maze;
    throw ConfigError("unknown scenario family '" + std::string(name) + "'");
}

std::string_view to_string(ScenarioFamily family)
{
    switch (family)
    {
    case ScenarioFamily::Empty:
        return "empty";
    case ScenarioFamily::Passage:
        return "passage";
    case ScenarioFamily::BlockedIntersection:
        return "blocked_intersection";
    case ScenarioFamily::ParkingRow:
        return "parking_row";
    case ScenarioFamily::Maze:
        return "maze";
    }
    throw ConfigError("invalid scenario family value");
}

std::string Scenario::name() const { return std::string(to_string(family)) + "-" + std::to_string(seed); }

bool clearance_connected(const CostMap &map, Vec2 from, Vec2 to, double threshold)
{
    const GridGeometry &g = map.geometry();
    const CellIndex a = g.cell_of(from);
    const CellIndex b = g.cell_of(to);
    if (!g.contains(a) || !g.contains(b))
        return false;
    auto passable = [&](CellIndex c) { return map.clearance(c) >= threshold; };
    if (!passable(a) || !passable(b))
        return false;
    std::vector<std::uint8_t> seen(g.cell_count(), 0);
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
                if ((dx == 0 && dy == 0) || !g.contains(n) || seen[g.index(n)] || !passable(n))
                    continue;
                seen[g.index(n)] = 1;
                queue.push_back(n);
            }
    }
    return false;
}

namespace
{

// Multiple of the grid resolution so that obstacle edges fall on cell boundaries.
double snap(double v) { return std::round(v * 10.0) / 10.0; }

class Builder
{
  public:
    Builder(ScenarioFamily family, std::uint64_t seed, const GenerateOptions &options)
        : family_(family), seed_(seed), options_(options), rng_(mix_seed(seed, static_cast<std::uint64_t>(family)))
    {
        checker_vehicle_ = options.vehicle;
        checker_vehicle_.hard_buffer += 0.01;
    }

    Scenario build()
    {
        for (int attempt = 0; attempt < options_.max_retries; ++attempt)
        {
            grid_ = OccupancyGrid(GridGeometry::default_world());
            layout();
            map_ = inflate(grid_, 0.25);
            if (place_endpoints() &&
                clearance_connected(map_, start_.pose.position(), goal_.pose.position(), required_clearance()))
            {
                Scenario s;
                s.family = family_;
                s.seed = seed_;
                s.grid = std::move(grid_);
                s.start = start_;
                s.goal = goal_;
                return s;
            }
        }
        throw GenerationError("no valid " + std::string(to_string(family_)) + " layout for seed " +
                              std::to_string(seed_));
    }

  private:
    void box(Vec2 center, double length, double width, double theta = 0.0)
    {
        grid_.fill_box(center, length, width, theta, CellState::Occupied);
    }
    void free_box(Vec2 center, double length, double width)
    {
        grid_.fill_box(center, length, width, 0.0, CellState::Free);
    }

    void layout()
    {
        switch (family_)
        {
        case ScenarioFamily::Empty:
            break;
        case ScenarioFamily::Passage:
            layout_passage();
            break;
        case ScenarioFamily::BlockedIntersection:
            layout_intersection();
            break;
        case ScenarioFamily::ParkingRow:
            layout_parking();
            break;
        case ScenarioFamily::Maze:
            layout_maze();
            break;
        }
    }

    void layout_passage()
    {
        gap_center_ = snap(rng_.uniform(-4.0, 4.0));
        const double g = options_.passage_gap;
        const double t = options_.passage_wall;
        const double lower_top = gap_center_ - 0.5 * g;
        const double upper_bottom = gap_center_ + 0.5 * g;
        box({0.0, 0.5 * (-30.0 + lower_top)}, t, lower_top + 30.0);
        box({0.0, 0.5 * (30.0 + upper_bottom)}, t, 30.0 - upper_bottom);
    }

    void layout_intersection()
    {
        road_y_ = snap(rng_.uniform(-3.0, 3.0));
        stem_x_ = snap(rng_.uniform(-5.0, 5.0));
        side_ = rng_.bernoulli(0.5) ? 1.0 : -1.0;
        for (CellState &c : grid_.cells())
            c = CellState::Occupied;
        free_box({0.0, road_y_}, 60.0, 8.0);
        free_box({stem_x_, 0.5 * (road_y_ + 4.0 + 30.0)}, 8.0, 30.0 - road_y_ - 4.0 + 0.2);
        // Blocking object inside the junction on the turn side.
        const Vec2 c{stem_x_ + side_ * rng_.uniform(1.0, 2.5), road_y_ - rng_.uniform(0.0, 1.5)};
        box(c, rng_.uniform(2.0, 3.0), rng_.uniform(2.0, 2.6), rng_.uniform(-0.3, 0.3));
    }

    void layout_parking()
    {
        static constexpr std::array<double, 4> kAngles = {0.0, 45.0, 75.0, 90.0};
        const double alpha = kAngles[rng_.index(kAngles.size())] * kPi / 180.0;
        const double front = -6.0;
        const double car_l = 4.8;
        const double car_w = 2.0;

        box({0.0, 0.5 * (-30.0 + front - 5.8)}, 60.0, 30.0 + front - 5.8);
        const double aisle_top = snap(4.0 + rng_.uniform(0.0, 2.0));
        box({0.0, 0.5 * (aisle_top + 30.0)}, 60.0, 30.0 - aisle_top);

        double pitch = 0.0;
        double heading = 0.0;
        double depth = 0.0;   // entrance to car center along the heading
        if (alpha == 0.0)
        {
            pitch = 7.5;
            heading = 0.0;
        }
        else
        {
            pitch = 3.0 / std::sin(alpha);
            heading = -alpha;
            depth = 0.5 * car_l + 0.3;
        }
        const int n = static_cast<int>(std::floor(56.0 / pitch));
        const int empty = static_cast<int>(rng_.index(static_cast<std::uint64_t>(n)));
        for (int i = 0; i < n; ++i)
        {
            const double x = -28.0 + (i + 0.5) * pitch;
            Vec2 center;
            if (alpha == 0.0)
                center = {x, front - 0.5 * car_w - 0.3};
            else
                center = Vec2{x, front} + depth * unit(heading);
            if (i == empty)
            {
                // Park nose-in: rear axle sits center_offset behind the stall center.
                goal_hint_ = Pose(center - options_.vehicle.center_offset() * unit(heading), heading);
                continue;
            }
            box(center, car_l, car_w, heading);
        }
    }

    void layout_maze()
    {
        const double target = rng_.uniform(0.10, 0.20);
        const std::size_t total = grid_.cells().size();
        while (static_cast<double>(grid_.count(CellState::Occupied)) / static_cast<double>(total) < target)
        {
            const Vec2 c{rng_.uniform(-28.0, 28.0), rng_.uniform(-28.0, 28.0)};
            box(c, rng_.uniform(1.0, 5.0), rng_.uniform(1.0, 5.0), rng_.uniform(-kPi, kPi));
        }
    }

    double required_clearance() const
    {
        return family_ == ScenarioFamily::Maze ? std::max(options_.min_clearance, options_.maze_clearance)
                                               : options_.min_clearance;
    }

    bool valid(const Pose &p) const
    {
        const GridGeometry &g = map_.geometry();
        if (!g.contains(g.cell_of(p.position())))
            return false;
        if (map_.clearance_at(p.position()) < required_clearance())
            return false;
        return !collides(State{p, 0.0, 0.0}, map_, checker_vehicle_);
    }

    static bool in_window(const Pose &a, const Pose &b)
    {
        return std::abs(a.x() - b.x()) <= 29.0 && std::abs(a.y() - b.y()) <= 29.0;
    }

    bool draw_pair(const std::function<Pose()> &draw_start, const std::function<Pose()> &draw_goal)
    {
        for (int i = 0; i < 200; ++i)
        {
            const Pose s = draw_start();
            if (!valid(s))
                continue;
            for (int j = 0; j < 50; ++j)
            {
                const Pose g = draw_goal();
                if (valid(g) && in_window(s, g) && (g.position() - s.position()).norm() > 3.0)
                {
                    start_ = State{s, 0.0, 0.0};
                    goal_ = State{g, 0.0, 0.0};
                    return true;
                }
            }
        }
        return false;
    }

    bool place_endpoints()
    {
        switch (family_)
        {
        case ScenarioFamily::Empty:
        case ScenarioFamily::Maze: {
            Pose s_hint;
            return draw_pair(
                [&] {
                    s_hint = Pose(rng_.uniform(-24.0, 24.0), rng_.uniform(-24.0, 24.0), rng_.uniform(-kPi, kPi));
                    return s_hint;
                },
                [&] {
                    const double d = rng_.uniform(12.0, 26.0);
                    const double a = rng_.uniform(-kPi, kPi);
                    return Pose(s_hint.position() + d * unit(a), rng_.uniform(-kPi, kPi));
                });
        }
        case ScenarioFamily::Passage:
            return draw_pair(
                [&] {
                    return Pose(-16.0 + rng_.uniform(-1.0, 1.0), gap_center_ + rng_.uniform(-3.0, 3.0),
                                rng_.uniform(-0.2, 0.2));
                },
                [&] {
                    return Pose(10.0 + rng_.uniform(-1.0, 1.0), gap_center_ + rng_.uniform(-1.5, 1.5),
                                rng_.uniform(-0.2, 0.2));
                });
        case ScenarioFamily::BlockedIntersection:
            return draw_pair(
                [&] {
                    return Pose(stem_x_ + rng_.uniform(-1.5, 1.5), rng_.uniform(15.0, 22.0),
                                -0.5 * kPi + rng_.uniform(-0.2, 0.2));
                },
                [&] {
                    const double heading = side_ > 0.0 ? 0.0 : kPi;
                    return Pose(stem_x_ + side_ * rng_.uniform(12.0, 18.0), road_y_ + rng_.uniform(-1.5, 1.5),
                                heading + rng_.uniform(-0.2, 0.2));
                });
        case ScenarioFamily::ParkingRow:
            return draw_pair(
                [&] {
                    const double x = goal_hint_.x() - rng_.uniform(12.0, 20.0);
                    return Pose(x, -1.0 + rng_.uniform(-1.0, 1.0), rng_.uniform(-0.2, 0.2));
                },
                [&] { return goal_hint_; });
        }
        return false;
    }

    ScenarioFamily family_;
    std::uint64_t seed_;
    GenerateOptions options_;
    VehicleParams checker_vehicle_;
    Rng rng_;
    OccupancyGrid grid_;
    CostMap map_;
    State start_;
    State goal_;
    double gap_center_ = 0.0;
    double road_y_ = 0.0;
    double stem_x_ = 0.0;
    double side_ = 1.0;
    Pose goal_hint_;
};

} // namespace

Scenario generate(ScenarioFamily family, std::uint64_t seed, const GenerateOptions &options)
{
    return Builder(family, seed, options).build();
}

} // namespace guidedplan
