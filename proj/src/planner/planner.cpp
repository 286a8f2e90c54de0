#include <guidedplan/errors.hpp>
#include <guidedplan/planner.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>

namespace guidedplan
{

void PlannerConfig::validate() const
{
    if (!(max_initial_time > 0.0) || !(optimize_time >= 0.0))
        throw ConfigError("planner: time budgets must be positive");
    if (!(rewire_radius_base > 0.0))
        throw ConfigError("planner: rewire_radius_base must be positive");
    if (max_neighbors == 0)
        throw ConfigError("planner: max_neighbors must be positive");
    if (!(max_extension > 0.0))
        throw ConfigError("planner: max_extension must be positive");
    if (!(collision_step > 0.0))
        throw ConfigError("planner: collision_step must be positive");
    if (!(collision_margin >= 0.0))
        throw ConfigError("planner: collision_margin must be non-negative");
    if (!(trace_rate > 0.0))
        throw ConfigError("planner: trace_rate must be positive");
    if (clock == ClockMode::Virtual && !(virtual_iteration_s > 0.0))
        throw ConfigError("planner: virtual_iteration_s must be positive");
    sampler_config.validate();
    vehicle.validate();
}

namespace
{

VehicleParams with_margin(VehicleParams v, double margin)
{
    v.hard_buffer += margin;
    return v;
}

int direction_of(const State &s) { return s.v < 0.0 ? -1 : 1; }

// Lower bound on an edge cost from its steering length; chords undercut arcs slightly.
constexpr double kChordSlack = 1.0 - 1e-4;

} // namespace

Planner::Planner(const CostMap &map, const State &start, const State &goal, const PlannerConfig &config)
    : map_(&map), start_(start), goal_(goal), config_(config),
      checker_(map, with_margin(config.vehicle, config.collision_margin))
{
    config_.validate();
    if (checker_.collides(start.pose))
        throw PreconditionError("planner: start state is in collision");
    if (checker_.collides(goal.pose))
        throw PreconditionError("planner: goal state is in collision");

    const Extent extent = map.geometry().extent();
    trees_[0] = std::make_unique<Tree>(start, false, extent, config_.cost_weights.w_cusp);
    trees_[1] = std::make_unique<Tree>(goal, true, extent, config_.cost_weights.w_cusp);

    // gamma = 2 (1 + 1/d)^(1/d) (mu_free / zeta_d)^(1/d), d = 3, measured in the
    // weighted pose metric.
    std::size_t free_cells = 0;
    const GridGeometry &g = map.geometry();
    for (int iy = 0; iy < g.height(); ++iy)
        for (int ix = 0; ix < g.width(); ++ix)
            free_cells += map.blocked({ix, iy}) ? 0 : 1;
    const double res = g.resolution();
    const double w_pos = config_.metric.w_pos;
    const double mu_free = free_cells * res * res * w_pos * w_pos * kTwoPi * config_.metric.w_theta;
    const double zeta = 4.0 / 3.0 * kPi;
    gamma_ = 2.0 * std::cbrt(4.0 / 3.0) * std::cbrt(mu_free / zeta);
}

double Planner::near_radius(std::size_t n) const
{
    const double nn = static_cast<double>(std::max<std::size_t>(n, 2));
    const double r = config_.rewire_radius_base * gamma_ * std::cbrt(std::log(nn) / nn);
    const Extent e = map_->geometry().extent();
    return std::min(r, config_.metric.w_pos * std::hypot(e.width(), e.height()));
}

std::optional<Edge> Planner::make_edge(const SteeringPath &path) const
{
    if (path.segments().empty())
        return std::nullopt;
    const std::vector<State> states = discretize(path, config_.collision_step);
    for (const State &s : states)
        if (checker_.collides(s.pose))
            return std::nullopt;
    Edge e;
    e.cost = path_cost(states, *map_, config_.cost_weights);
    e.first_dir = direction_of(states.front());
    e.last_dir = direction_of(states.back());
    e.path = path;
    return e;
}

std::optional<Edge> Planner::make_edge(const Pose &from, const Pose &to) const
{
    return make_edge(steer(from, to, config_.steering, config_.vehicle));
}

void Planner::extend(int which, const Pose &sample)
{
    Tree &tree = *trees_[which];
    const bool rev = tree.reversed();
    const SteeringFamily family = config_.steering;
    const VehicleParams &vehicle = config_.vehicle;

    const int nearest = tree.index().nearest(sample);
    const Pose &np = tree.vertex(nearest).state.pose;
    const SteeringPath to_sample = rev ? steer(sample, np, family, vehicle) : steer(np, sample, family, vehicle);
    if (to_sample.length() < 1e-9)
        return;
    Pose target = sample;
    const double eta = config_.max_extension;
    if (to_sample.length() > eta)
        target = rev ? to_sample.state_at(to_sample.length() - eta).pose : to_sample.state_at(eta).pose;
    if (checker_.collides(target))
        return;

    std::vector<std::pair<double, int>> near =
        tree.index().near(target, near_radius(tree.size() + 1), config_.max_neighbors);
    if (std::none_of(near.begin(), near.end(), [&](const auto &p) { return p.second == nearest; }))
        near.emplace_back(pose_distance(target, np, config_.metric), nearest);

    struct Candidate
    {
        double bound;
        int id;
        SteeringPath path;
    };
    std::vector<Candidate> candidates;
    candidates.reserve(near.size());
    for (const auto &[d, id] : near)
    {
        const Pose &p = tree.vertex(id).state.pose;
        SteeringPath path = rev ? steer(target, p, family, vehicle) : steer(p, target, family, vehicle);
        if (path.length() < 1e-9)
            return;
        candidates.push_back({tree.vertex(id).cost + kChordSlack * path.length(), id, std::move(path)});
    }
    std::sort(candidates.begin(), candidates.end(),
              [](const Candidate &a, const Candidate &b) { return a.bound != b.bound ? a.bound < b.bound : a.id < b.id; });

    int parent = -1;
    double best = std::numeric_limits<double>::infinity();
    std::optional<Edge> best_edge;
    for (const Candidate &c : candidates)
    {
        if (c.bound >= best)
            break;
        std::optional<Edge> edge = make_edge(c.path);
        if (!edge)
            continue;
        const double cost = tree.cost_via(c.id, *edge);
        if (cost < best)
        {
            best = cost;
            parent = c.id;
            best_edge = std::move(edge);
        }
    }
    if (parent < 0)
        return;

    const int id = tree.add(parent, State{target, 0.0, 0.0}, std::move(*best_edge));

    for (const auto &[d, x] : near)
    {
        if (x == parent || tree.vertex(x).parent < 0)
            continue;
        const Pose &p = tree.vertex(x).state.pose;
        SteeringPath path = rev ? steer(p, target, family, vehicle) : steer(target, p, family, vehicle);
        if (tree.vertex(id).cost + kChordSlack * path.length() >= tree.vertex(x).cost)
            continue;
        std::optional<Edge> edge = make_edge(path);
        if (edge)
            tree.rewire(x, id, std::move(*edge));
    }

    try_connect(which, id);
}

void Planner::try_connect(int which, int vertex)
{
    const Tree &tree = *trees_[which];
    const Tree &other = *trees_[1 - which];
    const Pose &p = tree.vertex(vertex).state.pose;
    const SteeringFamily family = config_.steering;
    const VehicleParams &vehicle = config_.vehicle;

    std::vector<std::pair<double, int>> near =
        other.index().near(p, near_radius(other.size() + 1), config_.max_neighbors);
    const int nearest = other.index().nearest(p);
    if (std::none_of(near.begin(), near.end(), [&](const auto &q) { return q.second == nearest; }))
        near.emplace_back(0.0, nearest);

    struct Candidate
    {
        double bound;
        int id;
        SteeringPath path;
    };
    std::vector<Candidate> candidates;
    for (const auto &[d, u] : near)
    {
        const Pose &q = other.vertex(u).state.pose;
        SteeringPath path = which == 0 ? steer(p, q, family, vehicle) : steer(q, p, family, vehicle);
        const double bound = tree.vertex(vertex).cost + other.vertex(u).cost + kChordSlack * path.length();
        candidates.push_back({bound, u, std::move(path)});
    }
    std::sort(candidates.begin(), candidates.end(),
              [](const Candidate &a, const Candidate &b) { return a.bound != b.bound ? a.bound < b.bound : a.id < b.id; });

    std::size_t attempts = 0;
    for (const Candidate &c : candidates)
    {
        if (c.bound >= best_cost_ || attempts >= config_.max_connect_attempts)
            break;
        ++attempts;
        std::optional<Edge> edge;
        if (c.path.segments().empty())
        {
            // Coincident vertices: join them with an empty edge.
            edge = Edge{c.path, 0.0, 0, 0};
        }
        else
        {
            edge = make_edge(c.path);
            if (!edge)
                continue;
        }
        Connection conn = which == 0 ? Connection{vertex, c.id, std::move(*edge)} : Connection{c.id, vertex, std::move(*edge)};
        connections_.push_back(std::move(conn));
    }
}

double Planner::connection_cost(const Connection &c) const
{
    const Tree &s = *trees_[0];
    const Tree &g = *trees_[1];
    if (c.edge.path.segments().empty())
    {
        const Vertex &a = s.vertex(c.start_vertex);
        const Vertex &b = g.vertex(c.goal_vertex);
        const bool cusp = a.parent >= 0 && b.parent >= 0 && a.edge.last_dir != b.edge.first_dir;
        return a.cost + b.cost + (cusp ? config_.cost_weights.w_cusp : 0.0);
    }
    return s.cost_via(c.start_vertex, c.edge) + g.cost_via(c.goal_vertex, c.edge) - c.edge.cost;
}

void Planner::refresh_best()
{
    for (std::size_t i = 0; i < connections_.size(); ++i)
    {
        const double cost = connection_cost(connections_[i]);
        if (cost < best_cost_)
        {
            best_cost_ = cost;
            best_connection_ = static_cast<int>(i);
        }
    }
}

std::vector<State> Planner::extract(const Connection &c) const
{
    std::vector<State> out;
    auto append = [&](const SteeringPath &path) {
        if (path.segments().empty())
            return;
        const std::vector<State> states = discretize(path, config_.collision_step);
        out.insert(out.end(), states.begin() + (out.empty() ? 0 : 1), states.end());
    };
    const Tree &s = *trees_[0];
    const Tree &g = *trees_[1];
    for (int id : s.path_to_root(c.start_vertex))
        if (s.vertex(id).parent >= 0)
            append(s.vertex(id).edge.path);
    append(c.edge.path);
    for (int id = c.goal_vertex; g.vertex(id).parent >= 0; id = g.vertex(id).parent)
        append(g.vertex(id).edge.path);
    if (out.empty())
        out.push_back(start_);
    return out;
}

PlanResult Planner::plan(Sampler &sampler)
{
    using Clock = std::chrono::steady_clock;
    const auto t0 = Clock::now();
    PlanResult result;
    std::size_t iterations = 0;
    auto now = [&] {
        if (config_.clock == ClockMode::Virtual)
            return static_cast<double>(iterations) * config_.virtual_iteration_s;
        return std::chrono::duration<double>(Clock::now() - t0).count();
    };

    const double tick = 1.0 / config_.trace_rate;
    std::size_t next_tick = 0;
    auto record_ticks = [&](double t) {
        while (static_cast<double>(next_tick) * tick <= t)
        {
            result.trace.push_back({static_cast<double>(next_tick) * tick, best_cost_});
            ++next_tick;
        }
    };

    bool solved = false;
    if ((start_.pose.position() - goal_.pose.position()).norm() <= config_.goal_tolerance_pos &&
        angle_distance(start_.pose.theta(), goal_.pose.theta()) <= config_.goal_tolerance_theta)
    {
        connections_.push_back({0, 0, Edge{}});
        refresh_best();
        solved = true;
        result.ttfs = 0.0;
        result.first_solution_cost = best_cost_;
    }

    int active = 0;
    while (true)
    {
        const double t = now();
        if (!solved && t >= config_.max_initial_time)
            break;
        if (solved && t >= result.ttfs + config_.optimize_time)
            break;
        record_ticks(t);

        const PoseSample sample = sampler.draw(t);
        if (!checker_.collides(sample.pose))
            extend(active, sample.pose);
        ++iterations;
        refresh_best();
        cost_history_.push_back(best_cost_);
        if (!solved && best_connection_ >= 0)
        {
            solved = true;
            result.ttfs = now();
            result.first_solution_cost = best_cost_;
        }
        // Swap every second iteration so alternating mixed draws reach both trees.
        active = static_cast<int>((iterations / 2) % 2);
    }
    result.elapsed_s = now();
    record_ticks(result.elapsed_s);
    result.iterations = iterations;
    result.n_vertices = trees_[0]->size() + trees_[1]->size();

    if (best_connection_ >= 0)
    {
        result.path = extract(connections_[best_connection_]);
        result.cost = path_cost(result.path, *map_, config_.cost_weights);
        result.final_cost = best_cost_;
        result.n_cusps = count_cusps(result.path);
        result.length = arc_length(result.path);
        const State &last = result.path.back();
        result.success = (last.pose.position() - goal_.pose.position()).norm() <= config_.goal_tolerance_pos &&
                         angle_distance(last.pose.theta(), goal_.pose.theta()) <= config_.goal_tolerance_theta;
    }
    return result;
}

PlanResult plan(const CostMap &map, const State &start, const State &goal, Sampler &sampler,
                const PlannerConfig &config)
{
    Planner planner(map, start, goal, config);
    return planner.plan(sampler);
}

PlanResult plan(const Scenario &scenario, Sampler &sampler, const PlannerConfig &config)
{
    const CostMap map = inflate(scenario.grid, config.inflation_radius);
    return plan(map, scenario.start, scenario.goal, sampler, config);
}

bool path_collision_free(const std::vector<State> &path, const CostMap &map, const VehicleParams &vehicle,
                         double step)
{
    if (path.empty())
        return true;
    if (!(step > 0.0))
        throw PreconditionError("path_collision_free: step must be positive");
    for (std::size_t i = 0; i + 1 < path.size(); ++i)
    {
        const Pose &a = path[i].pose;
        const Pose &b = path[i + 1].pose;
        const double d = (b.position() - a.position()).norm();
        const int n = std::max(1, static_cast<int>(std::ceil(d / step)));
        const double dtheta = normalize_angle(b.theta() - a.theta());
        for (int j = 0; j < n; ++j)
        {
            const double t = static_cast<double>(j) / n;
            const Pose p(a.position() + t * (b.position() - a.position()), a.theta() + t * dtheta);
            if (collides(State{p, 0.0, 0.0}, map, vehicle))
                return false;
        }
    }
    return !collides(path.back(), map, vehicle);
}

} // namespace guidedplan
