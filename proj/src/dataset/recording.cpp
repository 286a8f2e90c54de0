#include <guidedplan/dataset.hpp>
#include <guidedplan/errors.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>

namespace guidedplan
{

OccupancyGrid observe(const OccupancyGrid &full, std::span<const Pose> observers, double range, int rays)
{
    if (!(range > 0.0) || rays <= 0)
        throw PreconditionError("observe: range and ray count must be positive");
    const GridGeometry &g = full.geometry();
    OccupancyGrid seen(g, CellState::Unknown);
    const double step = 0.5 * g.resolution();
    const int steps = static_cast<int>(std::ceil(range / step));
    for (const Pose &obs : observers)
    {
        for (int k = 0; k < rays; ++k)
        {
            const Vec2 dir = unit(2.0 * std::numbers::pi * k / rays + obs.theta());
            for (int i = 0; i <= steps; ++i)
            {
                const CellIndex c = g.cell_of(obs.position() + std::min(i * step, range) * dir);
                if (!g.contains(c))
                    break;
                const CellState s = full.at(c);
                seen.set(c, s);
                if (s != CellState::Free)
                    break;
            }
        }
    }
    return seen;
}

namespace
{

std::vector<Pose> observer_poses(const Trajectory &prefix, double spacing)
{
    std::vector<Pose> out;
    const auto &states = prefix.states();
    const auto &arc = prefix.arc_length();
    double last = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < states.size(); ++i)
    {
        if (arc[i] - last >= spacing || i + 1 == states.size())
        {
            out.push_back(states[i].pose);
            last = arc[i];
        }
    }
    return out;
}

std::optional<PlanResult> guided_plan(const Scenario &scenario, const PlannerConfig &config)
{
    const CostMap map = inflate(scenario.grid, config.inflation_radius);
    std::unique_ptr<GuidedSource> guide;
    try
    {
        guide = std::make_unique<OseSource>(explore(map, scenario.start.pose, scenario.goal.pose));
    }
    catch (const ExplorationFailed &e)
    {
        guide = std::make_unique<FailedSource>("ose", e.what());
    }
    catch (const PreconditionError &e)
    {
        guide = std::make_unique<FailedSource>("ose", e.what());
    }
    SamplerConfig sc = config.sampler_config;
    sc.rng_seed = mix_seed(config.rng_seed, 1);
    auto uniform = std::make_unique<UniformSampler>(scenario.grid.geometry().extent(), scenario.goal.pose,
                                                    sc.goal_bias, mix_seed(config.rng_seed, 2));
    MixedStream stream(std::move(guide), std::move(uniform), sc);
    PlanResult result = plan(map, scenario.start, scenario.goal, stream, config);
    if (!result.success)
        return std::nullopt;
    return result;
}

} // namespace

std::vector<State> shortcut_path(const std::vector<State> &path, const CostMap &map, const PlannerConfig &config,
                                 double spacing)
{
    if (path.size() < 3)
        return path;
    std::vector<std::size_t> anchors{0};
    double since = 0.0;
    for (std::size_t i = 1; i + 1 < path.size(); ++i)
    {
        since += (path[i].pose.position() - path[i - 1].pose.position()).norm();
        if (since >= spacing)
        {
            anchors.push_back(i);
            since = 0.0;
        }
    }
    anchors.push_back(path.size() - 1);

    VehicleParams vehicle = config.vehicle;
    vehicle.hard_buffer += config.collision_margin;
    const CollisionChecker checker(map, vehicle);
    auto stretch_cost = [&](std::size_t a, std::size_t b) {
        return path_cost(std::span<const State>(path.data() + a, b - a + 1), map, config.cost_weights);
    };

    const std::size_t n = anchors.size();
    std::vector<double> best(n, std::numeric_limits<double>::infinity());
    std::vector<std::size_t> from(n, 0);
    std::vector<std::vector<State>> link(n);
    best[0] = 0.0;
    for (std::size_t j = 1; j < n; ++j)
    {
        for (std::size_t i = 0; i < j; ++i)
        {
            const double original = stretch_cost(anchors[i], anchors[j]);
            if (i + 1 == j)
            {
                if (best[i] + original < best[j])
                {
                    best[j] = best[i] + original;
                    from[j] = i;
                    link[j].clear();
                }
                continue;
            }
            const SteeringPath direct =
                steer(path[anchors[i]].pose, path[anchors[j]].pose, config.steering, config.vehicle);
            if (direct.length() >= arc_length(std::span<const State>(path.data() + anchors[i],
                                                                     anchors[j] - anchors[i] + 1)))
                continue;
            std::vector<State> states = discretize(direct, config.collision_step);
            const double cost = path_cost(states, map, config.cost_weights);
            if (!(best[i] + cost < best[j]) || !(cost < original))
                continue;
            if (std::any_of(states.begin(), states.end(), [&](const State &s) { return checker.collides(s.pose); }))
                continue;
            best[j] = best[i] + cost;
            from[j] = i;
            link[j] = std::move(states);
        }
    }

    std::vector<std::size_t> chain{n - 1};
    while (chain.back() != 0)
        chain.push_back(from[chain.back()]);
    std::reverse(chain.begin(), chain.end());
    std::vector<State> out{path.front()};
    for (std::size_t k = 1; k < chain.size(); ++k)
    {
        const std::size_t j = chain[k];
        if (link[j].empty())
            out.insert(out.end(), path.begin() + anchors[chain[k - 1]] + 1, path.begin() + anchors[j] + 1);
        else
            out.insert(out.end(), link[j].begin() + 1, link[j].end());
    }
    return out;
}

std::optional<Trajectory> reference_trajectory(const Scenario &scenario, const PlannerConfig &config)
{
    std::optional<PlanResult> result = guided_plan(scenario, config);
    if (!result)
        return std::nullopt;
    const CostMap map = inflate(scenario.grid, config.inflation_radius);
    return Trajectory(shortcut_path(result->path, map, config));
}

std::optional<Recording> make_recording(const Scenario &scenario, const RecordingConfig &config)
{
    PlannerConfig pc = config.planner;
    pc.rng_seed = mix_seed(config.seed, 11);
    std::optional<PlanResult> result = guided_plan(scenario, pc);
    if (!result)
        return std::nullopt;

    Recording rec;
    rec.plan = std::move(*result);
    rec.trajectory = Trajectory(rec.plan.path);
    const std::size_t n = rec.trajectory.size();
    if (n == 0)
        return std::nullopt;

    Rng rng(mix_seed(config.seed, 12));
    for (std::size_t a = 0; a < config.augmentations; ++a)
    {
        Example ex;
        ex.split_index = a == 0 ? 0 : static_cast<std::size_t>(rng.index(n));
        ex.current = rec.trajectory.states()[ex.split_index];
        const Trajectory past = rec.trajectory.prefix(ex.split_index + 1);
        const std::vector<Pose> observers = observer_poses(past, config.observer_spacing);
        const OccupancyGrid observed = observe(scenario.grid, observers, config.los_range, config.los_rays);
        const GridGeometry window = prediction_window(ex.current.pose.position());
        ex.inputs = encode_inputs(observed, past, ex.current, scenario.goal, window);
        ex.labels = encode_labels(rec.trajectory.suffix(ex.split_index), window);
        rec.examples.push_back(std::move(ex));
    }
    return rec;
}

} // namespace guidedplan
