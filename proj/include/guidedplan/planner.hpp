#pragma once

#include <guidedplan/collision.hpp>
#include <guidedplan/costmap.hpp>
#include <guidedplan/path_cost.hpp>
#include <guidedplan/sampling.hpp>
#include <guidedplan/scenario.hpp>
#include <guidedplan/steering.hpp>
#include <guidedplan/tree.hpp>
#include <guidedplan/vehicle.hpp>

#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace guidedplan
{

enum class ClockMode
{
    /// Planning time advances a fixed amount per iteration (deterministic).
    Virtual,
    /// Planning time is measured with a steady clock.
    Wall,
};

/// Seconds per planner iteration under the virtual clock, calibrated on the
/// passage benchmark against wall time on a single core.
inline constexpr double kVirtualIterationSeconds = 1.0e-4;

struct PlannerConfig
{
    double max_initial_time = 10.0;
    double optimize_time = 3.0;
    SteeringFamily steering = SteeringFamily::Dubins;
    double rewire_radius_base = 1.0;   ///< multiplier on gamma * (log n / n)^(1/3)
    std::size_t max_neighbors = 24;
    double max_extension = 6.0;        ///< steering length of a single extension, m
    double collision_step = 0.1;
    /// Added to the vehicle buffer while planning so finer re-checks stay collision-free.
    double collision_margin = 0.01;
    double goal_tolerance_pos = 0.05;
    double goal_tolerance_theta = 0.02;
    double inflation_radius = 0.25;
    double trace_rate = 10.0;          ///< Hz
    std::size_t max_connect_attempts = 4;
    SamplerConfig sampler_config;
    CostWeights cost_weights;
    VehicleParams vehicle;
    MetricConfig metric;
    std::uint64_t rng_seed = 0;
    ClockMode clock = ClockMode::Virtual;
    double virtual_iteration_s = kVirtualIterationSeconds;

    void validate() const;
};

struct TracePoint
{
    double time_s = 0.0;
    double cost = std::numeric_limits<double>::infinity();   ///< inf before the first solution
};

struct PlanResult
{
    std::vector<State> path;
    double cost = std::numeric_limits<double>::infinity();
    double ttfs = std::numeric_limits<double>::quiet_NaN();
    std::size_t n_vertices = 0;
    int n_cusps = 0;
    double length = 0.0;
    bool success = false;
    double first_solution_cost = std::numeric_limits<double>::infinity();
    double final_cost = std::numeric_limits<double>::infinity();
    std::vector<TracePoint> trace;   ///< best cost sampled at trace_rate
    std::size_t iterations = 0;
    double elapsed_s = 0.0;          ///< planning time on the configured clock
};

/// Bidirectional RRT* over exact steering edges.
class Planner
{
  public:
    /// Throws PreconditionError if start or goal collide.
    Planner(const CostMap &map, const State &start, const State &goal, const PlannerConfig &config);

    PlanResult plan(Sampler &sampler);

    const Tree &start_tree() const { return *trees_[0]; }
    const Tree &goal_tree() const { return *trees_[1]; }
    const CostMap &map() const { return *map_; }

    /// Best known solution cost after each iteration (for invariant checks).
    const std::vector<double> &cost_history() const { return cost_history_; }

  private:
    struct Connection
    {
        int start_vertex;
        int goal_vertex;
        Edge edge;
    };

    std::optional<Edge> make_edge(const Pose &from, const Pose &to) const;
    std::optional<Edge> make_edge(const SteeringPath &path) const;
    double near_radius(std::size_t n) const;
    void extend(int which, const Pose &sample);
    void try_connect(int which, int vertex);
    double connection_cost(const Connection &c) const;
    std::vector<State> extract(const Connection &c) const;
    void refresh_best();

    const CostMap *map_;
    State start_;
    State goal_;
    PlannerConfig config_;
    CollisionChecker checker_;
    double gamma_;
    std::unique_ptr<Tree> trees_[2];
    std::vector<Connection> connections_;
    int best_connection_ = -1;
    double best_cost_ = std::numeric_limits<double>::infinity();
    std::vector<double> cost_history_;
};

PlanResult plan(const CostMap &map, const State &start, const State &goal, Sampler &sampler,
                const PlannerConfig &config);
PlanResult plan(const Scenario &scenario, Sampler &sampler, const PlannerConfig &config);

/// True iff every state of the path, resampled at `step` along its polyline with
/// headings interpolated, is collision-free for the given vehicle.
bool path_collision_free(const std::vector<State> &path, const CostMap &map, const VehicleParams &vehicle,
                         double step = 0.01);

/// One row of the planning results table; absent values stay empty.
struct PlanRow
{
    std::string scenario;
    std::string heuristic;
    std::string steering;
    std::optional<double> pred_ms;
    std::optional<double> ttfs_s;
    std::optional<double> vertices;
    std::optional<double> cusps;
    std::optional<double> length_m;
    std::optional<double> cost_ttfs;
    std::optional<double> cost_opt;
    bool success = false;
};

PlanRow extract_metrics(const PlanResult &result, const std::string &scenario, const std::string &heuristic,
                        SteeringFamily steering, std::optional<double> pred_ms);

inline constexpr const char *kPlanCsvHeader =
    "scenario,heuristic,steering,pred_ms,ttfs_s,vertices,cusps,length_m,cost_ttfs,cost_opt,success";

std::string to_csv(const PlanRow &row);

/// CSV number formatting shared by the result writers ("%.10g"; empty when absent).
std::string format_value(std::optional<double> v);

} // namespace guidedplan
