#pragma once

#include <guidedplan/metrics.hpp>
#include <guidedplan/planner.hpp>
#include <guidedplan/prediction_grids.hpp>
#include <guidedplan/scenario.hpp>

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace guidedplan
{

struct GenerateOptions
{
    double passage_gap = 2.6;
    double passage_wall = 5.0;       ///< wall thickness along x
    double min_clearance = 1.041;
    /// Clearance at maze endpoints and along the validated maze route, so turns fit.
    double maze_clearance = 2.0;
    int max_retries = 100;
    VehicleParams vehicle;
};

/// Deterministic procedural scenario for (family, seed). Start and goal are
/// footprint-collision-free with at least min_clearance at the rear axle, and the
/// goal lies inside the 60 m window around the start.
/// Throws GenerationError when no valid layout is found within max_retries.
Scenario generate(ScenarioFamily family, std::uint64_t seed, const GenerateOptions &options = {});

/// 8-connected reachability between two cells over cells with clearance >= threshold.
bool clearance_connected(const CostMap &map, Vec2 from, Vec2 to, double threshold);

inline constexpr double kMarkerVmax = 2.8;
inline constexpr int kInputPlanes = 5;

/// obstacles, unknown, past_path, start_marker, goal_marker.
struct InputPlanes
{
    GridGeometry window;
    std::array<std::vector<float>, kInputPlanes> planes;
};

/// Cells crossed by a polyline given in world coordinates: a supercover traversal
/// that steps diagonally through exact corner crossings. Returns (flat cell index,
/// segment index) in traversal order; cells outside the window are skipped.
std::vector<std::pair<std::size_t, std::size_t>> rasterize_polyline(std::span<const Vec2> points,
                                                                    const GridGeometry &window);

inline constexpr std::uint8_t kPoolOccupied = 1;
inline constexpr std::uint8_t kPoolUnknown = 2;

/// Max-pools the fine grid into the window: per window cell, kPoolOccupied and / or
/// kPoolUnknown if any overlapping fine cell has that state. Area outside the grid is Unknown.
std::vector<std::uint8_t> pool_grid(const OccupancyGrid &grid, const GridGeometry &window);

/// Writes the 7 x 7 marker for `state` into `plane`: the inner 5 x 5 holds v / v_max,
/// the ring holds 0.5 except 1.0 on the ring cell closest to the heading.
void draw_marker(std::vector<float> &plane, const GridGeometry &window, const State &state);

InputPlanes encode_inputs(const OccupancyGrid &observed, const Trajectory &past, const State &current,
                          const State &goal, const GridGeometry &window);
/// Uses the scenario grid, the last past state (or the scenario start) and the scenario goal.
InputPlanes encode_inputs(const Scenario &scenario, const Trajectory &past, const GridGeometry &window);

/// path_class, sin and cos planes of the future path; headings are relative to the window.
/// Cells crossed more than once keep the last crossing.
PredictionGrids encode_labels(const Trajectory &future, const GridGeometry &window);

/// Stand-in prediction: p = max(0, 1 - d / (blur + 1)) for d the distance in cells to
/// the nearest label path cell, whose heading is copied.
PredictionGrids paint_oracle(const Trajectory &traj, const GridGeometry &window, double blur_cells);

struct TrainConfig
{
    double gamma_ce = 25.0;
    double gamma_mse = 25.0;
    double lr = 1e-5;
    double lrd = 0.01;
    double l2_lambda = 0.003;
    std::size_t batch = 20;
};

/// Network output per cell: two class logits (off path, on path) and heading regression.
struct LogitPlanes
{
    std::vector<double> logit_off;
    std::vector<double> logit_on;
    std::vector<double> sin_theta;
    std::vector<double> cos_theta;
};

/// Weighted two-class cross-entropy plus weighted heading MSE plus lambda / 2 * sum w^2.
/// Throws PreconditionError on shape mismatch.
double loss(const LogitPlanes &pred, const PredictionGrids &labels, const TrainConfig &cfg, double weights_sq_sum);

/// Marks everything outside the line of sight of `observers` Unknown. Rays stop at
/// the first occupied cell, which stays visible.
OccupancyGrid observe(const OccupancyGrid &full, std::span<const Pose> observers, double range = 30.0,
                      int rays = 720);

struct RecordingConfig
{
    PlannerConfig planner;
    std::size_t augmentations = 5;
    double observer_spacing = 1.0;   ///< m between observer poses along the prefix
    double los_range = 30.0;
    int los_rays = 720;
    std::uint64_t seed = 0;

    RecordingConfig()
    {
        planner.optimize_time = 5.0;
        planner.steering = SteeringFamily::ReedsShepp;
    }
};

struct Example
{
    std::size_t split_index = 0;   ///< trajectory index of the current state
    State current;
    InputPlanes inputs;
    PredictionGrids labels;
};

struct Recording
{
    Trajectory trajectory;
    std::vector<Example> examples;
    PlanResult plan;
};

/// Plans the scenario (exploration-guided, uniform fallback) and emits one example per
/// augmentation: inputs from the prefix up to the split, labels from the rest.
/// Returns nullopt when planning fails.
std::optional<Recording> make_recording(const Scenario &scenario, const RecordingConfig &config);

/// Minimum-cost chain over states about `spacing` apart along `path`, where each
/// link is either the original stretch or a collision-free direct steering path.
std::vector<State> shortcut_path(const std::vector<State> &path, const CostMap &map, const PlannerConfig &config,
                                 double spacing = 1.0);

/// Reference trajectory used by benchmarks as ground truth for a scenario: an
/// exploration-guided plan, shortcut.
std::optional<Trajectory> reference_trajectory(const Scenario &scenario, const PlannerConfig &config);

} // namespace guidedplan
