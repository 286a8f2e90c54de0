#pragma once

#include <guidedplan/geometry.hpp>
#include <guidedplan/sampling.hpp>

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace guidedplan
{

struct MetricConfig
{
    double w_pos = 0.35;
    double w_theta = 0.65;
};

/// w_pos * |dp| + w_theta * |dtheta|, with the angle difference wrapped to [0, pi].
double pose_distance(const Pose &a, const Pose &b, const MetricConfig &cfg = {});

/// Ordered states with cumulative arc length.
class Trajectory
{
  public:
    Trajectory() = default;
    /// Consecutive states at the same position are merged so arc length stays strictly increasing.
    explicit Trajectory(std::vector<State> states);

    const std::vector<State> &states() const { return states_; }
    const std::vector<double> &arc_length() const { return arc_; }
    double total() const { return arc_.empty() ? 0.0 : arc_.back(); }
    std::size_t size() const { return states_.size(); }
    bool empty() const { return states_.empty(); }

    /// Prefix [0, end) and suffix [begin, size) as new trajectories.
    Trajectory prefix(std::size_t end) const;
    Trajectory suffix(std::size_t begin) const;

  private:
    std::vector<State> states_;
    std::vector<double> arc_;
};

/// Index of the trajectory state nearest to `pose` (first index on ties).
std::size_t project(const Trajectory &traj, const Pose &pose, const MetricConfig &cfg = {});

/// Mean over samples of the distance to the nearest trajectory state (linear scan).
double avg_path_deviation(const Trajectory &traj, std::span<const PoseSample> samples, const MetricConfig &cfg = {});

/// Largest gap between consecutive sorted reference arc lengths, as a fraction
/// of the trajectory length. Needs at least two samples.
double max_prediction_gap(const Trajectory &traj, std::span<const PoseSample> samples, const MetricConfig &cfg = {});

struct MeanStd
{
    double mean = 0.0;
    double std = 0.0;     ///< sample standard deviation, 0 for a single value
    std::size_t n = 0;
};

/// Ignores absent values; mean is NaN when nothing is present.
MeanStd mean_std(std::span<const std::optional<double>> values);
MeanStd mean_std(std::span<const double> values);

/// Percentage of true flags.
double success_rate(std::span<const bool> flags);

struct MetricRow
{
    std::string group;
    std::vector<std::optional<double>> values;
    bool success = true;
};

struct GroupSummary
{
    std::string group;
    std::size_t rows = 0;
    std::vector<MeanStd> columns;
    double success_rate = 0.0;
};

/// Per-group column statistics; groups appear in order of first occurrence.
std::vector<GroupSummary> aggregate(std::span<const MetricRow> rows);

} // namespace guidedplan
