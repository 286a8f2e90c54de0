#pragma once

#include <guidedplan/costmap.hpp>
#include <guidedplan/geometry.hpp>

#include <filesystem>
#include <iosfwd>
#include <vector>

namespace guidedplan
{

struct OseCircle
{
    Vec2 center;
    double heading = 0.0;
    double radius = 0.0;
};

struct OseParams
{
    double r_min = 0.2;
    double r_max = 5.0;
    double min_clearance = 1.041;
    int neighbors = 32;
    double kappa_max = 0.1982;
    double timeout = 1.0; ///< wall-clock seconds

    /// Penalty per radian of heading change.
    double w_turn = 1.0;
    /// Multiplier on the curvature-feasible turn before the excess penalty applies.
    double curvature_slack = 2.0;
    /// Penalty per radian of heading change beyond the feasible turn.
    double w_excess = 10.0;
    /// Duplicate lattice cell size in x and y.
    double lattice_xy = 0.5;

    void validate() const;
};

struct OseStats
{
    std::size_t expanded = 0;
    std::size_t generated = 0;
    double elapsed_s = 0.0;
};

/// A* over oriented free-space circles from `start` until a circle contains the goal.
///
/// Throws PreconditionError when start or goal lack min_clearance, and
/// ExplorationFailed when the search times out or the open set runs dry.
std::vector<OseCircle> explore(const CostMap &map, const Pose &start, const Pose &goal, const OseParams &params = {},
                               OseStats *stats = nullptr);

/// Radius assigned to a circle at the given clearance.
double ose_radius(double clearance, const OseParams &params);

/// Polyline length start -> circle centers -> goal.
double chain_length(const std::vector<OseCircle> &chain, Vec2 start, Vec2 goal);

/// One `x,y,theta,radius` line per circle, no header.
void write_chain_csv(std::ostream &out, const std::vector<OseCircle> &chain);
void write_chain_csv(const std::filesystem::path &path, const std::vector<OseCircle> &chain);
std::vector<OseCircle> read_chain_csv(std::istream &in);

} // namespace guidedplan
