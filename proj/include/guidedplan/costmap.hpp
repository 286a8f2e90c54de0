#pragma once

#include <guidedplan/grid.hpp>

#include <cstdint>
#include <vector>

namespace guidedplan
{

inline constexpr double kDefaultCostPeak = 100.0;
inline constexpr double kDefaultInflationRadius = 0.25;

/// Inflated cost map plus the precomputed tables used by collision checks.
///
/// Collision-relevant ("blocked") cells are OCCUPIED and UNKNOWN cells; the area
/// outside the grid is treated as blocked as well.
class CostMap
{
  public:
    CostMap() = default;

    const GridGeometry &geometry() const { return geometry_; }
    double resolution() const { return geometry_.resolution(); }
    double cost_peak() const { return cost_peak_; }
    double inflation_radius() const { return radius_; }

    double cost(CellIndex c) const { return cost_[geometry_.index(c)]; }
    /// Cost at the cell containing a world point; cost_peak outside the grid.
    double cost_at(Vec2 world) const;
    bool lethal(CellIndex c) const { return lethal_[geometry_.index(c)] != 0; }
    bool blocked(CellIndex c) const { return !geometry_.contains(c) || blocked_[geometry_.index(c)] != 0; }

    /// Distance in meters from the center of the cell containing `world` to the
    /// nearest blocked cell center (grid border included). 0 outside the grid.
    double clearance_at(Vec2 world) const;
    double clearance(CellIndex c) const;

    /// Number of blocked cells in row `iy` within columns [ix0, ix1] (clipped).
    int blocked_in_row(int iy, int ix0, int ix1) const;

    const std::vector<double> &costs() const { return cost_; }
    const std::vector<std::uint8_t> &lethal_mask() const { return lethal_; }

    friend CostMap inflate(const OccupancyGrid &grid, double radius, bool unknown_is_obstacle, double cost_peak);

  private:
    GridGeometry geometry_;
    double cost_peak_ = kDefaultCostPeak;
    double radius_ = 0.0;
    std::vector<double> cost_;
    std::vector<std::uint8_t> lethal_;
    std::vector<std::uint8_t> blocked_;
    std::vector<int> row_prefix_;     ///< (width + 1) entries per row
    std::vector<float> clearance_;    ///< meters, includes the border
};

/// Linear-decay inflation: cost = peak * (1 - d / radius) clamped to [0, peak],
/// where d is the exact Euclidean distance to the nearest source cell.
/// Sources are OCCUPIED cells, plus UNKNOWN cells when `unknown_is_obstacle`.
CostMap inflate(const OccupancyGrid &grid, double radius = kDefaultInflationRadius, bool unknown_is_obstacle = false,
                double cost_peak = kDefaultCostPeak);

} // namespace guidedplan
