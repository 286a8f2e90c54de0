#pragma once

#include <guidedplan/geometry.hpp>
#include <guidedplan/vehicle.hpp>

#include <cstddef>
#include <cstdint>
#include <vector>

namespace guidedplan
{

enum class CellState : std::uint8_t
{
    Free = 0,
    Occupied = 1,
    Unknown = 2,
};

struct CellIndex
{
    int ix = 0;
    int iy = 0;
    friend bool operator==(CellIndex, CellIndex) = default;
};

struct Extent
{
    double x_min = 0.0;
    double x_max = 0.0;
    double y_min = 0.0;
    double y_max = 0.0;

    double width() const { return x_max - x_min; }
    double height() const { return y_max - y_min; }
    Vec2 center() const { return {0.5 * (x_min + x_max), 0.5 * (y_min + y_max)}; }
};

/// Regular grid placement. `origin` is the world pose of the outer corner of
/// cell (0, 0); x runs along columns, rows start at the minimum local y.
class GridGeometry
{
  public:
    GridGeometry() = default;
    /// The resolution is rounded to float precision so in-memory and on-disk
    /// geometries agree exactly.
    GridGeometry(int width, int height, double resolution, Pose origin);

    /// 600 x 600 cells at 0.1 m, centered on the world origin.
    static GridGeometry default_world();
    /// Square window of `cells` x `cells` covering `size` meters, centered at `center`.
    static GridGeometry centered(Vec2 center, double size, int cells, double theta = 0.0);

    int width() const { return width_; }
    int height() const { return height_; }
    double resolution() const { return resolution_; }
    const Pose &origin() const { return origin_; }
    std::size_t cell_count() const { return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_); }

    bool contains(CellIndex c) const { return c.ix >= 0 && c.iy >= 0 && c.ix < width_ && c.iy < height_; }
    std::size_t index(CellIndex c) const { return static_cast<std::size_t>(c.iy) * width_ + c.ix; }
    CellIndex cell_at(std::size_t index) const
    {
        return {static_cast<int>(index % width_), static_cast<int>(index / width_)};
    }

    Vec2 to_local(Vec2 world) const { return origin_.apply_inverse(world); }
    Vec2 to_world(Vec2 local) const { return origin_.apply(local); }
    /// Cell containing a world point; may lie outside the grid.
    CellIndex cell_of(Vec2 world) const;
    CellIndex cell_of_local(Vec2 local) const;
    Vec2 center_of(CellIndex c) const;
    /// Axis-aligned world bounding box of the grid.
    Extent extent() const;

    friend bool operator==(const GridGeometry &, const GridGeometry &) = default;

  private:
    int width_ = 0;
    int height_ = 0;
    double resolution_ = 0.0;
    Pose origin_;
};

class OccupancyGrid
{
  public:
    OccupancyGrid() = default;
    explicit OccupancyGrid(GridGeometry geometry, CellState fill = CellState::Free);

    const GridGeometry &geometry() const { return geometry_; }
    int width() const { return geometry_.width(); }
    int height() const { return geometry_.height(); }
    double resolution() const { return geometry_.resolution(); }

    CellState at(CellIndex c) const { return cells_[geometry_.index(c)]; }
    /// Out-of-bounds cells read as Unknown.
    CellState at_or_unknown(CellIndex c) const { return geometry_.contains(c) ? at(c) : CellState::Unknown; }
    void set(CellIndex c, CellState s) { cells_[geometry_.index(c)] = s; }

    const std::vector<CellState> &cells() const { return cells_; }
    std::vector<CellState> &cells() { return cells_; }

    /// Sets every cell whose center lies inside the convex polygon (world frame).
    void fill_polygon(const Polygon &polygon, CellState s);
    /// Rotated rectangle given by center, full side lengths and heading.
    void fill_box(Vec2 center, double length, double width, double theta, CellState s);

    std::size_t count(CellState s) const;

    friend bool operator==(const OccupancyGrid &, const OccupancyGrid &) = default;

  private:
    GridGeometry geometry_;
    std::vector<CellState> cells_;
};

/// Exact squared Euclidean distance transform (two-pass lower-envelope method).
///
/// Distances are in cell units between cell centers. `nearest` receives, for every
/// cell, the flat index of a closest source cell (-1 when there is none).
struct DistanceField
{
    std::vector<double> squared;   ///< +inf where no source exists
    std::vector<int> nearest;
};

DistanceField distance_transform(const std::vector<std::uint8_t> &sources, int width, int height);

} // namespace guidedplan
