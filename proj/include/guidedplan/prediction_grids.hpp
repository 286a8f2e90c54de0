#pragma once

#include <guidedplan/grid.hpp>

#include <filesystem>
#include <iosfwd>
#include <vector>

namespace guidedplan
{

inline constexpr int kWindowCells = 256;
inline constexpr double kWindowSize = 60.0;

/// 256 x 256 window of 60 m, axis-aligned and centered on `center`.
inline GridGeometry prediction_window(Vec2 center) { return GridGeometry::centered(center, kWindowSize, kWindowCells); }

/// Per-cell path probability and heading (as sin / cos) over a window.
struct PredictionGrids
{
    GridGeometry geometry;
    std::vector<float> p_path;
    std::vector<float> sin_theta;
    std::vector<float> cos_theta;

    PredictionGrids() = default;
    explicit PredictionGrids(GridGeometry g);

    /// Heading confidence sqrt(sin^2 + cos^2).
    double confidence(std::size_t cell) const;
    /// Throws PreconditionError when planes mismatch or values leave their ranges
    /// (confidence may overshoot 1 by `overshoot`).
    void validate(double overshoot = 0.05) const;

    friend bool operator==(const PredictionGrids &, const PredictionGrids &) = default;
};

/// PGRID v1: "PGRD", u32 width, u32 height, f32 resolution, f64 origin x, y, theta,
/// then the p_path, sin and cos planes as row-major little-endian f32.
void write_pgrid(std::ostream &out, const PredictionGrids &grids);
void write_pgrid(const std::filesystem::path &path, const PredictionGrids &grids);
PredictionGrids read_pgrid(std::istream &in);
PredictionGrids read_pgrid(const std::filesystem::path &path);

} // namespace guidedplan
