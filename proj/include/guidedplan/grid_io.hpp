#pragma once

#include <guidedplan/grid.hpp>

#include <filesystem>
#include <iosfwd>

namespace guidedplan
{

/// OGRID v1: "OGRD", u32 width, u32 height, f32 resolution, f64 origin x, y, theta,
/// then width*height bytes (0 free, 1 occupied, 2 unknown), row-major from min y.
/// All integers and floats little-endian.
void write_ogrid(std::ostream &out, const OccupancyGrid &grid);
void write_ogrid(const std::filesystem::path &path, const OccupancyGrid &grid);
OccupancyGrid read_ogrid(std::istream &in);
OccupancyGrid read_ogrid(const std::filesystem::path &path);

namespace detail
{
// Little-endian primitives shared by the binary formats.
void put_u32(std::ostream &out, std::uint32_t v);
void put_f32(std::ostream &out, float v);
void put_f64(std::ostream &out, double v);
std::uint32_t get_u32(std::istream &in);
float get_f32(std::istream &in);
double get_f64(std::istream &in);
void expect_magic(std::istream &in, const char (&magic)[5]);
} // namespace detail

} // namespace guidedplan
