#pragma once

#include <guidedplan/dataset.hpp>

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace guidedplan
{

/// Scenario document: {family, seed, start, goal, grid_ref}; states are
/// {x, y, theta, kappa, v}. The grid is stored as OGRID at grid_ref, relative to
/// the document's directory.
void write_scenario(const std::filesystem::path &json_path, const Scenario &scenario, const std::string &grid_ref);
Scenario read_scenario(const std::filesystem::path &json_path);

/// Plane stack: "PLNS", u32 width, u32 height, u32 planes, f32 resolution,
/// f64 origin x, y, theta, then the planes as row-major little-endian f32.
struct PlaneStack
{
    GridGeometry geometry;
    std::vector<std::vector<float>> planes;
};

void write_planes(std::ostream &out, const PlaneStack &stack);
void write_planes(const std::filesystem::path &path, const PlaneStack &stack);
PlaneStack read_planes(std::istream &in);
PlaneStack read_planes(const std::filesystem::path &path);
PlaneStack to_stack(const InputPlanes &inputs);

struct ManifestEntry
{
    std::string example_id;
    std::string scenario_file;
    std::string split;
    std::string inputs;
    std::string labels;
};

inline constexpr const char *kManifestHeader = "example_id,scenario_file,split,inputs,labels";

void write_manifest(const std::filesystem::path &path, const std::vector<ManifestEntry> &entries);
std::vector<ManifestEntry> read_manifest(const std::filesystem::path &path);

/// Split tags for `n` recordings: a seeded permutation rank r maps to train for
/// r < 0.64 n, val for r < 0.80 n and test otherwise.
std::vector<std::string> assign_splits(std::size_t n, std::uint64_t seed);

} // namespace guidedplan
