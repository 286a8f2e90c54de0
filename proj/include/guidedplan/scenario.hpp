#pragma once

#include <guidedplan/grid.hpp>

#include <cstdint>
#include <string>
#include <string_view>

namespace guidedplan
{

enum class ScenarioFamily
{
    Empty,
    Passage,
    BlockedIntersection,
    ParkingRow,
    Maze,
};

/// Accepts the lower-case names used in files ("passage", "parking_row", ...).
ScenarioFamily parse_family(std::string_view name);
std::string_view to_string(ScenarioFamily family);

struct Scenario
{
    ScenarioFamily family = ScenarioFamily::Empty;
    std::uint64_t seed = 0;
    OccupancyGrid grid;
    State start;
    State goal;
    /// Scenario label used in result tables, e.g. "passage-7".
    std::string name() const;
};

} // namespace guidedplan
