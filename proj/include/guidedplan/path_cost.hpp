#pragma once

#include <guidedplan/costmap.hpp>
#include <guidedplan/geometry.hpp>

#include <span>

namespace guidedplan
{

struct CostWeights
{
    double w_cusp = 5.0;
    double w_map = 1.0;
};

/// Polyline length through the state positions.
double arc_length(std::span<const State> states);

/// Direction reversals: sign changes of v between consecutive nonzero speeds.
int count_cusps(std::span<const State> states);

/// arc_length + w_cusp * cusps + w_map * sum_i cost(cell(s_i)) * ds_i, where each
/// state is weighted by half of its adjacent step lengths. The weighting makes
/// the functional additive over concatenation at a shared state.
/// Throws PreconditionError on an empty sequence.
double path_cost(std::span<const State> states, const CostMap &map, const CostWeights &weights = {});

} // namespace guidedplan
