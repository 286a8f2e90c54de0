#include <guidedplan/errors.hpp>
#include <guidedplan/path_cost.hpp>

namespace guidedplan
{

double arc_length(std::span<const State> states)
{
    double length = 0.0;
    for (std::size_t i = 1; i < states.size(); ++i)
        length += (states[i].pose.position() - states[i - 1].pose.position()).norm();
    return length;
}

int count_cusps(std::span<const State> states)
{
    int cusps = 0;
    int last = 0;
    for (const State &s : states)
    {
        const int sign = (s.v > 0.0) - (s.v < 0.0);
        if (sign == 0)
            continue;
        if (last != 0 && sign != last)
            ++cusps;
        last = sign;
    }
    return cusps;
}

double path_cost(std::span<const State> states, const CostMap &map, const CostWeights &weights)
{
    if (states.empty())
        throw PreconditionError("path_cost: empty state sequence");
    double length = 0.0;
    double map_term = 0.0;
    double prev_cost = map.cost_at(states[0].pose.position());
    for (std::size_t i = 1; i < states.size(); ++i)
    {
        const double ds = (states[i].pose.position() - states[i - 1].pose.position()).norm();
        const double c = map.cost_at(states[i].pose.position());
        length += ds;
        map_term += 0.5 * (prev_cost + c) * ds;
        prev_cost = c;
    }
    return length + weights.w_cusp * count_cusps(states) + weights.w_map * map_term;
}

} // namespace guidedplan
