#include <guidedplan/planner.hpp>

#include <cmath>
#include <cstdio>

namespace guidedplan
{

std::string format_value(std::optional<double> v)
{
    if (!v || !std::isfinite(*v))
        return "";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", *v);
    return buf;
}

PlanRow extract_metrics(const PlanResult &result, const std::string &scenario, const std::string &heuristic,
                        SteeringFamily steering, std::optional<double> pred_ms)
{
    PlanRow row;
    row.scenario = scenario;
    row.heuristic = heuristic;
    row.steering = std::string(to_string(steering));
    row.success = result.success;
    if (!result.success)
        return row;
    row.pred_ms = pred_ms;
    row.ttfs_s = result.ttfs;
    row.vertices = static_cast<double>(result.n_vertices);
    row.cusps = result.n_cusps;
    row.length_m = result.length;
    row.cost_ttfs = result.first_solution_cost;
    row.cost_opt = result.final_cost;
    return row;
}

std::string to_csv(const PlanRow &row)
{
    std::string line = row.scenario + "," + row.heuristic + "," + row.steering;
    for (const auto &v : {row.pred_ms, row.ttfs_s, row.vertices, row.cusps, row.length_m, row.cost_ttfs, row.cost_opt})
        line += "," + format_value(v);
    line += row.success ? ",1" : ",0";
    return line;
}

} // namespace guidedplan
