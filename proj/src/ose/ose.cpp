#include <guidedplan/errors.hpp>
#include <guidedplan/ose.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <queue>
#include <sstream>
#include <string>

namespace guidedplan
{

void OseParams::validate() const
{
    if (!(r_min > 0.0 && r_max >= r_min))
        throw PreconditionError("ose: need 0 < r_min <= r_max");
    if (!(min_clearance >= 0.0))
        throw PreconditionError("ose: min_clearance must be non-negative");
    if (neighbors < 1)
        throw PreconditionError("ose: neighbors must be positive");
    if (!(kappa_max > 0.0))
        throw PreconditionError("ose: kappa_max must be positive");
    if (!(timeout > 0.0))
        throw PreconditionError("ose: timeout must be positive");
    if (!(lattice_xy > 0.0))
        throw PreconditionError("ose: lattice_xy must be positive");
}

double ose_radius(double clearance, const OseParams &params)
{
    return std::clamp(clearance - params.min_clearance + params.r_min, params.r_min, params.r_max);
}

namespace
{

struct Node
{
    OseCircle circle;
    double g = 0.0;
    int parent = -1;
};

struct OpenEntry
{
    double f;
    std::size_t id;
    bool operator>(const OpenEntry &o) const { return f != o.f ? f > o.f : id > o.id; }
};

class Lattice
{
  public:
    Lattice(const Extent &extent, double cell, int headings)
        : x0_(extent.x_min), y0_(extent.y_min), cell_(cell), headings_(headings),
          nx_(static_cast<int>(std::ceil(extent.width() / cell)) + 1),
          ny_(static_cast<int>(std::ceil(extent.height() / cell)) + 1),
          best_g_(static_cast<std::size_t>(nx_) * ny_ * headings, std::numeric_limits<double>::infinity()),
          closed_(best_g_.size(), 0)
    {
    }

    std::size_t key(const OseCircle &c) const
    {
        const int ix = std::clamp(static_cast<int>(std::floor((c.center.x - x0_) / cell_)), 0, nx_ - 1);
        const int iy = std::clamp(static_cast<int>(std::floor((c.center.y - y0_) / cell_)), 0, ny_ - 1);
        const int ih = static_cast<int>(std::lround(wrap_two_pi(c.heading) / (kTwoPi / headings_))) % headings_;
        return (static_cast<std::size_t>(iy) * nx_ + ix) * headings_ + ih;
    }

    double &best_g(std::size_t k) { return best_g_[k]; }
    bool closed(std::size_t k) const { return closed_[k] != 0; }
    void close(std::size_t k) { closed_[k] = 1; }

  private:
    double x0_, y0_, cell_;
    int headings_, nx_, ny_;
    std::vector<double> best_g_;
    std::vector<std::uint8_t> closed_;
};

} // namespace

std::vector<OseCircle> explore(const CostMap &map, const Pose &start, const Pose &goal, const OseParams &params,
                               OseStats *stats)
{
    params.validate();
    using Clock = std::chrono::steady_clock;
    const auto t0 = Clock::now();
    auto elapsed = [&] { return std::chrono::duration<double>(Clock::now() - t0).count(); };

    const double start_clearance = map.clearance_at(start.position());
    const double goal_clearance = map.clearance_at(goal.position());
    if (start_clearance < params.min_clearance)
        throw PreconditionError("ose: start clearance below minimum");
    if (goal_clearance < params.min_clearance)
        throw PreconditionError("ose: goal clearance below minimum");

    const Vec2 g_pos = goal.position();
    std::vector<Node> nodes;
    nodes.push_back({{start.position(), start.theta(), ose_radius(start_clearance, params)}, 0.0, -1});

    auto finish = [&](int index) {
        std::vector<OseCircle> chain;
        for (int i = index; i >= 0; i = nodes[i].parent)
            chain.push_back(nodes[i].circle);
        std::reverse(chain.begin(), chain.end());
        if (stats)
            stats->elapsed_s = elapsed();
        return chain;
    };

    Lattice lattice(map.geometry().extent(), params.lattice_xy, params.neighbors);
    std::priority_queue<OpenEntry, std::vector<OpenEntry>, std::greater<>> open;
    open.push({(nodes[0].circle.center - g_pos).norm(), 0});
    lattice.best_g(lattice.key(nodes[0].circle)) = 0.0;

    std::size_t expanded = 0;
    const double step = kTwoPi / params.neighbors;
    while (!open.empty())
    {
        if ((expanded & 63) == 0 && elapsed() > params.timeout)
        {
            if (stats)
                *stats = {expanded, nodes.size(), elapsed()};
            throw ExplorationFailed("timeout after " + std::to_string(params.timeout) + " s");
        }
        const OpenEntry top = open.top();
        open.pop();
        const Node node = nodes[top.id];
        const std::size_t key = lattice.key(node.circle);
        if (lattice.closed(key))
            continue;
        lattice.close(key);
        ++expanded;

        if ((node.circle.center - g_pos).norm() <= node.circle.radius)
        {
            if (stats)
                *stats = {expanded, nodes.size(), 0.0};
            return finish(static_cast<int>(top.id));
        }

        const double r = node.circle.radius;
        const double limit = 2.0 * std::asin(std::min(1.0, r * params.kappa_max / 2.0)) * params.curvature_slack;
        for (int k = 0; k < params.neighbors; ++k)
        {
            const double angle = node.circle.heading + step * k;
            const Vec2 center = node.circle.center + r * unit(angle);
            const double clearance = map.clearance_at(center);
            if (clearance < params.min_clearance)
                continue;
            const OseCircle child{center, normalize_angle(angle), ose_radius(clearance, params)};
            const std::size_t child_key = lattice.key(child);
            if (lattice.closed(child_key))
                continue;
            const double turn = std::abs(normalize_angle(angle - node.circle.heading));
            const double g =
                node.g + r + params.w_turn * turn + params.w_excess * std::max(0.0, turn - limit);
            double &best = lattice.best_g(child_key);
            if (!(g < best))
                continue;
            best = g;
            nodes.push_back({child, g, static_cast<int>(top.id)});
            open.push({g + (center - g_pos).norm(), nodes.size() - 1});
        }
    }
    if (stats)
        *stats = {expanded, nodes.size(), elapsed()};
    throw ExplorationFailed("search space exhausted");
}

double chain_length(const std::vector<OseCircle> &chain, Vec2 start, Vec2 goal)
{
    if (chain.empty())
        return (goal - start).norm();
    double length = (chain.front().center - start).norm();
    for (std::size_t i = 1; i < chain.size(); ++i)
        length += (chain[i].center - chain[i - 1].center).norm();
    return length + (goal - chain.back().center).norm();
}

void write_chain_csv(std::ostream &out, const std::vector<OseCircle> &chain)
{
    char line[160];
    for (const OseCircle &c : chain)
    {
        std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g\n", c.center.x, c.center.y, c.heading, c.radius);
        out << line;
    }
}

void write_chain_csv(const std::filesystem::path &path, const std::vector<OseCircle> &chain)
{
    std::ofstream out(path);
    if (!out)
        throw FormatError("cannot open " + path.string() + " for writing");
    write_chain_csv(out, chain);
}

std::vector<OseCircle> read_chain_csv(std::istream &in)
{
    std::vector<OseCircle> chain;
    std::string line;
    while (std::getline(in, line))
    {
        if (line.empty())
            continue;
        OseCircle c;
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &c.center.x, &c.center.y, &c.heading, &c.radius) != 4)
            throw FormatError("malformed circle line: " + line);
        chain.push_back(c);
    }
    return chain;
}

} // namespace guidedplan
