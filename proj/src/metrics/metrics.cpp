#include <guidedplan/errors.hpp>
#include <guidedplan/metrics.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace guidedplan
{

double pose_distance(const Pose &a, const Pose &b, const MetricConfig &cfg)
{
    return cfg.w_pos * (a.position() - b.position()).norm() + cfg.w_theta * angle_distance(a.theta(), b.theta());
}

Trajectory::Trajectory(std::vector<State> states)
{
    states_.reserve(states.size());
    arc_.reserve(states.size());
    for (const State &s : states)
    {
        if (states_.empty())
        {
            states_.push_back(s);
            arc_.push_back(0.0);
            continue;
        }
        const double ds = (s.pose.position() - states_.back().pose.position()).norm();
        if (ds == 0.0)
        {
            states_.back() = s;
            continue;
        }
        states_.push_back(s);
        arc_.push_back(arc_.back() + ds);
    }
}

Trajectory Trajectory::prefix(std::size_t end) const
{
    end = std::min(end, states_.size());
    return Trajectory(std::vector<State>(states_.begin(), states_.begin() + static_cast<std::ptrdiff_t>(end)));
}

Trajectory Trajectory::suffix(std::size_t begin) const
{
    begin = std::min(begin, states_.size());
    return Trajectory(std::vector<State>(states_.begin() + static_cast<std::ptrdiff_t>(begin), states_.end()));
}

std::size_t project(const Trajectory &traj, const Pose &pose, const MetricConfig &cfg)
{
    if (traj.empty())
        throw PreconditionError("project: empty trajectory");
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < traj.size(); ++i)
    {
        const double d = pose_distance(pose, traj.states()[i].pose, cfg);
        if (d < best_d)
        {
            best_d = d;
            best = i;
        }
    }
    return best;
}

double avg_path_deviation(const Trajectory &traj, std::span<const PoseSample> samples, const MetricConfig &cfg)
{
    if (traj.empty() || samples.empty())
        throw PreconditionError("avg_path_deviation: empty input");
    double sum = 0.0;
    for (const PoseSample &s : samples)
    {
        double best = std::numeric_limits<double>::infinity();
        for (const State &t : traj.states())
            best = std::min(best, pose_distance(s.pose, t.pose, cfg));
        sum += best;
    }
    return sum / static_cast<double>(samples.size());
}

double max_prediction_gap(const Trajectory &traj, std::span<const PoseSample> samples, const MetricConfig &cfg)
{
    if (samples.size() < 2)
        throw PreconditionError("max_prediction_gap: needs at least two samples");
    if (!(traj.total() > 0.0))
        throw PreconditionError("max_prediction_gap: trajectory has zero length");
    std::vector<double> s_ref;
    s_ref.reserve(samples.size());
    for (const PoseSample &s : samples)
        s_ref.push_back(traj.arc_length()[project(traj, s.pose, cfg)]);
    std::sort(s_ref.begin(), s_ref.end());
    double gap = 0.0;
    for (std::size_t i = 1; i < s_ref.size(); ++i)
        gap = std::max(gap, s_ref[i] - s_ref[i - 1]);
    return gap / traj.total();
}

MeanStd mean_std(std::span<const std::optional<double>> values)
{
    std::vector<double> present;
    for (const auto &v : values)
        if (v)
            present.push_back(*v);
    return mean_std(std::span<const double>(present));
}

MeanStd mean_std(std::span<const double> values)
{
    MeanStd out;
    out.n = values.size();
    if (values.empty())
    {
        out.mean = std::numeric_limits<double>::quiet_NaN();
        out.std = std::numeric_limits<double>::quiet_NaN();
        return out;
    }
    double sum = 0.0;
    for (double v : values)
        sum += v;
    out.mean = sum / static_cast<double>(values.size());
    if (values.size() > 1)
    {
        double sq = 0.0;
        for (double v : values)
            sq += (v - out.mean) * (v - out.mean);
        out.std = std::sqrt(sq / static_cast<double>(values.size() - 1));
    }
    return out;
}

double success_rate(std::span<const bool> flags)
{
    if (flags.empty())
        return 0.0;
    const auto ok = std::count(flags.begin(), flags.end(), true);
    return 100.0 * static_cast<double>(ok) / static_cast<double>(flags.size());
}

std::vector<GroupSummary> aggregate(std::span<const MetricRow> rows)
{
    std::vector<std::string> order;
    std::map<std::string, std::vector<const MetricRow *>> groups;
    for (const MetricRow &r : rows)
    {
        auto [it, inserted] = groups.try_emplace(r.group);
        if (inserted)
            order.push_back(r.group);
        it->second.push_back(&r);
    }
    std::vector<GroupSummary> out;
    for (const std::string &name : order)
    {
        const auto &members = groups[name];
        std::size_t n_columns = 0;
        for (const MetricRow *r : members)
            n_columns = std::max(n_columns, r->values.size());
        GroupSummary summary{name, members.size(), {}, 0.0};
        for (std::size_t c = 0; c < n_columns; ++c)
        {
            std::vector<std::optional<double>> column;
            for (const MetricRow *r : members)
                column.push_back(c < r->values.size() ? r->values[c] : std::nullopt);
            summary.columns.push_back(mean_std(std::span<const std::optional<double>>(column)));
        }
        std::size_t ok = 0;
        for (const MetricRow *r : members)
            ok += r->success ? 1 : 0;
        summary.success_rate = 100.0 * static_cast<double>(ok) / static_cast<double>(members.size());
        out.push_back(std::move(summary));
    }
    return out;
}

} // namespace guidedplan
