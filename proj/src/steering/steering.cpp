#include <guidedplan/errors.hpp>
#include <guidedplan/steering.hpp>

#include <algorithm>
#include <cmath>
#include <string>

namespace guidedplan
{

SteeringFamily parse_steering_family(std::string_view name)
{
    if (name == "dubins")
        return SteeringFamily::Dubins;
    if (name == "reeds_shepp" || name == "rs")
        return SteeringFamily::ReedsShepp;
    throw ConfigError("unknown steering family '" + std::string(name) + "'");
}

std::string_view to_string(SteeringFamily family)
{
    switch (family)
    {
    case SteeringFamily::Dubins:
        return "dubins";
    case SteeringFamily::ReedsShepp:
        return "reeds_shepp";
    }
    throw ConfigError("invalid steering family value");
}

Pose advance(const Pose &pose, double kappa, double s)
{
    const double th = pose.theta();
    if (kappa == 0.0)
        return {pose.x() + s * std::cos(th), pose.y() + s * std::sin(th), th};
    const double th1 = th + kappa * s;
    return {pose.x() + (std::sin(th1) - std::sin(th)) / kappa, pose.y() + (std::cos(th) - std::cos(th1)) / kappa,
            th1};
}

SteeringPath::SteeringPath(Pose start, Pose end, SteeringFamily family, std::vector<Segment> segments)
    : start_(start), end_(end), family_(family)
{
    for (const Segment &seg : segments)
        if (seg.signed_length != 0.0)
            segments_.push_back(seg);
    for (const Segment &seg : segments_)
        length_ += std::abs(seg.signed_length);
}

int SteeringPath::cusps() const
{
    int cusps = 0;
    for (std::size_t i = 1; i < segments_.size(); ++i)
        if ((segments_[i].signed_length > 0.0) != (segments_[i - 1].signed_length > 0.0))
            ++cusps;
    return cusps;
}

Pose SteeringPath::integrated_end() const
{
    Pose p = start_;
    for (const Segment &seg : segments_)
        p = advance(p, seg.kappa, seg.signed_length);
    return p;
}

State SteeringPath::state_at(double s) const
{
    if (segments_.empty())
        return {start_, 0.0, 0.0};
    s = std::clamp(s, 0.0, length_);
    Pose p = start_;
    for (std::size_t i = 0; i < segments_.size(); ++i)
    {
        const Segment &seg = segments_[i];
        const double len = std::abs(seg.signed_length);
        const double dir = seg.signed_length > 0.0 ? 1.0 : -1.0;
        if (s < len || i + 1 == segments_.size())
            return {advance(p, seg.kappa, dir * std::min(s, len)), seg.kappa, dir};
        p = advance(p, seg.kappa, seg.signed_length);
        s -= len;
    }
    return {p, 0.0, 0.0};
}

std::vector<State> discretize(const SteeringPath &path, double step)
{
    if (!(step > 0.0))
        throw PreconditionError("discretize: step must be positive");
    const double length = path.length();
    if (path.segments().empty())
        return {State{path.start(), 0.0, 0.0}};

    const auto n = static_cast<std::size_t>(std::floor(length / step + 1e-9));
    std::vector<State> states;
    states.reserve(n + 2);

    // Walk the segments once instead of re-integrating from the start per state.
    std::size_t seg_index = 0;
    double seg_begin = 0.0;
    Pose seg_pose = path.start();
    auto state_at = [&](double s) {
        const auto &segs = path.segments();
        while (seg_index + 1 < segs.size() && s >= seg_begin + std::abs(segs[seg_index].signed_length))
        {
            seg_pose = advance(seg_pose, segs[seg_index].kappa, segs[seg_index].signed_length);
            seg_begin += std::abs(segs[seg_index].signed_length);
            ++seg_index;
        }
        const Segment &seg = segs[seg_index];
        const double dir = seg.signed_length > 0.0 ? 1.0 : -1.0;
        const double local = std::clamp(s - seg_begin, 0.0, std::abs(seg.signed_length));
        return State{advance(seg_pose, seg.kappa, dir * local), seg.kappa, dir};
    };

    for (std::size_t k = 0; k <= n; ++k)
        states.push_back(state_at(std::min(k * step, length)));
    if (length - n * step > 1e-9)
        states.push_back(state_at(length));
    return states;
}

SteeringPath steer(const Pose &q0, const Pose &q1, SteeringFamily family, const VehicleParams &vehicle)
{
    switch (family)
    {
    case SteeringFamily::Dubins:
        return dubins_shortest(q0, q1, vehicle.kappa_max);
    case SteeringFamily::ReedsShepp:
        return reeds_shepp_shortest(q0, q1, vehicle.kappa_max);
    }
    throw ConfigError("invalid steering family value");
}

} // namespace guidedplan
