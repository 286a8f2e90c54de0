#include <guidedplan/errors.hpp>
#include <guidedplan/steering.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace guidedplan
{

namespace
{

double mod2pi(double x)
{
    double r = wrap_two_pi(x);
    // Arcs that should be empty otherwise come out as a full turn.
    if (r > kTwoPi - 1e-10)
        r = 0.0;
    return r;
}

enum Word
{
    LSL,
    RSR,
    LSR,
    RSL,
    LRL,
    RLR,
};

constexpr SegmentType kWordTypes[6][3] = {
    {SegmentType::Left, SegmentType::Straight, SegmentType::Left},
    {SegmentType::Right, SegmentType::Straight, SegmentType::Right},
    {SegmentType::Left, SegmentType::Straight, SegmentType::Right},
    {SegmentType::Right, SegmentType::Straight, SegmentType::Left},
    {SegmentType::Left, SegmentType::Right, SegmentType::Left},
    {SegmentType::Right, SegmentType::Left, SegmentType::Right},
};

// Normalized (unit turning radius) word parameters; false if the word has no solution.
bool solve_word(Word word, double d, double a, double b, std::array<double, 3> &out)
{
    const double sa = std::sin(a), sb = std::sin(b), ca = std::cos(a), cb = std::cos(b);
    const double cab = std::cos(a - b);
    constexpr double kTol = 1e-10;
    switch (word)
    {
    case LSL: {
        const double tmp = 2.0 + d * d - 2.0 * cab + 2.0 * d * (sa - sb);
        if (tmp < -kTol)
            return false;
        const double p = std::sqrt(std::max(tmp, 0.0));
        const double th = std::atan2(cb - ca, d + sa - sb);
        out = {mod2pi(th - a), p, mod2pi(b - th)};
        return true;
    }
    case RSR: {
        const double tmp = 2.0 + d * d - 2.0 * cab + 2.0 * d * (sb - sa);
        if (tmp < -kTol)
            return false;
        const double p = std::sqrt(std::max(tmp, 0.0));
        const double th = std::atan2(ca - cb, d - sa + sb);
        out = {mod2pi(a - th), p, mod2pi(th - b)};
        return true;
    }
    case LSR: {
        const double tmp = -2.0 + d * d + 2.0 * cab + 2.0 * d * (sa + sb);
        if (tmp < -kTol)
            return false;
        const double p = std::sqrt(std::max(tmp, 0.0));
        const double th = std::atan2(-ca - cb, d + sa + sb) - std::atan2(-2.0, p);
        out = {mod2pi(th - a), p, mod2pi(th - b)};
        return true;
    }
    case RSL: {
        const double tmp = d * d - 2.0 + 2.0 * cab - 2.0 * d * (sa + sb);
        if (tmp < -kTol)
            return false;
        const double p = std::sqrt(std::max(tmp, 0.0));
        const double th = std::atan2(ca + cb, d - sa - sb) - std::atan2(2.0, p);
        out = {mod2pi(a - th), p, mod2pi(b - th)};
        return true;
    }
    case RLR: {
        const double tmp = (6.0 - d * d + 2.0 * cab + 2.0 * d * (sa - sb)) / 8.0;
        if (std::abs(tmp) > 1.0 + kTol)
            return false;
        const double p = mod2pi(kTwoPi - std::acos(std::clamp(tmp, -1.0, 1.0)));
        const double t = mod2pi(a - std::atan2(ca - cb, d - sa + sb) + 0.5 * p);
        out = {t, p, mod2pi(a - b - t + p)};
        return true;
    }
    case LRL: {
        const double tmp = (6.0 - d * d + 2.0 * cab + 2.0 * d * (sb - sa)) / 8.0;
        if (std::abs(tmp) > 1.0 + kTol)
            return false;
        const double p = mod2pi(kTwoPi - std::acos(std::clamp(tmp, -1.0, 1.0)));
        const double t = mod2pi(-a - std::atan2(ca - cb, d + sa - sb) + 0.5 * p);
        out = {t, p, mod2pi(b - a - t + p)};
        return true;
    }
    }
    return false;
}

} // namespace

SteeringPath dubins_shortest(const Pose &q0, const Pose &q1, double kappa_max)
{
    if (!(kappa_max > 0.0))
        throw PreconditionError("dubins: kappa_max must be positive");
    if (q0 == q1)
        return SteeringPath(q0, q1, SteeringFamily::Dubins, {});

    const double radius = 1.0 / kappa_max;
    const Vec2 delta = q1.position() - q0.position();
    const double d = delta.norm() / radius;
    const double th = d > 0.0 ? wrap_two_pi(std::atan2(delta.y, delta.x)) : 0.0;
    const double a = wrap_two_pi(q0.theta() - th);
    const double b = wrap_two_pi(q1.theta() - th);

    double best = std::numeric_limits<double>::infinity();
    int best_word = -1;
    std::array<double, 3> best_params{};
    for (int w = LSL; w <= RLR; ++w)
    {
        std::array<double, 3> params{};
        if (!solve_word(static_cast<Word>(w), d, a, b, params))
            continue;
        const double len = params[0] + params[1] + params[2];
        if (len < best)
        {
            best = len;
            best_word = w;
            best_params = params;
        }
    }
    if (best_word < 0)
        throw Error("dubins: no word admits a solution");

    std::vector<Segment> segments;
    for (int i = 0; i < 3; ++i)
    {
        const SegmentType type = kWordTypes[best_word][i];
        const double kappa = type == SegmentType::Left ? kappa_max : type == SegmentType::Right ? -kappa_max : 0.0;
        segments.push_back({type, best_params[i] * radius, kappa});
    }
    return SteeringPath(q0, q1, SteeringFamily::Dubins, std::move(segments));
}

double steering_distance(const Pose &q0, const Pose &q1, SteeringFamily family, double kappa_max)
{
    switch (family)
    {
    case SteeringFamily::Dubins:
        return dubins_shortest(q0, q1, kappa_max).length();
    case SteeringFamily::ReedsShepp:
        return reeds_shepp_shortest(q0, q1, kappa_max).length();
    }
    throw ConfigError("invalid steering family value");
}

} // namespace guidedplan
