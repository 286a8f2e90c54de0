#include <guidedplan/geometry.hpp>
#include <guidedplan/rng.hpp>

#include <cmath>
#include <limits>

namespace guidedplan
{

double normalize_angle(double angle)
{
    double r = std::remainder(angle, kTwoPi);
    if (r <= -kPi)
        r += kTwoPi;
    return r;
}

double wrap_two_pi(double angle)
{
    double r = std::fmod(angle, kTwoPi);
    if (r < 0.0)
        r += kTwoPi;
    if (r >= kTwoPi)
        r = 0.0;
    return r;
}

Vec2 Pose::apply(Vec2 local) const { return position() + rotate(local, theta_); }

Vec2 Pose::apply_inverse(Vec2 world) const { return rotate(world - position(), -theta_); }

Pose Pose::in_frame(const Pose &frame) const { return {frame.apply(position()), frame.theta() + theta_}; }

Pose Pose::relative_to(const Pose &frame) const { return {frame.apply_inverse(position()), theta_ - frame.theta()}; }

std::uint64_t Rng::index(std::uint64_t n)
{
    if (n <= 1)
        return 0;
    const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t limit = max - (max % n + 1) % n;
    std::uint64_t r = engine_();
    while (r > limit)
        r = engine_();
    return r % n;
}

double Rng::normal()
{
    if (has_cached_)
    {
        has_cached_ = false;
        return cached_normal_;
    }
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    cached_normal_ = r * std::sin(kTwoPi * u2);
    has_cached_ = true;
    return r * std::cos(kTwoPi * u2);
}

std::uint64_t mix_seed(std::uint64_t base, std::uint64_t stream)
{
    std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

} // namespace guidedplan
