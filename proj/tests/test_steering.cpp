#include "oracles/steering_oracle.hpp"

#include <guidedplan/errors.hpp>
#include <guidedplan/rng.hpp>
#include <guidedplan/steering.hpp>

#include <gtest/gtest.h>

using namespace guidedplan;

namespace
{

constexpr double kKappa = 0.1982;

Pose random_pose(Rng &rng, double range = 20.0)
{
    return Pose(rng.uniform(-range, range), rng.uniform(-range, range), rng.uniform(-kPi, kPi));
}

// Pairs include a share of close-range goals, where the curved words dominate.
std::pair<Pose, Pose> random_pair(Rng &rng, int i)
{
    const Pose a = random_pose(rng);
    if (i % 4 == 0)
        return {a, Pose(a.x() + rng.uniform(-3, 3), a.y() + rng.uniform(-3, 3), rng.uniform(-kPi, kPi))};
    return {a, random_pose(rng)};
}

void expect_endpoint(const SteeringPath &path)
{
    const Pose end = path.integrated_end();
    EXPECT_NEAR(end.x(), path.end().x(), 1e-6);
    EXPECT_NEAR(end.y(), path.end().y(), 1e-6);
    EXPECT_LE(angle_distance(end.theta(), path.end().theta()), 1e-6);
}

} // namespace

TEST(Steering, IdenticalPosesGiveZeroLength)
{
    const Pose q(1.0, -2.0, 0.7);
    EXPECT_NEAR(dubins_shortest(q, q, kKappa).length(), 0.0, 1e-9);
    EXPECT_NEAR(reeds_shepp_shortest(q, q, kKappa).length(), 0.0, 1e-9);
}

TEST(Steering, StraightAhead)
{
    for (const SteeringPath &p : {dubins_shortest(Pose(0, 0, 0), Pose(10, 0, 0), kKappa),
                                  reeds_shepp_shortest(Pose(0, 0, 0), Pose(10, 0, 0), kKappa)})
    {
        ASSERT_EQ(p.segments().size(), 1u);
        EXPECT_EQ(p.segments()[0].type, SegmentType::Straight);
        EXPECT_NEAR(p.length(), 10.0, 1e-9);
    }
}

TEST(Steering, StraightReverse)
{
    const SteeringPath p = reeds_shepp_shortest(Pose(0, 0, 0), Pose(-5, 0, 0), kKappa);
    EXPECT_NEAR(p.length(), 5.0, 1e-9);
    EXPECT_EQ(p.cusps(), 0);
    for (const Segment &s : p.segments())
        EXPECT_LE(s.signed_length, 1e-12);
}

TEST(Steering, TurnInPlaceMatchesOracle)
{
    const double r = 1.0 / kKappa;
    const double rs = oracle::reeds_shepp_length(0, 0, 0, 0, 0, kPi, r);
    const double db = oracle::dubins_length(0, 0, 0, 0, 0, kPi, r);
    EXPECT_NEAR(reeds_shepp_shortest(Pose(0, 0, 0), Pose(0, 0, kPi), kKappa).length(), rs, 1e-9);
    EXPECT_NEAR(dubins_shortest(Pose(0, 0, 0), Pose(0, 0, kPi), kKappa).length(), db, 1e-9);
}

TEST(Steering, DubinsMatchesWordEnumeration)
{
    Rng rng(101);
    const double r = 1.0 / kKappa;
    for (int i = 0; i < 1000; ++i)
    {
        const auto [a, b] = random_pair(rng, i);
        const double expected = oracle::dubins_length(a.x(), a.y(), a.theta(), b.x(), b.y(), b.theta(), r);
        ASSERT_NEAR(dubins_shortest(a, b, kKappa).length(), expected, 1e-9) << "pair " << i;
    }
}

TEST(Steering, ReedsSheppMatchesWordSearch)
{
    Rng rng(102);
    const double r = 1.0 / kKappa;
    for (int i = 0; i < 200; ++i)
    {
        const auto [a, b] = random_pair(rng, i);
        const double expected = oracle::reeds_shepp_length(a.x(), a.y(), a.theta(), b.x(), b.y(), b.theta(), r);
        ASSERT_NEAR(reeds_shepp_shortest(a, b, kKappa).length(), expected, 1e-9) << "pair " << i;
    }
}

TEST(Steering, StructuralInvariants)
{
    Rng rng(103);
    for (int i = 0; i < 2000; ++i)
    {
        const auto [a, b] = random_pair(rng, i);
        const SteeringPath d = dubins_shortest(a, b, kKappa);
        const SteeringPath r = reeds_shepp_shortest(a, b, kKappa);
        expect_endpoint(d);
        expect_endpoint(r);
        EXPECT_EQ(d.family(), SteeringFamily::Dubins);
        EXPECT_EQ(r.family(), SteeringFamily::ReedsShepp);
        for (const Segment &s : d.segments())
            EXPECT_GE(s.signed_length, 0.0);
        for (const SteeringPath *p : {&d, &r})
            for (const Segment &s : p->segments())
            {
                const double k = std::abs(s.kappa);
                EXPECT_TRUE(k == 0.0 || std::abs(k - kKappa) < 1e-12);
                EXPECT_EQ(s.type == SegmentType::Straight, s.kappa == 0.0);
            }
        EXPECT_LE(r.length(), d.length() + 1e-9);
    }
}

TEST(Steering, TriangleInequality)
{
    Rng rng(104);
    for (int i = 0; i < 500; ++i)
    {
        const Pose a = random_pose(rng, 10), b = random_pose(rng, 10), c = random_pose(rng, 10);
        for (SteeringFamily f : {SteeringFamily::Dubins, SteeringFamily::ReedsShepp})
            EXPECT_LE(steering_distance(a, c, f, kKappa),
                      steering_distance(a, b, f, kKappa) + steering_distance(b, c, f, kKappa) + 1e-9);
    }
}

TEST(Steering, ReedsSheppTimeReversalSymmetry)
{
    Rng rng(105);
    for (int i = 0; i < 500; ++i)
    {
        const auto [a, b] = random_pair(rng, i);
        EXPECT_NEAR(reeds_shepp_shortest(a, b, kKappa).length(), reeds_shepp_shortest(b, a, kKappa).length(), 1e-9);
    }
}

TEST(Steering, DubinsInvariantUnderRigidMotion)
{
    Rng rng(106);
    for (int i = 0; i < 500; ++i)
    {
        const auto [a, b] = random_pair(rng, i);
        const Pose frame = random_pose(rng, 50);
        EXPECT_NEAR(dubins_shortest(a, b, kKappa).length(),
                    dubins_shortest(a.in_frame(frame), b.in_frame(frame), kKappa).length(), 1e-9);
    }
}

TEST(Steering, DispatchMatchesFamilies)
{
    Rng rng(107);
    const VehicleParams v;
    for (int i = 0; i < 50; ++i)
    {
        const auto [a, b] = random_pair(rng, i);
        EXPECT_EQ(steer(a, b, SteeringFamily::Dubins, v).length(), dubins_shortest(a, b, v.kappa_max).length());
        EXPECT_EQ(steer(a, b, SteeringFamily::ReedsShepp, v).length(),
                  reeds_shepp_shortest(a, b, v.kappa_max).length());
    }
    EXPECT_EQ(parse_steering_family("dubins"), SteeringFamily::Dubins);
    EXPECT_EQ(parse_steering_family("reeds_shepp"), SteeringFamily::ReedsShepp);
    EXPECT_THROW(parse_steering_family("clothoid"), ConfigError);
}

TEST(Steering, DiscretizeStraight)
{
    const std::vector<State> states = discretize(dubins_shortest(Pose(0, 0, 0), Pose(1, 0, 0), kKappa), 0.1);
    ASSERT_EQ(states.size(), 11u);
    for (int i = 0; i <= 10; ++i)
    {
        EXPECT_NEAR(states[i].pose.x(), 0.1 * i, 1e-12);
        EXPECT_NEAR(states[i].pose.y(), 0.0, 1e-12);
        EXPECT_EQ(states[i].v, 1.0);
    }
}

TEST(Steering, DiscretizeArcStaysOnCircle)
{
    const double r = 1.0 / kKappa;
    const SteeringPath arc(Pose(0, 0, 0), Pose(r, r, kPi / 2), SteeringFamily::Dubins,
                           {Segment{SegmentType::Left, r * kPi / 2, kKappa}});
    expect_endpoint(arc);
    const std::vector<State> states = discretize(arc, 0.1);
    EXPECT_EQ(states.size(), static_cast<std::size_t>(std::ceil(arc.length() / 0.1)) + 1);
    for (const State &s : states)
    {
        const double x = s.pose.x(), y = s.pose.y();
        EXPECT_NEAR(x * x + (y - r) * (y - r), r * r, 1e-9);
        EXPECT_DOUBLE_EQ(s.kappa, kKappa);
    }
}

TEST(Steering, DiscretizeKeepsEndpointsAndDirection)
{
    Rng rng(108);
    for (int i = 0; i < 200; ++i)
    {
        const auto [a, b] = random_pair(rng, i);
        const SteeringPath p = reeds_shepp_shortest(a, b, kKappa);
        const std::vector<State> states = discretize(p, 0.1);
        ASSERT_GE(states.size(), 1u);
        EXPECT_EQ(states.front().pose, a);
        EXPECT_NEAR(states.back().pose.x(), b.x(), 1e-6);
        EXPECT_NEAR(states.back().pose.y(), b.y(), 1e-6);
        for (std::size_t k = 1; k + 1 < states.size(); ++k)
        {
            EXPECT_EQ(std::abs(states[k].v), 1.0);
            EXPECT_LE((states[k].pose.position() - states[k - 1].pose.position()).norm(), 0.1 + 1e-9);
        }
    }
    EXPECT_THROW(discretize(dubins_shortest(Pose(), Pose(1, 0, 0), kKappa), 0.0), PreconditionError);
}
