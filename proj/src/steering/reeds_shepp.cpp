#include <guidedplan/errors.hpp>
#include <guidedplan/steering.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

// Reeds-Shepp word solver following the formula numbering of Reeds & Shepp (1990),
// with the time-flip, reflect and backwards symmetries enumerated explicitly.

namespace guidedplan
{

namespace
{

constexpr double kZero = 10.0 * std::numeric_limits<double>::epsilon();
constexpr double kHalfPi = 0.5 * kPi;

enum Kind : char
{
    N = 0,
    L = 'L',
    R = 'R',
    S = 'S',
};

constexpr Kind kTypes[18][5] = {
    {L, R, L, N, N}, {R, L, R, N, N}, {L, R, L, R, N}, {R, L, R, L, N}, {L, R, S, L, N}, {R, L, S, R, N},
    {L, S, R, L, N}, {R, S, L, R, N}, {L, R, S, R, N}, {R, L, S, L, N}, {R, S, R, L, N}, {L, S, L, R, N},
    {L, S, R, N, N}, {R, S, L, N, N}, {L, S, L, N, N}, {R, S, R, N, N}, {L, R, S, L, R}, {R, L, S, R, L},
};

struct Word
{
    int type = -1;
    double v[5] = {0, 0, 0, 0, 0};
    double length = std::numeric_limits<double>::infinity();
};

void consider(Word &best, int type, std::initializer_list<double> values)
{
    double total = 0.0;
    for (double x : values)
        total += std::abs(x);
    if (!(total < best.length))
        return;
    best.type = type;
    best.length = total;
    int i = 0;
    for (double x : values)
        best.v[i++] = x;
    for (; i < 5; ++i)
        best.v[i] = 0.0;
}

double mod_pi(double x)
{
    double v = std::fmod(x, kTwoPi);
    if (v < -kPi)
        v += kTwoPi;
    else if (v > kPi)
        v -= kTwoPi;
    return v;
}

void polar(double x, double y, double &r, double &theta)
{
    r = std::sqrt(x * x + y * y);
    theta = std::atan2(y, x);
}

void tau_omega(double u, double v, double xi, double eta, double phi, double &tau, double &omega)
{
    const double delta = mod_pi(u - v);
    const double a = std::sin(u) - std::sin(delta);
    const double b = std::cos(u) - std::cos(delta) - 1.0;
    const double t1 = std::atan2(eta * a - xi * b, xi * a + eta * b);
    const double t2 = 2.0 * (std::cos(delta) - std::cos(v) - std::cos(u)) + 3.0;
    tau = t2 < 0.0 ? mod_pi(t1 + kPi) : mod_pi(t1);
    omega = mod_pi(tau - u + v - phi);
}

// 8.1
bool lp_sp_lp(double x, double y, double phi, double &t, double &u, double &v)
{
    polar(x - std::sin(phi), y - 1.0 + std::cos(phi), u, t);
    if (t >= -kZero)
    {
        v = mod_pi(phi - t);
        if (v >= -kZero)
            return true;
    }
    return false;
}

// 8.2
bool lp_sp_rp(double x, double y, double phi, double &t, double &u, double &v)
{
    double t1 = 0.0, u1 = 0.0;
    polar(x + std::sin(phi), y - 1.0 - std::cos(phi), u1, t1);
    u1 = u1 * u1;
    if (u1 >= 4.0)
    {
        u = std::sqrt(u1 - 4.0);
        const double theta = std::atan2(2.0, u);
        t = mod_pi(t1 + theta);
        v = mod_pi(t - phi);
        return t >= -kZero && v >= -kZero;
    }
    return false;
}

void csc(double x, double y, double phi, Word &best)
{
    double t = 0, u = 0, v = 0;
    if (lp_sp_lp(x, y, phi, t, u, v))
        consider(best, 14, {t, u, v});
    if (lp_sp_lp(-x, y, -phi, t, u, v))
        consider(best, 14, {-t, -u, -v});
    if (lp_sp_lp(x, -y, -phi, t, u, v))
        consider(best, 15, {t, u, v});
    if (lp_sp_lp(-x, -y, phi, t, u, v))
        consider(best, 15, {-t, -u, -v});
    if (lp_sp_rp(x, y, phi, t, u, v))
        consider(best, 12, {t, u, v});
    if (lp_sp_rp(-x, y, -phi, t, u, v))
        consider(best, 12, {-t, -u, -v});
    if (lp_sp_rp(x, -y, -phi, t, u, v))
        consider(best, 13, {t, u, v});
    if (lp_sp_rp(-x, -y, phi, t, u, v))
        consider(best, 13, {-t, -u, -v});
}

// 8.3
bool lp_rm_l(double x, double y, double phi, double &t, double &u, double &v)
{
    const double xi = x - std::sin(phi);
    const double eta = y - 1.0 + std::cos(phi);
    double u1 = 0.0, theta = 0.0;
    polar(xi, eta, u1, theta);
    if (u1 <= 4.0)
    {
        u = -2.0 * std::asin(0.25 * u1);
        t = mod_pi(theta + 0.5 * u + kPi);
        v = mod_pi(phi - t + u);
        return t >= -kZero && u <= kZero;
    }
    return false;
}

void ccc(double x, double y, double phi, Word &best)
{
    double t = 0, u = 0, v = 0;
    if (lp_rm_l(x, y, phi, t, u, v))
        consider(best, 0, {t, u, v});
    if (lp_rm_l(-x, y, -phi, t, u, v))
        consider(best, 0, {-t, -u, -v});
    if (lp_rm_l(x, -y, -phi, t, u, v))
        consider(best, 1, {t, u, v});
    if (lp_rm_l(-x, -y, phi, t, u, v))
        consider(best, 1, {-t, -u, -v});

    const double xb = x * std::cos(phi) + y * std::sin(phi);
    const double yb = x * std::sin(phi) - y * std::cos(phi);
    if (lp_rm_l(xb, yb, phi, t, u, v))
        consider(best, 0, {v, u, t});
    if (lp_rm_l(-xb, yb, -phi, t, u, v))
        consider(best, 0, {-v, -u, -t});
    if (lp_rm_l(xb, -yb, -phi, t, u, v))
        consider(best, 1, {v, u, t});
    if (lp_rm_l(-xb, -yb, phi, t, u, v))
        consider(best, 1, {-v, -u, -t});
}

// 8.7
bool lp_rup_lum_rm(double x, double y, double phi, double &t, double &u, double &v)
{
    const double xi = x + std::sin(phi);
    const double eta = y - 1.0 - std::cos(phi);
    const double rho = 0.25 * (2.0 + std::sqrt(xi * xi + eta * eta));
    if (rho <= 1.0)
    {
        u = std::acos(rho);
        tau_omega(u, -u, xi, eta, phi, t, v);
        return t >= -kZero && v <= kZero;
    }
    return false;
}

// 8.8
bool lp_rum_lum_rp(double x, double y, double phi, double &t, double &u, double &v)
{
    const double xi = x + std::sin(phi);
    const double eta = y - 1.0 - std::cos(phi);
    const double rho = (20.0 - xi * xi - eta * eta) / 16.0;
    if (rho >= 0.0 && rho <= 1.0)
    {
        u = -std::acos(rho);
        if (u >= -kHalfPi)
        {
            tau_omega(u, u, xi, eta, phi, t, v);
            return t >= -kZero && v >= -kZero;
        }
    }
    return false;
}

void cccc(double x, double y, double phi, Word &best)
{
    double t = 0, u = 0, v = 0;
    if (lp_rup_lum_rm(x, y, phi, t, u, v))
        consider(best, 2, {t, u, -u, v});
    if (lp_rup_lum_rm(-x, y, -phi, t, u, v))
        consider(best, 2, {-t, -u, u, -v});
    if (lp_rup_lum_rm(x, -y, -phi, t, u, v))
        consider(best, 3, {t, u, -u, v});
    if (lp_rup_lum_rm(-x, -y, phi, t, u, v))
        consider(best, 3, {-t, -u, u, -v});

    if (lp_rum_lum_rp(x, y, phi, t, u, v))
        consider(best, 2, {t, u, u, v});
    if (lp_rum_lum_rp(-x, y, -phi, t, u, v))
        consider(best, 2, {-t, -u, -u, -v});
    if (lp_rum_lum_rp(x, -y, -phi, t, u, v))
        consider(best, 3, {t, u, u, v});
    if (lp_rum_lum_rp(-x, -y, phi, t, u, v))
        consider(best, 3, {-t, -u, -u, -v});
}

// 8.9
bool lp_rm_sm_lm(double x, double y, double phi, double &t, double &u, double &v)
{
    const double xi = x - std::sin(phi);
    const double eta = y - 1.0 + std::cos(phi);
    double rho = 0.0, theta = 0.0;
    polar(xi, eta, rho, theta);
    if (rho >= 2.0)
    {
        const double r = std::sqrt(rho * rho - 4.0);
        u = 2.0 - r;
        t = mod_pi(theta + std::atan2(r, -2.0));
        v = mod_pi(phi - kHalfPi - t);
        return t >= -kZero && u <= kZero && v <= kZero;
    }
    return false;
}

// 8.10
bool lp_rm_sm_rm(double x, double y, double phi, double &t, double &u, double &v)
{
    const double xi = x + std::sin(phi);
    const double eta = y - 1.0 - std::cos(phi);
    double rho = 0.0, theta = 0.0;
    polar(-eta, xi, rho, theta);
    if (rho >= 2.0)
    {
        t = theta;
        u = 2.0 - rho;
        v = mod_pi(t + kHalfPi - phi);
        return t >= -kZero && u <= kZero && v <= kZero;
    }
    return false;
}

void ccsc(double x, double y, double phi, Word &best)
{
    double t = 0, u = 0, v = 0;
    if (lp_rm_sm_lm(x, y, phi, t, u, v))
        consider(best, 4, {t, -kHalfPi, u, v});
    if (lp_rm_sm_lm(-x, y, -phi, t, u, v))
        consider(best, 4, {-t, kHalfPi, -u, -v});
    if (lp_rm_sm_lm(x, -y, -phi, t, u, v))
        consider(best, 5, {t, -kHalfPi, u, v});
    if (lp_rm_sm_lm(-x, -y, phi, t, u, v))
        consider(best, 5, {-t, kHalfPi, -u, -v});

    if (lp_rm_sm_rm(x, y, phi, t, u, v))
        consider(best, 8, {t, -kHalfPi, u, v});
    if (lp_rm_sm_rm(-x, y, -phi, t, u, v))
        consider(best, 8, {-t, kHalfPi, -u, -v});
    if (lp_rm_sm_rm(x, -y, -phi, t, u, v))
        consider(best, 9, {t, -kHalfPi, u, v});
    if (lp_rm_sm_rm(-x, -y, phi, t, u, v))
        consider(best, 9, {-t, kHalfPi, -u, -v});

    const double xb = x * std::cos(phi) + y * std::sin(phi);
    const double yb = x * std::sin(phi) - y * std::cos(phi);
    if (lp_rm_sm_lm(xb, yb, phi, t, u, v))
        consider(best, 6, {v, u, -kHalfPi, t});
    if (lp_rm_sm_lm(-xb, yb, -phi, t, u, v))
        consider(best, 6, {-v, -u, kHalfPi, -t});
    if (lp_rm_sm_lm(xb, -yb, -phi, t, u, v))
        consider(best, 7, {v, u, -kHalfPi, t});
    if (lp_rm_sm_lm(-xb, -yb, phi, t, u, v))
        consider(best, 7, {-v, -u, kHalfPi, -t});

    if (lp_rm_sm_rm(xb, yb, phi, t, u, v))
        consider(best, 10, {v, u, -kHalfPi, t});
    if (lp_rm_sm_rm(-xb, yb, -phi, t, u, v))
        consider(best, 10, {-v, -u, kHalfPi, -t});
    if (lp_rm_sm_rm(xb, -yb, -phi, t, u, v))
        consider(best, 11, {v, u, -kHalfPi, t});
    if (lp_rm_sm_rm(-xb, -yb, phi, t, u, v))
        consider(best, 11, {-v, -u, kHalfPi, -t});
}

// 8.11
bool lp_rm_s_lm_rp(double x, double y, double phi, double &t, double &u, double &v)
{
    const double xi = x + std::sin(phi);
    const double eta = y - 1.0 - std::cos(phi);
    double rho = 0.0, theta = 0.0;
    polar(xi, eta, rho, theta);
    if (rho >= 2.0)
    {
        u = 4.0 - std::sqrt(rho * rho - 4.0);
        if (u <= kZero)
        {
            t = mod_pi(std::atan2((4.0 - u) * xi - 2.0 * eta, -2.0 * xi + (u - 4.0) * eta));
            v = mod_pi(t - phi);
            return t >= -kZero && v >= -kZero;
        }
    }
    return false;
}

void ccscc(double x, double y, double phi, Word &best)
{
    double t = 0, u = 0, v = 0;
    if (lp_rm_s_lm_rp(x, y, phi, t, u, v))
        consider(best, 16, {t, -kHalfPi, u, -kHalfPi, v});
    if (lp_rm_s_lm_rp(-x, y, -phi, t, u, v))
        consider(best, 16, {-t, kHalfPi, -u, kHalfPi, -v});
    if (lp_rm_s_lm_rp(x, -y, -phi, t, u, v))
        consider(best, 17, {t, -kHalfPi, u, -kHalfPi, v});
    if (lp_rm_s_lm_rp(-x, -y, phi, t, u, v))
        consider(best, 17, {-t, kHalfPi, -u, kHalfPi, -v});
}

} // namespace

SteeringPath reeds_shepp_shortest(const Pose &q0, const Pose &q1, double kappa_max)
{
    if (!(kappa_max > 0.0))
        throw PreconditionError("reeds_shepp: kappa_max must be positive");
    if (q0 == q1)
        return SteeringPath(q0, q1, SteeringFamily::ReedsShepp, {});

    const double radius = 1.0 / kappa_max;
    const Vec2 local = rotate(q1.position() - q0.position(), -q0.theta());
    const double x = local.x / radius;
    const double y = local.y / radius;
    const double phi = normalize_angle(q1.theta() - q0.theta());

    Word best;
    csc(x, y, phi, best);
    ccc(x, y, phi, best);
    cccc(x, y, phi, best);
    ccsc(x, y, phi, best);
    ccscc(x, y, phi, best);
    if (best.type < 0)
        throw Error("reeds_shepp: no word admits a solution");

    std::vector<Segment> segments;
    for (int i = 0; i < 5 && kTypes[best.type][i] != N; ++i)
    {
        const Kind k = kTypes[best.type][i];
        const double len = best.v[i] * radius;
        if (k == L)
            segments.push_back({SegmentType::Left, len, kappa_max});
        else if (k == R)
            segments.push_back({SegmentType::Right, len, -kappa_max});
        else
            segments.push_back({SegmentType::Straight, len, 0.0});
    }
    return SteeringPath(q0, q1, SteeringFamily::ReedsShepp, std::move(segments));
}

} // namespace guidedplan
