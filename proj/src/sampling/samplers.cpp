#include <guidedplan/errors.hpp>
#include <guidedplan/sampling.hpp>

#include <cmath>

namespace guidedplan
{

void SamplerConfig::validate() const
{
    if (n_batch == 0)
        throw ConfigError("n_batch must be positive");
    if (!(batch_rate > 0.0))
        throw ConfigError("batch_rate must be positive");
    if (!(goal_bias >= 0.0 && goal_bias <= 1.0))
        throw ConfigError("goal_bias must lie in [0, 1]");
    if (!(mix_uniform >= 0.0 && mix_uniform <= 1.0))
        throw ConfigError("mix_uniform must lie in [0, 1]");
    if (!(p_path_threshold >= 0.0 && p_path_threshold < 1.0))
        throw ConfigError("p_path_threshold must lie in [0, 1)");
}

std::vector<std::size_t> low_variance_sample(std::span<const double> weights, std::size_t n, Rng &rng)
{
    double total = 0.0;
    for (double w : weights)
    {
        if (!(w >= 0.0))
            throw PreconditionError("low_variance_sample: negative or NaN weight");
        total += w;
    }
    if (!(total > 0.0))
        throw EmptyDistribution();

    std::vector<std::size_t> out;
    out.reserve(n);
    if (n == 0)
        return out;
    const double step = total / static_cast<double>(n);
    const double r = rng.uniform() * step;

    std::size_t i = 0;
    while (weights[i] == 0.0)
        ++i;
    std::size_t last_positive = i;
    double cumulative = weights[i];
    for (std::size_t k = 0; k < n; ++k)
    {
        const double u = r + static_cast<double>(k) * step;
        while (u >= cumulative && i + 1 < weights.size())
        {
            ++i;
            cumulative += weights[i];
            if (weights[i] > 0.0)
                last_positive = i;
        }
        // Rounding can push u past the final cumulative sum; never report a zero-weight cell.
        out.push_back(weights[i] > 0.0 ? i : last_positive);
    }
    return out;
}

std::vector<PoseSample> sample_prediction(const PredictionGrids &grids, std::size_t n, double threshold, Rng &rng)
{
    const GridGeometry &g = grids.geometry;
    std::vector<std::size_t> cells;
    std::vector<double> weights;
    for (std::size_t i = 0; i < grids.p_path.size(); ++i)
    {
        if (grids.p_path[i] > threshold)
        {
            cells.push_back(i);
            weights.push_back(grids.p_path[i]);
        }
    }
    if (cells.empty())
        throw DegeneratePrediction();

    const std::vector<std::size_t> picks = low_variance_sample(weights, n, rng);
    const double res = g.resolution();
    std::vector<PoseSample> out;
    out.reserve(n);
    for (std::size_t pick : picks)
    {
        const std::size_t cell = cells[pick];
        const CellIndex c = g.cell_at(cell);
        const double u = rng.uniform();
        const double v = rng.uniform();
        const Vec2 p = g.to_world({(c.ix + u) * res, (c.iy + v) * res});
        const double sin_t = grids.sin_theta[cell];
        const double cos_t = grids.cos_theta[cell];
        const double theta = g.origin().theta() + std::atan2(sin_t, cos_t);
        out.push_back({Pose(p, theta), SampleSource::Prediction});
    }
    return out;
}

PoseSample sample_uniform(const Extent &extent, const Pose &goal, double goal_bias, Rng &rng)
{
    if (!(extent.width() > 0.0 && extent.height() > 0.0))
        throw PreconditionError("sample_uniform: extent must be positive");
    if (goal_bias > 0.0 && rng.uniform() < goal_bias)
        return {goal, SampleSource::Goal};
    const double x = rng.uniform(extent.x_min, extent.x_max);
    const double y = rng.uniform(extent.y_min, extent.y_max);
    const double theta = rng.uniform(-kPi, kPi);
    return {Pose(x, y, theta), SampleSource::Uniform};
}

std::vector<PoseSample> sample_ose(std::span<const OseCircle> circles, std::size_t n, Rng &rng)
{
    if (circles.empty())
        throw PreconditionError("sample_ose: empty circle chain");
    std::vector<PoseSample> out;
    out.reserve(n);
    for (std::size_t k = 0; k < n; ++k)
    {
        const OseCircle &c = circles[rng.index(circles.size())];
        const double sigma = c.radius / 3.0;
        const double x = rng.normal(c.center.x, sigma);
        const double y = rng.normal(c.center.y, sigma);
        const double theta = rng.normal(c.heading, kPi / 6.0);
        out.push_back({Pose(x, y, theta), SampleSource::Ose});
    }
    return out;
}

UniformSampler::UniformSampler(Extent extent, Pose goal, double goal_bias, std::uint64_t seed)
    : extent_(extent), goal_(goal), goal_bias_(goal_bias), rng_(seed)
{
}

PoseSample UniformSampler::draw(double) { return sample_uniform(extent_, goal_, goal_bias_, rng_); }

PredictionSource::PredictionSource(PredictionGrids grids, double threshold)
    : grids_(std::move(grids)), threshold_(threshold)
{
}

std::vector<PoseSample> PredictionSource::batch(std::size_t n, Rng &rng)
{
    return sample_prediction(grids_, n, threshold_, rng);
}

OseSource::OseSource(std::vector<OseCircle> circles) : circles_(std::move(circles)) {}

std::vector<PoseSample> OseSource::batch(std::size_t n, Rng &rng) { return sample_ose(circles_, n, rng); }

std::vector<PoseSample> FailedSource::batch(std::size_t, Rng &) { throw Error(name_ + ": " + reason_); }

} // namespace guidedplan
