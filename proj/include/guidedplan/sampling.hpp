#pragma once

#include <guidedplan/grid.hpp>
#include <guidedplan/ose.hpp>
#include <guidedplan/prediction_grids.hpp>
#include <guidedplan/rng.hpp>

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace guidedplan
{

enum class SampleSource
{
    Uniform,
    Ose,
    Prediction,
    Goal,
};

struct PoseSample
{
    Pose pose;
    SampleSource source = SampleSource::Uniform;
};

struct SamplerConfig
{
    std::size_t n_batch = 100;
    double batch_rate = 4.0;       ///< Hz
    double goal_bias = 0.05;
    double mix_uniform = 0.5;
    double p_path_threshold = 0.5;
    std::uint64_t rng_seed = 0;

    void validate() const;
};

/// Systematic resampling: one offset r ~ U[0, W/n), then the cells at cumulative
/// positions r + k W/n. Returns indices into `weights`.
/// Throws EmptyDistribution when no weight is positive.
std::vector<std::size_t> low_variance_sample(std::span<const double> weights, std::size_t n, Rng &rng);

/// Draws n poses from the super-threshold cells of a prediction, weighted by p_path.
/// Throws DegeneratePrediction if no cell exceeds the threshold.
std::vector<PoseSample> sample_prediction(const PredictionGrids &grids, std::size_t n, double threshold, Rng &rng);

PoseSample sample_uniform(const Extent &extent, const Pose &goal, double goal_bias, Rng &rng);

/// Gaussian samples around uniformly chosen circles: sigma_xy = r / 3, sigma_theta = pi / 6.
std::vector<PoseSample> sample_ose(std::span<const OseCircle> circles, std::size_t n, Rng &rng);

/// Streaming sample source queried by the planner with the current planning time.
class Sampler
{
  public:
    virtual ~Sampler() = default;
    virtual PoseSample draw(double now_s) = 0;
};

class UniformSampler final : public Sampler
{
  public:
    UniformSampler(Extent extent, Pose goal, double goal_bias, std::uint64_t seed);
    PoseSample draw(double now_s) override;

  private:
    Extent extent_;
    Pose goal_;
    double goal_bias_;
    Rng rng_;
};

/// Produces batches of guided poses; may throw (degenerate prediction, failed exploration).
class GuidedSource
{
  public:
    virtual ~GuidedSource() = default;
    virtual std::vector<PoseSample> batch(std::size_t n, Rng &rng) = 0;
    virtual std::string name() const = 0;
};

class PredictionSource final : public GuidedSource
{
  public:
    PredictionSource(PredictionGrids grids, double threshold);
    std::vector<PoseSample> batch(std::size_t n, Rng &rng) override;
    std::string name() const override { return "prediction"; }

  private:
    PredictionGrids grids_;
    double threshold_;
};

class OseSource final : public GuidedSource
{
  public:
    explicit OseSource(std::vector<OseCircle> circles);
    std::vector<PoseSample> batch(std::size_t n, Rng &rng) override;
    std::string name() const override { return "ose"; }

  private:
    std::vector<OseCircle> circles_;
};

/// Source that always fails; used when a guide could not be built.
class FailedSource final : public GuidedSource
{
  public:
    FailedSource(std::string name, std::string reason) : name_(std::move(name)), reason_(std::move(reason)) {}
    std::vector<PoseSample> batch(std::size_t n, Rng &rng) override;
    std::string name() const override { return name_; }

  private:
    std::string name_;
    std::string reason_;
};

/// Interleaves guided batch samples with uniform draws.
///
/// Draw k is uniform iff floor((k + 1) m) > floor(k m) for m = mix_uniform, which
/// alternates strictly at m = 0.5. The guided batch is refreshed whenever
/// floor(now * batch_rate) changes and is cycled in between. If the guided source
/// throws, the stream degrades to the uniform sampler and warns once on stderr.
class MixedStream final : public Sampler
{
  public:
    MixedStream(std::unique_ptr<GuidedSource> guided, std::unique_ptr<Sampler> uniform, const SamplerConfig &config);
    PoseSample draw(double now_s) override;

    std::size_t refreshes() const { return refreshes_; }
    bool degraded() const { return degraded_; }
    std::size_t guided_draws() const { return guided_draws_; }
    std::size_t uniform_draws() const { return uniform_draws_; }

  private:
    std::unique_ptr<GuidedSource> guided_;
    std::unique_ptr<Sampler> uniform_;
    SamplerConfig config_;
    Rng rng_;
    std::vector<PoseSample> batch_;
    std::size_t cursor_ = 0;
    long long epoch_ = -1;
    std::size_t draws_ = 0;
    std::size_t refreshes_ = 0;
    std::size_t guided_draws_ = 0;
    std::size_t uniform_draws_ = 0;
    bool degraded_ = false;
};

} // namespace guidedplan
