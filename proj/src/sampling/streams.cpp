#include <guidedplan/errors.hpp>
#include <guidedplan/sampling.hpp>

#include <cmath>
#include <iostream>

namespace guidedplan
{

MixedStream::MixedStream(std::unique_ptr<GuidedSource> guided, std::unique_ptr<Sampler> uniform,
                         const SamplerConfig &config)
    : guided_(std::move(guided)), uniform_(std::move(uniform)), config_(config), rng_(mix_seed(config.rng_seed, 7))
{
    config_.validate();
    if (!uniform_)
        throw PreconditionError("mixed stream needs a uniform sampler");
    if (!guided_)
        degraded_ = true;
}

PoseSample MixedStream::draw(double now_s)
{
    const double m = config_.mix_uniform;
    const double k = static_cast<double>(draws_++);
    const bool uniform_turn = std::floor((k + 1.0) * m) > std::floor(k * m);
    if (!uniform_turn && !degraded_)
    {
        const auto epoch = static_cast<long long>(std::floor(now_s * config_.batch_rate));
        if (epoch != epoch_ || batch_.empty())
        {
            try
            {
                batch_ = guided_->batch(config_.n_batch, rng_);
                cursor_ = 0;
                epoch_ = epoch;
                ++refreshes_;
            }
            catch (const Error &e)
            {
                std::cerr << "warning: guided sampler '" << guided_->name() << "' failed (" << e.what()
                          << "); falling back to uniform sampling\n";
                degraded_ = true;
                batch_.clear();
            }
        }
        if (!degraded_ && !batch_.empty())
        {
            ++guided_draws_;
            return batch_[cursor_++ % batch_.size()];
        }
    }
    ++uniform_draws_;
    return uniform_->draw(now_s);
}

} // namespace guidedplan
