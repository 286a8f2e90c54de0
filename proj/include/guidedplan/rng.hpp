#pragma once

#include <cstdint>
#include <random>

namespace guidedplan
{

/// Seeded generator with platform-independent derived distributions.
///
/// The engine output of std::mt19937_64 is fully specified; the standard
/// distribution adaptors are not, so the few we need are computed here from
/// raw engine bits to keep generated scenarios bit-identical across toolchains.
class Rng
{
  public:
    explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    /// Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    /// Uniform integer in [0, n).
    std::uint64_t index(std::uint64_t n);
    /// Standard normal (Box-Muller, one value cached).
    double normal();
    double normal(double mean, double stddev) { return mean + stddev * normal(); }
    bool bernoulli(double p) { return uniform() < p; }

  private:
    std::mt19937_64 engine_;
    double cached_normal_ = 0.0;
    bool has_cached_ = false;
};

/// SplitMix64 finalizer; used to derive independent seeds from (base, stream).
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t stream);

} // namespace guidedplan
