#pragma once

#include <array>
#include <cstdint>
#include <random>

namespace ldgba::pomdp {

/// Independent random streams, so that e.g. changing how often the agent
/// explores does not shift the environment's noise sequence.
enum class Stream : std::uint32_t { Transition, Observation, Label, Exploration, Init, Replay, Weights, Count };

class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : seed_(seed) {
    for (std::uint32_t k = 0; k < streams_.size(); ++k) {
      std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), k, 0x6c64u};
      streams_[k].seed(seq);
    }
  }

  std::uint64_t seed() const { return seed_; }

  std::mt19937_64& engine(Stream s) { return streams_.at(static_cast<std::size_t>(s)); }

  /// Uniform double in [0, 1) from the top 53 bits.
  double uniform(Stream s) { return static_cast<double>(engine(s)() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n); n > 0. Rejection sampling keeps it unbiased.
  std::size_t index(Stream s, std::size_t n) {
    const std::uint64_t range = static_cast<std::uint64_t>(n);
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % range;
    std::uint64_t x;
    do x = engine(s)();
    while (x >= limit);
    return static_cast<std::size_t>(x % range);
  }

  bool bernoulli(Stream s, double p) { return uniform(s) < p; }

 private:
  std::uint64_t seed_;
  std::array<std::mt19937_64, static_cast<std::size_t>(Stream::Count)> streams_;
};

}  // namespace ldgba::pomdp
