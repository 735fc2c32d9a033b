#pragma once

#include <cstdint>
#include <vector>

namespace bosonstat {

// xoshiro256** 1.0 (Blackman & Vigna, public domain reference
// implementation), seeded through splitmix64. Stream version tag: "xs256**-1".
// Every stochastic entry point in the library takes an explicit seed; results
// are reproducible within this implementation but no cross-implementation
// stream equality is promised or relied upon.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();

  // Uniform double in [0, 1) with 53 random bits.
  double uniform();

  // Uniform integer in [0, bound), bound > 0. Unbiased (rejection sampling).
  std::uint64_t uniform_below(std::uint64_t bound);

  // Index sampled from an unnormalized nonnegative weight vector.
  std::size_t discrete(const std::vector<double>& weights);

  // Derives an independent child stream; child i of a given parent is a
  // fixed function of (parent seed, i), used for per-chunk / per-replicate
  // parallel streams.
  Rng child(std::uint64_t stream_index) const;

  static const char* algorithm() { return "xoshiro256** 1.0 / splitmix64 (xs256**-1)"; }

 private:
  std::uint64_t state_[4];
  std::uint64_t seed_;
};

// N draws from the discrete distribution `probs` (must sum to ~1); returns
// counts per category. Deterministic given the Rng state.
std::vector<long long> multinomial_draw(Rng& rng, const std::vector<double>& probs,
                                        long long n_draws);

}  // namespace bosonstat
