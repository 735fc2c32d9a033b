#pragma once

#include <optional>
#include <vector>

#include "bosonstat/io.hpp"
#include "bosonstat/stats.hpp"

// The HOM indistinguishability estimation pipeline: loss correction from the
// one-survivor frequency, time labeling of the single-particle data, the
// ratio Q with a first-order delta correction, and the BC bootstrap interval.
namespace bosonstat::hom {

struct SinglesSummary {
  std::vector<double> site_probs;  // conditioned on survival, per mode
  long long survived = 0;
  long long empty_count = 0;
  long long total = 0;

  double empty_freq() const {
    return static_cast<double>(empty_count) / static_cast<double>(total);
  }
};

SinglesSummary summarize_singles(const io::CountsDataset& dataset);

struct PairSummary {
  long long coincidences = 0;  // one detection in each subset (any distinct pair
                               // when no subsets are given)
  long long one_survivor = 0;  // exactly one site detected
  long long total = 0;
};

PairSummary summarize_pairs(const io::CountsDataset& dataset, const std::vector<int>& s1,
                            const std::vector<int>& s2);

struct PointEstimate {
  double q = 0.0;       // delta-corrected coincidence ratio
  double p_loss = 0.0;  // from the one-survivor frequency
};

PointEstimate point_estimate(const SinglesSummary& a, const SinglesSummary& b,
                             const PairSummary& pairs, const std::vector<int>& s1,
                             const std::vector<int>& s2);

struct HomResult {
  double q = 0.0;
  double p_loss = 0.0;
  double lower_bound = 0.0;  // 1 - Q, clipped to [0, 1]
  std::optional<double> indistinguishability;  // (1 - Q)/tau clipped at 1, when tau given
  std::optional<stats::BootstrapInterval> interval;
  std::optional<stats::BootstrapInterval> lower_bound_interval;
};

// Full pipeline over three datasets (two singles, one pairs). Empty subset
// lists mean "any distinct pair of sites". Bootstrap resamples every dataset
// multinomially with per-replicate seed-derived streams; results depend only
// on the seed, not the thread count.
HomResult estimate(const io::CountsDataset& singles_a, const io::CountsDataset& singles_b,
                   const io::CountsDataset& pairs, std::optional<double> tau,
                   const std::vector<int>& s1 = {}, const std::vector<int>& s2 = {},
                   int bootstrap = 0, std::uint64_t seed = 0, double alpha = 0.16,
                   int n_threads = 1);

// Multinomial resample of every setting's counts (bootstrap helper).
io::CountsDataset resample_dataset(const io::CountsDataset& dataset, Rng& rng);

}  // namespace bosonstat::hom
