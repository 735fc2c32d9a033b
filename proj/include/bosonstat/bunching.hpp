#pragma once

#include <optional>
#include <vector>

#include "bosonstat/common.hpp"
#include "bosonstat/hidden_dof.hpp"
#include "bosonstat/linopt.hpp"
#include "bosonstat/rng.hpp"

// Two-particle HOM quantities, indistinguishability estimators, immanants,
// and generalized/averaged/modified bunching probabilities.
namespace bosonstat::bunching {

using hidden_dof::PartitionMixture;
using linopt::OccupationList;
using linopt::SiteList;
using symrep::Partition;

// p(l|i) = |U_{l1 i1}|^2 |U_{l2 i2}|^2 + |U_{l1 i2}|^2 |U_{l2 i1}|^2
//          + 2 I Re(U*_{l1 i1} U*_{l2 i2} U_{l1 i2} U_{l2 i1}),
// the two-particle coincidence probability, affine in the
// indistinguishability I.
double coincidence_probability(const MatrixXcd& u, int i1, int i2, int l1, int l2,
                               double indistinguishability);

// tau_{S,i}(U) over a pair of disjoint output subsets; guaranteed <= 1.
double tau(const MatrixXcd& u, const SiteList& s1, const SiteList& s2, int i1, int i2);

// I = (1 - Q)/tau, clipped above at 1.
double estimate_indistinguishability(double q_hat, double tau_value);
// Calibration-free lower bound I >= 1 - Q.
double indistinguishability_lower_bound(double q_hat);

// Calibrated-loss estimator from vacuum events:
// I = (p2_empty - p1_empty_a * p1_empty_b - same_site_dist)/same_site_dist,
// with same_site_dist = sum_l p_obs(l|i1) p_obs(l|i2) from raw (lossy)
// single-particle observations.
double indistinguishability_from_vacuum(double p2_empty, double p1_empty_a, double p1_empty_b,
                                        double same_site_dist);

// Normalized generalized matrix function for the full symmetric group,
// (1/chi_lambda(e)) sum_sigma chi_lambda(sigma) prod_x M_{x, sigma(x)}.
// lambda = (n) gives the permanent, (1^n) the determinant.
complexd normalized_immanant(const MatrixXcd& m, const Partition& lambda);

// Gram matrix G_{xy} = <U(S|i_x), U(S|i_y)> of the columns restricted to S.
MatrixXcd gram_matrix(const MatrixXcd& u, const SiteList& subset, const SiteList& i);

// Probability that all n particles land inside S:
// b(S) = sum_lambda p^lambda * normalized_immanant(G, lambda).
double generalized_bunching(const MatrixXcd& u, const SiteList& i, const SiteList& subset,
                            const PartitionMixture& mix);

// Nearest integer to m - m/n, the subset size maximizing the
// bosonic-vs-distinguishable averaged bunching gap.
int optimal_k(int m, int n);

struct AveragedBunching {
  double value = 0.0;
  bool k_below_n = false;  // k < n: no size-k subset can contain all particles
};

// Exact expectation E[ C(m - #(G), k - #(G)) / C(m, k) ] over the outcome
// distribution; equals the average of generalized_bunching over all size-k
// subsets. The fermionic component is emitted in closed form
// C(m-n, k-n)/C(m, k).
AveragedBunching average_generalized_bunching(const MatrixXcd& u, const SiteList& i, int k,
                                              const PartitionMixture& mix);

// Exact binomial-ratio C(m-j, k-j)/C(m, k) used by the averaged statistics.
double bunching_ratio(int m, int k, int occupied);

// Single-particle count data for the Monte Carlo estimators: outcome site
// per trial, with site 0 the loss token (excluded from occupied counts).
struct SingleParticleCounts {
  std::vector<int> sites;         // distinct outcome labels, 0 = lost
  std::vector<long long> counts;  // same length
};

// Modified generalized bunching for distinguishable particles, estimated by
// resampling composite outcomes from per-input single-particle datasets.
// Each draw builds an occupation list from the n sampled sites (losses
// dropped), reduces it mod 2 (parity projection), and averages
// C(m - #, k - #)/C(m, k). Resamples stream in chunks with independent
// seed-derived RNG streams and chunk sums are reduced in chunk order, so the
// result depends only on (seed, chunk_size) -- not on the thread count.
double modified_bunching_mc(const std::vector<SingleParticleCounts>& per_input_data, int m,
                            int k, long long n_mc, std::uint64_t seed,
                            long long chunk_size = 1 << 16, int n_threads = 1);

}  // namespace bosonstat::bunching
