#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "bosonstat/common.hpp"

// Statistical toolkit: delta-method bias correction, bias-corrected
// percentile bootstrap, Clopper-Pearson and union-bound ratio intervals,
// Chernoff/Hoeffding Monte Carlo sizing, loss calibration, and time-labeled
// distinguishable-data synthesis.
namespace bosonstat::stats {

double normal_cdf(double x);
// Inverse normal CDF; accurate to well below 1e-9 (rational approximation
// plus one Halley refinement). Returns +-infinity at 1 and 0.
double normal_quantile(double p);

// First-order bias-corrected estimate G = f - (1/2)(1/n) Tr(Sigma H), where
// Sigma is the per-observation sample covariance and H the Hessian of f at
// the sample mean.
double delta_correct(double f_value, const MatrixXd& hessian, const MatrixXd& sample_cov,
                     long long n_samples);
// Variant taking the covariance of the *mean* directly (already divided by
// the per-block sample sizes); used when blocks have different n.
double delta_correct_meancov(double f_value, const MatrixXd& hessian,
                             const MatrixXd& mean_cov);

struct BootstrapInterval {
  double lo = 0.0;
  double hi = 0.0;
  bool degenerate = false;  // all replicates identical and equal to the point
};

// Bias-corrected (no acceleration) percentile interval of intended coverage
// 1-2*alpha: z0 = Phi^-1(#(rep <= point)/B), alpha_i = Phi(2 z0 + z^(..)),
// endpoints are empirical percentiles of the replicates (sorted;
// the beta-th percentile is the ceil(beta*B)-th order statistic).
// A degenerate replicate histogram (all mass at the point value) is flagged;
// callers should switch to the union-bound interval.
BootstrapInterval bootstrap_bc_interval(const std::vector<double>& replicates, double point,
                                        double alpha,
                                        std::optional<double> clip_hi = std::nullopt);

enum class Side { lower, upper };

// Exact one-sided Clopper-Pearson binomial bound at significance alpha,
// computed by bisection on the binomial tail probability (equivalent to the
// Beta-quantile characterization: the bound solves
// P(X <= k | p) = alpha for the upper side, P(X >= k | p) = alpha for the
// lower side).
double clopper_pearson(long long k, long long n, double alpha, Side side);

struct RatioInterval {
  double lo = 0.0;
  double hi = 0.0;
  bool unbounded_hi = false;  // denominator lower bound was 0
};

// Union-bound confidence interval for a ratio of binomial proportions:
// hi = CP_upper(num, alpha - beta_u) / CP_lower(den, beta_u),
// lo = CP_lower(num, alpha - beta_l) / CP_upper(den, beta_l).
// The default splits suit count datasets in the 1e3..1e5 range; they are
// parameters, not universal constants.
RatioInterval union_ratio_interval(std::pair<long long, long long> num,
                                   std::pair<long long, long long> den, double alpha,
                                   double beta_u = 0.004, double beta_l = 0.15999);

// N = ceil(2 log(1/delta) / D(p(1+eps) || p)), Bernoulli Kullback-Leibler.
// cap > 0 mirrors min(N, cap).
long long chernoff_samples(double p_ref, double epsilon, double delta, long long cap = 0);

// N = ceil(log(2/delta) / (2 (p eps)^2)), clamped at 0 when the log is
// nonpositive. cap > 0 mirrors min(N, cap).
long long hoeffding_samples(double p_ref, double epsilon, double delta, long long cap = 0);

// Smaller root of 2 p (1-p) = p_beta: the single-particle loss probability
// from the observed exactly-one-survivor frequency.
double loss_from_single_survival(double p_beta);

// Symmetrized product distribution of two independent single-particle site
// distributions over 1..m: entry (l1-1, l2-1) with l1 <= l2 holds the
// unordered-pair probability (diagonal entries are the same-site terms).
MatrixXd time_label_two_particle(const std::vector<double>& dist_a,
                                 const std::vector<double>& dist_b);

}  // namespace bosonstat::stats
