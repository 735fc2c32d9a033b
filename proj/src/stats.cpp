#include "bosonstat/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bosonstat::stats {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double normal_quantile(double p) {
  require(p >= 0.0 && p <= 1.0, "normal_quantile: p must lie in [0,1]");
  if (p == 0.0) return -std::numeric_limits<double>::infinity();
  if (p == 1.0) return std::numeric_limits<double>::infinity();
  // Acklam's rational approximation, then one Halley step against erfc.
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425, phigh = 1.0 - plow;
  double x;
  if (p < plow) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= phigh) {
    const double q = p - 0.5, r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double e = normal_cdf(x) - p;
  const double u = e * std::sqrt(2.0 * M_PI) * std::exp(x * x / 2.0);
  return x - u / (1.0 + x * u / 2.0);
}

double delta_correct(double f_value, const MatrixXd& hessian, const MatrixXd& sample_cov,
                     long long n_samples) {
  require(hessian.rows() == hessian.cols() && sample_cov.rows() == sample_cov.cols() &&
              hessian.rows() == sample_cov.rows(),
          "delta_correct: Hessian and covariance must be square with matching dimension");
  require(n_samples >= 1, "delta_correct: need at least one sample");
  return f_value -
         0.5 / static_cast<double>(n_samples) * (sample_cov * hessian).trace();
}

double delta_correct_meancov(double f_value, const MatrixXd& hessian,
                             const MatrixXd& mean_cov) {
  require(hessian.rows() == hessian.cols() && mean_cov.rows() == mean_cov.cols() &&
              hessian.rows() == mean_cov.rows(),
          "delta_correct_meancov: dimension mismatch");
  return f_value - 0.5 * (mean_cov * hessian).trace();
}

namespace {
// Empirical percentile: the ceil(beta*B)-th order statistic of the sorted
// replicates (beta = 0 maps to the minimum).
double percentile(const std::vector<double>& sorted, double beta) {
  const long long b = static_cast<long long>(sorted.size());
  long long idx = static_cast<long long>(std::ceil(beta * static_cast<double>(b)));
  idx = std::clamp<long long>(idx, 1, b);
  return sorted[static_cast<std::size_t>(idx - 1)];
}
}  // namespace

BootstrapInterval bootstrap_bc_interval(const std::vector<double>& replicates, double point,
                                        double alpha, std::optional<double> clip_hi) {
  require(replicates.size() >= 2, "bootstrap_bc_interval: need at least two replicates");
  require(alpha > 0.0 && alpha < 0.5, "bootstrap_bc_interval: need 0 < alpha < 0.5");
  std::vector<double> sorted = replicates;
  std::sort(sorted.begin(), sorted.end());
  BootstrapInterval out;
  if (sorted.front() == sorted.back() && sorted.front() == point) {
    out.lo = out.hi = point;
    out.degenerate = true;
    return out;
  }
  long long below = 0;
  for (double r : sorted)
    if (r <= point) ++below;
  const double z0 =
      normal_quantile(static_cast<double>(below) / static_cast<double>(sorted.size()));
  const double a1 = normal_cdf(2.0 * z0 + normal_quantile(alpha));
  const double a2 = normal_cdf(2.0 * z0 + normal_quantile(1.0 - alpha));
  out.lo = percentile(sorted, a1);
  out.hi = percentile(sorted, a2);
  if (clip_hi) out.hi = std::min(out.hi, *clip_hi);
  out.lo = std::min(out.lo, out.hi);
  return out;
}

namespace {
// P(X <= k) for X ~ Binomial(n, p), summed in log space.
double binomial_cdf(long long k, long long n, double p) {
  if (k < 0) return 0.0;
  if (k >= n) return 1.0;
  if (p <= 0.0) return 1.0;
  if (p >= 1.0) return 0.0;
  const double logp = std::log(p), logq = std::log1p(-p);
  double acc = 0.0;
  double logc = 0.0;  // log C(n, 0)
  for (long long j = 0; j <= k; ++j) {
    if (j > 0)
      logc += std::log(static_cast<double>(n - j + 1)) - std::log(static_cast<double>(j));
    acc += std::exp(logc + static_cast<double>(j) * logp + static_cast<double>(n - j) * logq);
  }
  return std::min(acc, 1.0);
}
}  // namespace

double clopper_pearson(long long k, long long n, double alpha, Side side) {
  require(n >= 1 && k >= 0 && k <= n, "clopper_pearson: need 0 <= k <= n");
  require(alpha > 0.0 && alpha < 1.0, "clopper_pearson: need 0 < alpha < 1");
  if (side == Side::lower) {
    if (k == 0) return 0.0;
    // solve P(X >= k | p) = alpha; increasing in p
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (1.0 - binomial_cdf(k - 1, n, mid) < alpha)
        lo = mid;
      else
        hi = mid;
    }
    return 0.5 * (lo + hi);
  }
  if (k == n) return 1.0;
  // solve P(X <= k | p) = alpha; decreasing in p
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (binomial_cdf(k, n, mid) > alpha)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

RatioInterval union_ratio_interval(std::pair<long long, long long> num,
                                   std::pair<long long, long long> den, double alpha,
                                   double beta_u, double beta_l) {
  require(beta_u > 0.0 && beta_u < alpha, "union_ratio_interval: need 0 < beta_u < alpha");
  require(beta_l > 0.0 && beta_l < alpha, "union_ratio_interval: need 0 < beta_l < alpha");
  RatioInterval out;
  const double num_hi = clopper_pearson(num.first, num.second, alpha - beta_u, Side::upper);
  const double den_lo = clopper_pearson(den.first, den.second, beta_u, Side::lower);
  if (den_lo <= 0.0) {
    out.hi = std::numeric_limits<double>::infinity();
    out.unbounded_hi = true;
  } else {
    out.hi = num_hi / den_lo;
  }
  const double num_lo = clopper_pearson(num.first, num.second, alpha - beta_l, Side::lower);
  const double den_hi = clopper_pearson(den.first, den.second, beta_l, Side::upper);
  out.lo = num_lo / den_hi;
  return out;
}

long long chernoff_samples(double p_ref, double epsilon, double delta, long long cap) {
  require(p_ref > 0.0 && p_ref < 1.0, "chernoff_samples: need 0 < p < 1");
  require(delta > 0.0 && delta < 1.0, "chernoff_samples: need 0 < delta < 1");
  require(epsilon > 0.0, "chernoff_samples: epsilon must be positive (zero divergence)");
  const double a = p_ref * (1.0 + epsilon);
  require(a < 1.0, "chernoff_samples: p(1+eps) must stay below 1");
  const double kl = a * std::log(a / p_ref) + (1.0 - a) * std::log((1.0 - a) / (1.0 - p_ref));
  const double raw = 2.0 * std::log(1.0 / delta) / kl;
  long long n = static_cast<long long>(std::ceil(raw));
  if (cap > 0) n = std::min(n, cap);
  return n;
}

long long hoeffding_samples(double p_ref, double epsilon, double delta, long long cap) {
  require(p_ref * epsilon > 0.0, "hoeffding_samples: p*eps must be positive");
  require(delta > 0.0, "hoeffding_samples: delta must be positive");
  const double logterm = std::log(2.0 / delta);
  if (logterm <= 0.0) return 0;
  const double raw = logterm / (2.0 * p_ref * epsilon * p_ref * epsilon);
  long long n = static_cast<long long>(std::ceil(raw));
  if (cap > 0) n = std::min(n, cap);
  return n;
}

double loss_from_single_survival(double p_beta) {
  require(p_beta >= 0.0, "loss_from_single_survival: probability must be nonnegative");
  if (p_beta > 0.5)
    throw numerical_error(
        "loss_from_single_survival: p_beta > 1/2 is infeasible for 2p(1-p) (model violation)");
  return (1.0 - std::sqrt(1.0 - 2.0 * p_beta)) / 2.0;
}

MatrixXd time_label_two_particle(const std::vector<double>& dist_a,
                                 const std::vector<double>& dist_b) {
  require(dist_a.size() == dist_b.size(),
          "time_label_two_particle: distributions must share the site set");
  const int m = static_cast<int>(dist_a.size());
  MatrixXd p = MatrixXd::Zero(m, m);
  for (int l1 = 0; l1 < m; ++l1) {
    p(l1, l1) = dist_a[l1] * dist_b[l1];
    for (int l2 = l1 + 1; l2 < m; ++l2)
      p(l1, l2) = dist_a[l1] * dist_b[l2] + dist_a[l2] * dist_b[l1];
  }
  return p;
}

}  // namespace bosonstat::stats
