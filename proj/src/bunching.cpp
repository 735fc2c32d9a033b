#include "bosonstat/bunching.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace bosonstat::bunching {

using symrep::Permutation;

double coincidence_probability(const MatrixXcd& u, int i1, int i2, int l1, int l2,
                               double indistinguishability) {
  require(i1 != i2 && l1 != l2, "coincidence_probability: inputs and outputs must be distinct");
  require(indistinguishability >= 0.0 && indistinguishability <= 1.0,
          "coincidence_probability: indistinguishability must lie in [0,1]");
  const complexd a = u(l1 - 1, i1 - 1), b = u(l2 - 1, i2 - 1);
  const complexd c = u(l1 - 1, i2 - 1), d = u(l2 - 1, i1 - 1);
  return std::norm(a) * std::norm(b) + std::norm(c) * std::norm(d) +
         2.0 * indistinguishability * (std::conj(a) * std::conj(b) * c * d).real();
}

double tau(const MatrixXcd& u, const SiteList& s1, const SiteList& s2, int i1, int i2) {
  require(i1 != i2, "tau: input sites must be distinct");
  for (int a : s1)
    for (int b : s2) require(a != b, "tau: output subsets must be disjoint");
  double num = 0.0, den = 0.0;
  for (int l1 : s1) {
    for (int l2 : s2) {
      const complexd a = u(l1 - 1, i1 - 1), b = u(l2 - 1, i2 - 1);
      const complexd c = u(l1 - 1, i2 - 1), d = u(l2 - 1, i1 - 1);
      num += 2.0 * (std::conj(a) * std::conj(b) * c * d).real();
      den += std::norm(a) * std::norm(b) + std::norm(c) * std::norm(d);
    }
  }
  if (den <= 0.0)
    throw numerical_error("tau: degenerate setting (distinguishable coincidence probability 0)");
  return -num / den;
}

double estimate_indistinguishability(double q_hat, double tau_value) {
  require(tau_value > 0.0, "estimate_indistinguishability: tau must be positive");
  return std::min(1.0, (1.0 - q_hat) / tau_value);
}

double indistinguishability_lower_bound(double q_hat) { return 1.0 - q_hat; }

double indistinguishability_from_vacuum(double p2_empty, double p1_empty_a, double p1_empty_b,
                                        double same_site_dist) {
  require(same_site_dist > 0.0,
          "indistinguishability_from_vacuum: distinguishable same-site probability must be "
          "positive");
  return (p2_empty - p1_empty_a * p1_empty_b - same_site_dist) / same_site_dist;
}

complexd normalized_immanant(const MatrixXcd& m, const Partition& lambda) {
  require(m.rows() == m.cols(), "normalized_immanant: matrix must be square");
  const int n = static_cast<int>(m.rows());
  require(lambda.n() == n, "normalized_immanant: partition size must match the matrix side");
  if (n > symrep::kMaxCharacterN)
    throw size_limit_error("normalized_immanant: side exceeds the character cap");
  // character values by cycle type, computed once
  std::map<Partition, double> chi;
  for (const auto& mu : symrep::partitions_of(n))
    chi[mu] = static_cast<double>(symrep::character(lambda, mu));
  complexd acc(0.0, 0.0);
  symrep::for_each_permutation(n, [&](const Permutation& sigma, int) {
    const double c = chi.at(sigma.cycle_type());
    if (c == 0.0) return;
    complexd prod(1.0, 0.0);
    for (int x = 1; x <= n; ++x) prod *= m(x - 1, sigma.image(x) - 1);
    acc += c * prod;
  });
  return acc / static_cast<double>(symrep::hook_dimension(lambda));
}

MatrixXcd gram_matrix(const MatrixXcd& u, const SiteList& subset, const SiteList& i) {
  const MatrixXcd cols = linopt::submatrix(u, subset, i);
  return cols.adjoint() * cols;
}

double generalized_bunching(const MatrixXcd& u, const SiteList& i, const SiteList& subset,
                            const PartitionMixture& mix) {
  require(!subset.empty(), "generalized_bunching: subset must be nonempty");
  require(mix.n == static_cast<int>(i.size()), "generalized_bunching: mixture of wrong n");
  const MatrixXcd g = gram_matrix(u, subset, i);
  double acc = 0.0;
  for (const auto& [lambda, w] : mix.weights) {
    if (w == 0.0) continue;
    const complexd im = normalized_immanant(g, lambda);
    require(std::abs(im.imag()) <= 1e-10 * std::max(1.0, std::abs(im.real())),
            "generalized_bunching: immanant of a Hermitian Gram matrix must be real");
    acc += w * im.real();
  }
  return acc;
}

int optimal_k(int m, int n) {
  require(n >= 1 && m >= n, "optimal_k: need 1 <= n <= m");
  return static_cast<int>(std::lround(static_cast<double>(m) -
                                      static_cast<double>(m) / static_cast<double>(n)));
}

double bunching_ratio(int m, int k, int occupied) {
  require(occupied >= 0 && k <= m, "bunching_ratio: bad arguments");
  if (occupied > k) return 0.0;
  // C(m - occupied, k - occupied) / C(m, k) with exact integer binomials
  auto binom = [](int a, int b) -> double {
    if (b < 0 || b > a) return 0.0;
    long double r = 1.0L;
    for (int j = 1; j <= b; ++j) r = r * (a - b + j) / j;
    return static_cast<double>(r);
  };
  return binom(m - occupied, k - occupied) / binom(m, k);
}

AveragedBunching average_generalized_bunching(const MatrixXcd& u, const SiteList& i, int k,
                                              const PartitionMixture& mix) {
  const int n = static_cast<int>(i.size());
  const int m = static_cast<int>(u.rows());
  require(k >= 1 && k <= m, "average_generalized_bunching: need 1 <= k <= m");
  AveragedBunching out;
  if (k < n) out.k_below_n = true;
  const Partition fermionic = Partition::single_column(n);
  double acc = 0.0;
  PartitionMixture rest;
  rest.n = n;
  double rest_mass = 0.0;
  for (const auto& [lambda, w] : mix.weights) {
    if (lambda == fermionic) {
      // the fermionic component is the constant C(m-n, k-n)/C(m, k)
      acc += w * bunching_ratio(m, k, n);
    } else if (w != 0.0) {
      rest.weights[lambda] = w;
      rest_mass += w;
    }
  }
  if (rest_mass > 0.0) {
    for (auto& [lambda, w] : rest.weights) w /= rest_mass;
    double expectation = 0.0;
    for (const auto& g : linopt::enumerate_occupations(n, m)) {
      const double p = hidden_dof::mixture_probability(rest, u, i, g);
      if (p <= 0.0) continue;
      expectation += p * bunching_ratio(m, k, linopt::occupied_count(g));
    }
    acc += rest_mass * expectation;
  }
  out.value = acc;
  return out;
}

double modified_bunching_mc(const std::vector<SingleParticleCounts>& per_input_data, int m,
                            int k, long long n_mc, std::uint64_t seed, long long chunk_size,
                            int n_threads) {
  require(!per_input_data.empty(), "modified_bunching_mc: need at least one input dataset");
  require(n_mc > 0 && chunk_size > 0, "modified_bunching_mc: need positive sample counts");
  require(k >= 1 && k <= m, "modified_bunching_mc: need 1 <= k <= m");
  require(n_threads >= 1, "modified_bunching_mc: need at least one thread");
  std::vector<std::vector<double>> weights;
  std::vector<std::vector<int>> sites;
  for (const auto& d : per_input_data) {
    require(!d.sites.empty() && d.sites.size() == d.counts.size(),
            "modified_bunching_mc: empty dataset");
    std::vector<double> w;
    for (long long c : d.counts) {
      require(c >= 0, "modified_bunching_mc: negative count");
      w.push_back(static_cast<double>(c));
    }
    for (int s : d.sites) require(s >= 0 && s <= m, "modified_bunching_mc: site out of range");
    weights.push_back(std::move(w));
    sites.push_back(d.sites);
  }
  const Rng parent(seed);
  const long long n_chunks = (n_mc + chunk_size - 1) / chunk_size;
  std::vector<double> chunk_sums(static_cast<std::size_t>(n_chunks), 0.0);
  auto run_chunk = [&](long long chunk) {
    Rng rng = parent.child(static_cast<std::uint64_t>(chunk));
    const long long in_chunk = std::min(chunk_size, n_mc - chunk * chunk_size);
    std::vector<int> occ(m, 0);
    double acc = 0.0;
    for (long long t = 0; t < in_chunk; ++t) {
      std::fill(occ.begin(), occ.end(), 0);
      for (std::size_t input = 0; input < weights.size(); ++input) {
        const int site = sites[input][rng.discrete(weights[input])];
        if (site > 0) ++occ[site - 1];
      }
      int occupied = 0;
      for (int v : occ)
        if (v % 2 == 1) ++occupied;  // parity projection
      acc += bunching_ratio(m, k, occupied);
    }
    chunk_sums[static_cast<std::size_t>(chunk)] = acc;
  };
  if (n_threads == 1 || n_chunks == 1) {
    for (long long chunk = 0; chunk < n_chunks; ++chunk) run_chunk(chunk);
  } else {
    std::vector<std::thread> pool;
    std::atomic<long long> next{0};
    const int workers = static_cast<int>(std::min<long long>(n_threads, n_chunks));
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (long long chunk = next.fetch_add(1); chunk < n_chunks; chunk = next.fetch_add(1))
          run_chunk(chunk);
      });
    }
    for (auto& th : pool) th.join();
  }
  // reduce in chunk order so the result is independent of scheduling
  double total = 0.0;
  for (double s : chunk_sums) total += s;
  return total / static_cast<double>(n_mc);
}

}  // namespace bosonstat::bunching
