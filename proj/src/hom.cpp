#include "bosonstat/hom.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace bosonstat::hom {

SinglesSummary summarize_singles(const io::CountsDataset& ds) {
  require(ds.settings.size() == 1, "singles dataset must contain exactly one setting");
  const auto& s = ds.settings[0];
  require(s.prepared_sites.size() == 1, "singles dataset must prepare one site");
  SinglesSummary out;
  std::vector<long long> raw(ds.modes, 0);
  for (const auto& o : s.outcomes) {
    if (o.kind == io::OutcomeCount::Kind::sites) {
      require(o.sites.size() == 1, "singles dataset has a multi-site outcome");
      raw[o.sites[0] - 1] += o.count;
      out.survived += o.count;
    } else if (o.kind == io::OutcomeCount::Kind::empty) {
      out.empty_count += o.count;
    } else {
      require(o.count == 0,
              "singles dataset has 'other' outcomes; sites must be fully resolved");
    }
    out.total += o.count;
  }
  require(out.total > 0 && out.survived > 0, "singles dataset has no usable counts");
  out.site_probs.assign(ds.modes, 0.0);
  for (int l = 0; l < ds.modes; ++l)
    out.site_probs[l] = static_cast<double>(raw[l]) / static_cast<double>(out.survived);
  return out;
}

namespace {

bool in_set(const std::vector<int>& set, int site) {
  return std::find(set.begin(), set.end(), site) != set.end();
}

}  // namespace

PairSummary summarize_pairs(const io::CountsDataset& ds, const std::vector<int>& s1,
                            const std::vector<int>& s2) {
  for (int a : s1)
    for (int b : s2)
      require(a != b, "pairs summary: coincidence subsets must be disjoint");
  require(ds.settings.size() == 1, "pairs dataset must contain exactly one setting");
  const auto& s = ds.settings[0];
  require(s.prepared_sites.size() == 2, "pairs dataset must prepare two sites");
  PairSummary out;
  for (const auto& o : s.outcomes) {
    out.total += o.count;
    if (o.kind != io::OutcomeCount::Kind::sites) continue;
    if (o.sites.size() == 1) {
      out.one_survivor += o.count;
    } else if (o.sites.size() == 2 && o.sites[0] != o.sites[1]) {
      if (s1.empty() || (in_set(s1, o.sites[0]) && in_set(s2, o.sites[1])) ||
          (in_set(s1, o.sites[1]) && in_set(s2, o.sites[0])))
        out.coincidences += o.count;
    }
  }
  require(out.total > 0, "pairs dataset has no counts");
  return out;
}

namespace {

struct DenEstimate {
  double value = 0.0;
  double variance = 0.0;
};

// Time-labeled distinguishable coincidence probability over the subsets (all
// distinct pairs when the subsets are empty) with the multinomial delta
// variance of the two independent single-particle datasets.
DenEstimate time_labeled_coincidence(const SinglesSummary& a, const SinglesSummary& b,
                                     const std::vector<int>& s1, const std::vector<int>& s2) {
  const int m = static_cast<int>(a.site_probs.size());
  auto crossing = [&](int l1, int l2) {
    if (l1 == l2) return false;
    if (s1.empty()) return true;
    return (in_set(s1, l1) && in_set(s2, l2)) || (in_set(s1, l2) && in_set(s2, l1));
  };
  DenEstimate out;
  std::vector<double> grad_a(m, 0.0), grad_b(m, 0.0);
  for (int l1 = 1; l1 <= m; ++l1) {
    for (int l2 = 1; l2 <= m; ++l2) {
      if (!crossing(l1, l2)) continue;
      // the ordered sum over (l1, l2) realizes sum over unordered pairs of
      // the symmetrized product pa(l1) pb(l2) + pa(l2) pb(l1)
      out.value += a.site_probs[l1 - 1] * b.site_probs[l2 - 1];
      grad_a[l1 - 1] += b.site_probs[l2 - 1];
      grad_b[l2 - 1] += a.site_probs[l1 - 1];
    }
  }
  auto quad = [](const std::vector<double>& grad, const SinglesSummary& s) {
    double lin = 0.0, mean = 0.0;
    for (std::size_t l = 0; l < grad.size(); ++l) {
      lin += grad[l] * grad[l] * s.site_probs[l];
      mean += grad[l] * s.site_probs[l];
    }
    return (lin - mean * mean) / static_cast<double>(s.survived);
  };
  out.variance = quad(grad_a, a) + quad(grad_b, b);
  return out;
}

}  // namespace

PointEstimate point_estimate(const SinglesSummary& a, const SinglesSummary& b,
                             const PairSummary& pairs, const std::vector<int>& s1,
                             const std::vector<int>& s2) {
  PointEstimate out;
  const double p_beta =
      static_cast<double>(pairs.one_survivor) / static_cast<double>(pairs.total);
  out.p_loss = stats::loss_from_single_survival(std::min(p_beta, 0.5));
  const double survival = (1.0 - out.p_loss) * (1.0 - out.p_loss);
  const double p2c =
      static_cast<double>(pairs.coincidences) / static_cast<double>(pairs.total);
  const double num = p2c / survival;
  const DenEstimate den = time_labeled_coincidence(a, b, s1, s2);
  require(den.value > 0.0, "time-labeled coincidence probability is zero");
  // first-order correction of the independent-numerator ratio:
  // E[n/d] ~ n/d + n Var(d)/d^3
  out.q = num / den.value - num * den.variance / std::pow(den.value, 3);
  return out;
}

io::CountsDataset resample_dataset(const io::CountsDataset& ds, Rng& rng) {
  io::CountsDataset out = ds;
  for (auto& setting : out.settings) {
    std::vector<double> weights;
    long long total = 0;
    for (const auto& o : setting.outcomes) {
      weights.push_back(static_cast<double>(o.count));
      total += o.count;
    }
    const auto counts = multinomial_draw(rng, weights, total);
    for (std::size_t o = 0; o < setting.outcomes.size(); ++o)
      setting.outcomes[o].count = counts[o];
  }
  return out;
}

HomResult estimate(const io::CountsDataset& singles_a, const io::CountsDataset& singles_b,
                   const io::CountsDataset& pairs, std::optional<double> tau,
                   const std::vector<int>& s1, const std::vector<int>& s2, int bootstrap,
                   std::uint64_t seed, double alpha, int n_threads) {
  require(singles_a.modes == singles_b.modes && singles_a.modes == pairs.modes,
          "hom: datasets must share the mode space");
  if (tau) {
    require(*tau > 0.0 && *tau <= 1.0 + 1e-9, "hom: tau must lie in (0, 1]");
    tau = std::min(*tau, 1.0);  // the bound tau <= 1 holds exactly; absorb rounding
  }
  const SinglesSummary a = summarize_singles(singles_a);
  const SinglesSummary b = summarize_singles(singles_b);
  const PairSummary pair_summary = summarize_pairs(pairs, s1, s2);
  const PointEstimate point = point_estimate(a, b, pair_summary, s1, s2);

  HomResult out;
  out.q = point.q;
  out.p_loss = point.p_loss;
  out.lower_bound = std::clamp(1.0 - point.q, 0.0, 1.0);
  if (tau) out.indistinguishability = std::min(1.0, (1.0 - point.q) / *tau);

  if (bootstrap > 0) {
    std::vector<double> lower_reps(bootstrap, 0.0), i_reps(bootstrap, 0.0);
    const Rng parent(seed);
    std::atomic<int> next{0};
    auto worker = [&] {
      for (int r = next.fetch_add(1); r < bootstrap; r = next.fetch_add(1)) {
        Rng rng = parent.child(static_cast<std::uint64_t>(r));
        try {
          const auto ra = summarize_singles(resample_dataset(singles_a, rng));
          const auto rb = summarize_singles(resample_dataset(singles_b, rng));
          const auto rp = summarize_pairs(resample_dataset(pairs, rng), s1, s2);
          const auto est = point_estimate(ra, rb, rp, s1, s2);
          lower_reps[r] = 1.0 - est.q;
          i_reps[r] = tau ? (1.0 - est.q) / *tau : 0.0;
        } catch (const std::exception&) {
          lower_reps[r] = 0.0;
          i_reps[r] = 0.0;
        }
      }
    };
    std::vector<std::thread> pool;
    const int workers = std::max(1, std::min(n_threads, bootstrap));
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    out.lower_bound_interval =
        stats::bootstrap_bc_interval(lower_reps, 1.0 - point.q, alpha, 1.0);
    if (tau)
      out.interval =
          stats::bootstrap_bc_interval(i_reps, (1.0 - point.q) / *tau, alpha, 1.0);
  }
  return out;
}

}  // namespace bosonstat::hom
