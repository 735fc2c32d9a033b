#include "bosonstat/hidden_dof.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace bosonstat::hidden_dof {

using symrep::Permutation;

namespace {

void check_distinct(const SiteList& i, const char* who) {
  SiteList s = i;
  std::sort(s.begin(), s.end());
  require(std::adjacent_find(s.begin(), s.end()) == s.end(),
          std::string(who) + ": input sites must be distinct");
}

void check_direct_cap(int n, int max_n, const char* who) {
  if (n > max_n)
    throw size_limit_error(std::string(who) + ": n = " + std::to_string(n) +
                           " exceeds cap " + std::to_string(max_n) +
                           " (raise max_n to override)");
}

// Delta(U(zeta(g)|sigma.i)) for all sigma, indexed in SJT enumeration order.
// (sigma.i)_x = i_{sigma^{-1}(x)}.
std::vector<complexd> diagonal_products(const MatrixXcd& u, const SiteList& i,
                                        const OccupationList& g,
                                        std::vector<Permutation>* perms) {
  const SiteList rows = linopt::zeta(g);
  const int n = static_cast<int>(i.size());
  std::vector<complexd> a;
  a.reserve(symrep::factorial(n));
  symrep::for_each_permutation(n, [&](const Permutation& sigma, int) {
    const Permutation inv = sigma.inverse();
    complexd prod(1.0, 0.0);
    for (int x = 1; x <= n; ++x) prod *= u(rows[x - 1] - 1, i[inv.image(x) - 1] - 1);
    a.push_back(prod);
    if (perms) perms->push_back(sigma);
  });
  return a;
}

// p = (1/(xi(i)! g!)) sum_pi t(pi) D(pi), D(pi) = sum_sigma conj(A(sigma)) A(sigma pi),
// with t(pi) = Tr(P_pi h). For class functions t(pi) = k(cycle type of pi).
double double_sum_model(const MatrixXcd& u, const SiteList& i, const OccupationList& g,
                        const std::function<complexd(const Permutation&)>& trace_with) {
  const int n = static_cast<int>(i.size());
  require(linopt::total(g) == n, "direct_model_probability: |g| must equal n");
  require(static_cast<Eigen::Index>(g.size()) == u.rows(),
          "direct_model_probability: g has wrong length");
  std::vector<Permutation> perms;
  const std::vector<complexd> a = diagonal_products(u, i, g, &perms);
  std::map<Permutation, std::size_t> index;
  for (std::size_t t = 0; t < perms.size(); ++t) index[perms[t]] = t;
  complexd acc(0.0, 0.0);
  for (const Permutation& pi : perms) {
    const complexd tv = trace_with(pi);
    if (tv == complexd(0.0, 0.0)) continue;
    complexd d(0.0, 0.0);
    for (std::size_t s = 0; s < perms.size(); ++s)
      d += std::conj(a[s]) * a[index.at(perms[s].compose(pi))];
    acc += tv * d;
  }
  const OccupationList in_occ = linopt::xi(i, static_cast<int>(u.cols()));
  const double p = acc.real() / (linopt::occupation_factorial(in_occ) *
                                 linopt::occupation_factorial(g));
  require(std::abs(acc.imag()) <= 1e-9 * std::max(1.0, std::abs(acc.real())),
          "direct_model_probability: non-real probability (invalid auxiliary state?)");
  return p;
}

}  // namespace

AuxiliaryClassFunction::AuxiliaryClassFunction(int n, std::map<Partition, complexd> values)
    : n_(n), values_(std::move(values)) {
  require(n_ >= 1, "AuxiliaryClassFunction: n must be positive");
  for (const auto& [cls, v] : values_)
    require(cls.n() == n_, "AuxiliaryClassFunction: cycle type of wrong n");
  const complexd at_e = value(Partition::single_column(n_));
  require(std::abs(at_e - complexd(1.0, 0.0)) <= 1e-8,
          "AuxiliaryClassFunction: k(identity) must be 1 (unit trace)");
}

AuxiliaryClassFunction AuxiliaryClassFunction::thermal(double x, int n) {
  require(x >= 0.0, "thermal: x must be nonnegative");
  if (x >= 1.0)
    throw invalid_input("thermal: x must be < 1 (use the Plancherel weights for x -> 1)");
  std::map<Partition, complexd> values;
  for (const Partition& mu : symrep::partitions_of(n, std::max(n, symrep::kMaxFullGroupN))) {
    double v = std::pow(1.0 - x, n);
    for (int len : mu.parts()) v /= 1.0 - std::pow(x, len);
    values[mu] = v;
  }
  return AuxiliaryClassFunction(n, std::move(values));
}

AuxiliaryClassFunction AuxiliaryClassFunction::constant_one(int n) {
  std::map<Partition, complexd> values;
  for (const Partition& mu : symrep::partitions_of(n, std::max(n, symrep::kMaxFullGroupN)))
    values[mu] = 1.0;
  return AuxiliaryClassFunction(n, std::move(values));
}

AuxiliaryClassFunction AuxiliaryClassFunction::delta_identity(int n) {
  std::map<Partition, complexd> values;
  values[Partition::single_column(n)] = 1.0;
  return AuxiliaryClassFunction(n, std::move(values));
}

complexd AuxiliaryClassFunction::value(const Partition& cycle_type) const {
  require(cycle_type.n() == n_, "AuxiliaryClassFunction::value: wrong n");
  const auto it = values_.find(cycle_type);
  return it == values_.end() ? complexd(0.0, 0.0) : it->second;
}

ExplicitAuxiliaryState::ExplicitAuxiliaryState(int n, int labels, MatrixXcd matrix, double tol)
    : n_(n), labels_(labels), matrix_(std::move(matrix)) {
  require(n_ >= 1 && labels_ >= 1, "ExplicitAuxiliaryState: bad sizes");
  require(labels_ >= n_, "ExplicitAuxiliaryState: need at least n labels");
  Eigen::Index side = 1;
  for (int k = 0; k < n_; ++k) side *= labels_;
  require(matrix_.rows() == side && matrix_.cols() == side,
          "ExplicitAuxiliaryState: matrix side must be labels^n");
  require((matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff() <= tol,
          "ExplicitAuxiliaryState: matrix must be Hermitian");
  require(std::abs(matrix_.trace() - complexd(1.0, 0.0)) <= 1e-8,
          "ExplicitAuxiliaryState: matrix must have unit trace");
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(matrix_);
  require(es.eigenvalues().minCoeff() >= -tol, "ExplicitAuxiliaryState: matrix must be PSD");
}

ExplicitAuxiliaryState ExplicitAuxiliaryState::from_pure(const SiteList& input_sites, int labels,
                                                         const VectorXcd& psi) {
  const int n = static_cast<int>(input_sites.size());
  Eigen::Index side = 1;
  for (int k = 0; k < n; ++k) side *= labels;
  require(psi.size() == side, "from_pure: psi must have length labels^n");
  // Average over the stabilizer of the input sites (proper symmetrization),
  // then normalize.
  std::vector<Permutation> stabilizer;
  symrep::for_each_permutation(n, [&](const Permutation& sigma, int) {
    for (int x = 1; x <= n; ++x)
      if (input_sites[sigma.inverse().image(x) - 1] != input_sites[x - 1]) return;
    stabilizer.push_back(sigma);
  });
  VectorXcd sym = VectorXcd::Zero(side);
  std::vector<int> digits(n);
  for (Eigen::Index idx = 0; idx < side; ++idx) {
    Eigen::Index rem = idx;
    for (int x = n - 1; x >= 0; --x) {
      digits[x] = static_cast<int>(rem % labels);
      rem /= labels;
    }
    for (const Permutation& sigma : stabilizer) {
      // component of sigma^-1 . j at position x is j_{sigma(x)}
      Eigen::Index src = 0;
      for (int x = 1; x <= n; ++x) src = src * labels + digits[sigma.image(x) - 1];
      sym(idx) += psi(src);
    }
  }
  sym /= static_cast<double>(stabilizer.size());
  const double nrm = sym.norm();
  require(nrm > 0.0, "from_pure: symmetrized coefficients vanish");
  sym /= nrm;
  return ExplicitAuxiliaryState(n, labels, sym * sym.adjoint());
}

complexd ExplicitAuxiliaryState::trace_with(const Permutation& pi) const {
  require(pi.n() == n_, "trace_with: permutation of wrong n");
  complexd acc(0.0, 0.0);
  std::vector<int> digits(n_);
  const Eigen::Index side = matrix_.rows();
  for (Eigen::Index idx = 0; idx < side; ++idx) {
    Eigen::Index rem = idx;
    for (int x = n_ - 1; x >= 0; --x) {
      digits[x] = static_cast<int>(rem % labels_);
      rem /= labels_;
    }
    // Tr(P_pi h) = sum_j <pi^{-1}.j| h |j>, and (pi^{-1}.j)_x = j_{pi(x)}.
    Eigen::Index row = 0;
    for (int x = 1; x <= n_; ++x) row = row * labels_ + digits[pi.image(x) - 1];
    acc += matrix_(row, idx);
  }
  return acc;
}

AuxiliaryClassFunction ExplicitAuxiliaryState::class_function() const {
  std::map<Partition, complexd> values;
  for (const Partition& mu : symrep::partitions_of(n_))
    values[mu] = trace_with(Permutation::from_cycle_type(mu).inverse());
  return AuxiliaryClassFunction(n_, std::move(values));
}

PartitionMixture PartitionMixture::point_mass(const Partition& lambda) {
  PartitionMixture mix;
  mix.n = lambda.n();
  mix.weights[lambda] = 1.0;
  return mix;
}

PartitionMixture PartitionMixture::plancherel(int n) {
  PartitionMixture mix;
  mix.n = n;
  const double group = static_cast<double>(symrep::factorial(n));
  for (const Partition& lambda : symrep::partitions_of(n)) {
    const double f = static_cast<double>(symrep::hook_dimension(lambda));
    mix.weights[lambda] = f * f / group;
  }
  return mix;
}

double PartitionMixture::weight(const Partition& lambda) const {
  const auto it = weights.find(lambda);
  return it == weights.end() ? 0.0 : it->second;
}

void PartitionMixture::validate(double tol) const {
  double sum = 0.0;
  for (const auto& [lambda, w] : weights) {
    require(lambda.n() == n, "PartitionMixture: partition of wrong n");
    require(w >= -1e-12, "PartitionMixture: negative weight");
    sum += w;
  }
  require(std::abs(sum - 1.0) <= tol, "PartitionMixture: weights must sum to 1");
}

PartitionMixture thermal_partition_weights(double x, int n) {
  require(x >= 0.0, "thermal_partition_weights: x must be nonnegative");
  if (x >= 1.0)
    throw invalid_input("thermal_partition_weights: x must be < 1 (Plancherel is the limit)");
  PartitionMixture mix;
  mix.n = n;
  for (const Partition& lambda : symrep::partitions_of(n)) {
    double p = static_cast<double>(symrep::hook_dimension(lambda)) * std::pow(1.0 - x, n) *
               std::pow(x, static_cast<double>(lambda.b()));
    for (int h : lambda.hook_lengths()) p /= 1.0 - std::pow(x, h);
    mix.weights[lambda] = p;
  }
  return mix;
}

PartitionMixture weights_from_class_function(const AuxiliaryClassFunction& k) {
  const int n = k.n();
  const double group = static_cast<double>(symrep::factorial(n));
  PartitionMixture mix;
  mix.n = n;
  double sum = 0.0;
  for (const Partition& lambda : symrep::partitions_of(n)) {
    complexd acc(0.0, 0.0);
    for (const Partition& mu : symrep::partitions_of(n)) {
      const double cls = static_cast<double>(symrep::conjugacy_class_size(mu));
      acc += cls * static_cast<double>(symrep::character(lambda, mu)) * k.value(mu);
    }
    const double f = static_cast<double>(symrep::hook_dimension(lambda));
    const complexd w = acc * f / group;
    require(std::abs(w.imag()) <= 1e-8, "weights_from_class_function: complex weight");
    double wr = w.real();
    if (wr < -1e-6 || wr > 1.0 + 1e-6)
      throw numerical_error("weights_from_class_function: weight " + std::to_string(wr) +
                            " outside [0,1] for " + lambda.to_string() +
                            " (non-physical class function)");
    wr = std::max(wr, 0.0);
    mix.weights[lambda] = wr;
    sum += wr;
  }
  require(sum > 0.0, "weights_from_class_function: all weights zero");
  for (auto& [lambda, w] : mix.weights) w /= sum;
  return mix;
}

AuxiliaryClassFunction class_function_from_weights(const PartitionMixture& mix) {
  mix.validate();
  std::map<Partition, complexd> values;
  for (const Partition& mu : symrep::partitions_of(mix.n)) {
    double acc = 0.0;
    for (const auto& [lambda, w] : mix.weights) {
      if (w == 0.0) continue;
      acc += w * static_cast<double>(symrep::character(lambda, mu)) /
             static_cast<double>(symrep::hook_dimension(lambda));
    }
    values[mu] = acc;
  }
  return AuxiliaryClassFunction(mix.n, std::move(values));
}

double direct_model_probability(const MatrixXcd& u, const SiteList& i,
                                const AuxiliaryClassFunction& k, const OccupationList& g,
                                int max_n) {
  const int n = static_cast<int>(i.size());
  require(k.n() == n, "direct_model_probability: class function of wrong n");
  check_distinct(i, "direct_model_probability(class function)");
  check_direct_cap(n, max_n, "direct_model_probability");
  return double_sum_model(u, i, g,
                          [&k](const Permutation& pi) { return k.value(pi.cycle_type()); });
}

double direct_model_probability(const MatrixXcd& u, const SiteList& i,
                                const ExplicitAuxiliaryState& h, const OccupationList& g,
                                int max_n) {
  const int n = static_cast<int>(i.size());
  require(h.n() == n, "direct_model_probability: auxiliary state of wrong n");
  check_direct_cap(n, max_n, "direct_model_probability");
  return double_sum_model(u, i, g,
                          [&h](const Permutation& pi) { return h.trace_with(pi); });
}

namespace {

// hat{alpha}_g(lambda) for all lambda in one pass over S_n.
symrep::IrrepBlocks alpha_fourier(const MatrixXcd& u, const SiteList& i,
                                  const OccupationList& g) {
  const int n = static_cast<int>(i.size());
  require(linopt::total(g) == n, "irrep projector: |g| must equal n");
  require(static_cast<Eigen::Index>(g.size()) == u.rows(), "irrep projector: g has wrong length");
  const SiteList rows = linopt::zeta(g);
  const double norm = std::sqrt(linopt::occupation_factorial(g));
  return symrep::fourier_transform(
      [&](const Permutation& sigma) {
        // (sigma^{-1}.i)_x = i_{sigma(x)}
        complexd prod(1.0, 0.0);
        for (int x = 1; x <= n; ++x)
          prod *= std::conj(u(rows[x - 1] - 1, i[sigma.image(x) - 1] - 1));
        return prod / norm;
      },
      n);
}

}  // namespace

MatrixXcd irrep_projector(const Partition& lambda, const MatrixXcd& u, const SiteList& i,
                          const OccupationList& g, int max_n) {
  check_distinct(i, "irrep_projector");
  check_direct_cap(static_cast<int>(i.size()), max_n, "irrep_projector");
  require(lambda.n() == static_cast<int>(i.size()), "irrep_projector: partition of wrong n");
  const symrep::IrrepBlocks f = alpha_fourier(u, i, g);
  const MatrixXcd& block = f.blocks.at(lambda);
  return block * block.adjoint();
}

std::map<Partition, double> irrep_outcome_components(const MatrixXcd& u, const SiteList& i,
                                                     const OccupationList& g, int max_n) {
  check_distinct(i, "irrep_outcome_components");
  check_direct_cap(static_cast<int>(i.size()), max_n, "irrep_outcome_components");
  const symrep::IrrepBlocks f = alpha_fourier(u, i, g);
  std::map<Partition, double> q;
  for (const auto& [lambda, block] : f.blocks)
    q[lambda] = block.squaredNorm() / static_cast<double>(symrep::hook_dimension(lambda));
  return q;
}

double mixture_probability(const PartitionMixture& mix, const MatrixXcd& u, const SiteList& i,
                           const OccupationList& g, int max_n) {
  require(mix.n == static_cast<int>(i.size()), "mixture_probability: mixture of wrong n");
  const auto q = irrep_outcome_components(u, i, g, max_n);
  double p = 0.0;
  for (const auto& [lambda, w] : mix.weights) p += w * q.at(lambda);
  return p;
}

double restricted_probability(const MatrixXcd& u_sub, const AuxiliaryClassFunction& k,
                              const OccupationList& h, double gram_tol, int max_n) {
  const int n = static_cast<int>(u_sub.cols());
  require(k.n() == n, "restricted_probability: class function of wrong n");
  check_direct_cap(n, max_n, "restricted_probability");
  const long long in_s = linopt::total(h);
  require(in_s <= n, "restricted_probability: |h| exceeds the particle number");
  require(static_cast<Eigen::Index>(h.size()) == u_sub.rows(),
          "restricted_probability: h must live on the output subset");
  const MatrixXcd gram = u_sub.adjoint() * u_sub;
  {
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(MatrixXcd::Identity(n, n) - gram);
    if (es.eigenvalues().minCoeff() < -gram_tol)
      throw numerical_error("restricted_probability: not a submatrix of a unitary (I - U^{dag}U "
                            "has negative eigenvalue " +
                            std::to_string(es.eigenvalues().minCoeff()) + ")");
  }
  const SiteList rows = linopt::zeta(h);
  const std::vector<Permutation> perms = symrep::all_permutations(n);
  complexd acc(0.0, 0.0);
  for (const Permutation& sigma : perms) {
    for (const Permutation& tau : perms) {
      const complexd kv = k.value(tau.compose(sigma.inverse()).cycle_type());
      if (kv == complexd(0.0, 0.0)) continue;
      complexd prod(1.0, 0.0);
      for (long long x = 1; x <= in_s; ++x)
        prod *= u_sub(rows[x - 1] - 1, sigma.image(static_cast<int>(x)) - 1) *
                std::conj(u_sub(rows[x - 1] - 1, tau.image(static_cast<int>(x)) - 1));
      for (int x = static_cast<int>(in_s) + 1; x <= n; ++x) {
        const int sx = sigma.image(x), tx = tau.image(x);
        const complexd delta = sx == tx ? complexd(1.0, 0.0) : complexd(0.0, 0.0);
        prod *= delta - gram(tx - 1, sx - 1);
      }
      acc += kv * prod;
    }
  }
  const double denom = linopt::occupation_factorial(h) *
                       static_cast<double>(symrep::factorial(n - static_cast<int>(in_s)));
  require(std::abs(acc.imag()) <= 1e-9 * std::max(1.0, std::abs(acc.real())),
          "restricted_probability: non-real probability");
  return acc.real() / denom;
}

double restricted_probability(const MatrixXcd& u_sub, double x, const OccupationList& h,
                              double gram_tol, int max_n) {
  return restricted_probability(
      u_sub, AuxiliaryClassFunction::thermal(x, static_cast<int>(u_sub.cols())), h, gram_tol,
      max_n);
}

}  // namespace bosonstat::hidden_dof
