#pragma once

#include <map>
#include <vector>

#include "bosonstat/common.hpp"
#include "bosonstat/linopt.hpp"
#include "bosonstat/symrep.hpp"

// Distributions of partially distinguishable bosons: the direct
// first-quantized model, irrep projectors and mixture models for
// permutation-invariant hidden-DOF states, thermal partition weights, and
// the restricted-output model.
namespace bosonstat::hidden_dof {

using linopt::OccupationList;
using linopt::SiteList;
using symrep::Partition;

// Default cap for the O((n!)^2) double permutation sums.
inline constexpr int kMaxDirectN = 6;

// A class function k(sigma) = Tr(P_sigma^dagger h(rho)) on S_n, stored by
// cycle type. Summarizes a permutation-invariant hidden-DOF state.
class AuxiliaryClassFunction {
 public:
  AuxiliaryClassFunction(int n, std::map<Partition, complexd> values);

  // Thermal hidden DOF at x = exp(-beta) in [0, 1):
  //   k_x(pi) = (1-x)^n prod_{cycles c} 1/(1 - x^{len(c)}).
  static AuxiliaryClassFunction thermal(double x, int n);
  // Perfectly indistinguishable particles: k == 1.
  static AuxiliaryClassFunction constant_one(int n);
  // Perfectly distinguishable particles: k = delta_e.
  static AuxiliaryClassFunction delta_identity(int n);

  int n() const { return n_; }
  complexd value(const Partition& cycle_type) const;
  complexd value(const symrep::Permutation& sigma) const { return value(sigma.cycle_type()); }

 private:
  int n_;
  std::map<Partition, complexd> values_;
};

// A finite-label auxiliary state h(rho) on (C^w)^{tensor n}, used as the
// brute-force oracle for the class-function route.
class ExplicitAuxiliaryState {
 public:
  // From a PSD unit-trace matrix on the n-fold label space (side w^n,
  // row-major index over label strings).
  ExplicitAuxiliaryState(int n, int labels, MatrixXcd matrix, double tol = 1e-10);

  // From pure-state coefficients psi over label strings: symmetrizes psi
  // over the stabilizer of the input sites and normalizes, then h = psi psi^dag.
  static ExplicitAuxiliaryState from_pure(const SiteList& input_sites, int labels,
                                          const VectorXcd& psi);

  int n() const { return n_; }
  int labels() const { return labels_; }
  const MatrixXcd& matrix() const { return matrix_; }

  // Tr(P_pi h).
  complexd trace_with(const symrep::Permutation& pi) const;
  // k(pi) = Tr(P_pi^dagger h) evaluated exactly; a class function only when
  // h is permutation invariant.
  AuxiliaryClassFunction class_function() const;

 private:
  int n_, labels_;
  MatrixXcd matrix_;
};

// Probability weights p^lambda over the partitions of n.
struct PartitionMixture {
  int n = 0;
  std::map<Partition, double> weights;

  static PartitionMixture point_mass(const Partition& lambda);
  static PartitionMixture bosonic(int n) { return point_mass(Partition::single_row(n)); }
  static PartitionMixture fermionic(int n) { return point_mass(Partition::single_column(n)); }
  // Plancherel weights (f^lambda)^2 / n!, the perfectly distinguishable
  // state (and the x -> 1 thermal endpoint).
  static PartitionMixture plancherel(int n);

  double weight(const Partition& lambda) const;
  // Clips negative floating noise and checks normalization.
  void validate(double tol = 1e-10) const;
};

// p_x^lambda = f^lambda (1-x)^n x^{b(lambda)} / prod_u (1 - x^{h(u)}).
PartitionMixture thermal_partition_weights(double x, int n);

// Character expansion p^lambda = (f^lambda/n!) sum_sigma chi_lambda(sigma) k(sigma).
// Negative weights above -1e-6 are clipped to zero and the mixture is
// renormalized; anything outside [-1e-6, 1+1e-6] is an invalid-state error.
PartitionMixture weights_from_class_function(const AuxiliaryClassFunction& k);

// k(mu) = sum_lambda (p^lambda / f^lambda) chi_lambda(mu).
AuxiliaryClassFunction class_function_from_weights(const PartitionMixture& mix);

// Literal double permutation sum
//   (1/xi(i)!)(1/g!) sum_{sigma,tau} Tr(P_tau^dag P_sigma h)
//       Delta(U^*(zeta(g)|tau.i)) Delta(U(zeta(g)|sigma.i)).
// The class-function overload requires distinct input sites.
double direct_model_probability(const MatrixXcd& u, const SiteList& i,
                                const AuxiliaryClassFunction& k, const OccupationList& g,
                                int max_n = kMaxDirectN);
double direct_model_probability(const MatrixXcd& u, const SiteList& i,
                                const ExplicitAuxiliaryState& h, const OccupationList& g,
                                int max_n = kMaxDirectN);

// Pi_g^lambda = hat{alpha}_g(lambda) hat{alpha}_g(lambda)^dagger with
// alpha_g(sigma) = Delta(U^*(zeta(g)|sigma^{-1}.i)) / sqrt(g!).
MatrixXcd irrep_projector(const Partition& lambda, const MatrixXcd& u, const SiteList& i,
                          const OccupationList& g, int max_n = kMaxDirectN);

// q_lambda(g|U,i) = Tr(Pi_g^lambda)/f^lambda for every lambda at once.
std::map<Partition, double> irrep_outcome_components(const MatrixXcd& u, const SiteList& i,
                                                     const OccupationList& g,
                                                     int max_n = kMaxDirectN);

// sum_lambda p^lambda q_lambda(g|U,i); requires distinct input sites.
double mixture_probability(const PartitionMixture& mix, const MatrixXcd& u, const SiteList& i,
                           const OccupationList& g, int max_n = kMaxDirectN);

// Restricted-output model: probability that exactly the pattern h lands in
// the output subset S (whose rows form u_sub, one column per distinct
// input) while the remaining n - |h| particles land anywhere outside S, for
// a hidden-DOF class function k:
//   p(h) = (1/(h!(n-|h|)!)) sum_{sigma,tau} k(tau sigma^-1)
//            prod_{x<=|h|} U_{zeta(h)_x, sigma(x)} U^*_{zeta(h)_x, tau(x)}
//            prod_{x>|h|} (delta_{tau(x),sigma(x)} - (U^dag U)_{tau(x),sigma(x)}).
double restricted_probability(const MatrixXcd& u_sub, const AuxiliaryClassFunction& k,
                              const OccupationList& h, double gram_tol = 1e-8,
                              int max_n = kMaxDirectN);
// Thermal special case.
double restricted_probability(const MatrixXcd& u_sub, double x, const OccupationList& h,
                              double gram_tol = 1e-8, int max_n = kMaxDirectN);

}  // namespace bosonstat::hidden_dof
