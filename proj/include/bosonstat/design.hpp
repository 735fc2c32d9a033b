#pragma once

#include <string>
#include <vector>

#include "bosonstat/common.hpp"
#include "bosonstat/linopt.hpp"
#include "bosonstat/rng.hpp"

// Fisher information, inferable-subspace projection, A-optimal experiment
// design (direct convex form and the SOCP reformulation), and
// maximum-likelihood fitting of a unitary submatrix with loss and
// indistinguishability.
namespace bosonstat::design {

// F = J^T diag(1/p) J. Outcomes with zero probability and a nonzero
// Jacobian row are a singular-support error.
MatrixXd fisher_information(const MatrixXd& jacobian, const VectorXd& probs);

struct Projection {
  MatrixXd basis;                   // R' x R, orthonormal columns spanning perp(Ker T~)
  std::vector<MatrixXd> projected;  // per setting: O_s x R
  int inferable_count = 0;
};

// Orthonormal basis of the orthogonal complement of Ker(stacked Jacobian),
// by singular-value thresholding at rtol * sigma_max.
Projection project_inferable(const std::vector<MatrixXd>& jacobians, double rtol = 1e-7);

// Weighted-trace A-optimality cost sum_r Y_r^2 (F(q)^{-1})_{rr} with
// F(q) = sum_s q_s F^(s).
double design_cost(const std::vector<MatrixXd>& fims, const VectorXd& y, const VectorXd& q);

struct DirectDesignResult {
  VectorXd q;
  double cost = 0.0;
  int iterations = 0;
};

// Projected gradient descent on the probability simplex (Euclidean
// projection, Armijo backtracking), deterministic from the uniform start.
// Terminates when the convexity duality gap max_s d_s - cost is below
// rel_tol * cost.
DirectDesignResult a_optimal_direct(const std::vector<MatrixXd>& fims, const VectorXd& y,
                                    double rel_tol = 1e-8, int max_iters = 20000);

// Locally unbiased linear estimator coefficients C^(r)_{o,s}.
struct EstimatorBank {
  std::vector<std::vector<VectorXd>> coefficients;  // [r][s] -> length O_s
};

struct SocpDesignResult {
  VectorXd q;           // q_s = D_s / sum D_s
  VectorXd d;           // per-setting cone bounds D_s at the optimum
  EstimatorBank estimators;
  double cost = 0.0;    // (sum_s D_s)^2
  int iterations = 0;
};

// The SOCP route, solved by the inner q-elimination of the theorem: for
// fixed q the optimal C is the Cramer-Rao equality case
//   C^(r)_{o,s} = q_s [T^(s) F(q)^{-1}]_{o,r} / p(o|s),
// and the weights satisfy the fixed point q_s ∝ v_s with
//   v_s = ||(sqrt Sigma_s)^{+R} (+_r Y_r C_s^(r))||_2.
// Iterated to the same duality-gap tolerance as the direct route.
SocpDesignResult a_optimal_socp(const std::vector<MatrixXd>& projected_jacobians,
                                const std::vector<VectorXd>& probs, const VectorXd& y,
                                double rel_tol = 1e-8, int max_iters = 20000);

// Nearest-integer rounding of q_s * N; residual shots are assigned to the
// settings with the largest fractional parts (ties: lowest index first).
std::vector<long long> shot_allocation(const VectorXd& q, long long n_shots);

// ---------------------------------------------------------------------------
// Restricted two-particle experiment model (inputs I, outputs S, loss,
// indistinguishability), used for maximum-likelihood inference.

struct TwoParticleModel {
  MatrixXcd m;           // |S| x |I| submatrix of the single-particle unitary
  double loss = 0.0;     // p_lambda
  double indist = 1.0;   // two-particle indistinguishability

  int n_outputs() const { return static_cast<int>(m.rows()); }
  int n_inputs() const { return static_cast<int>(m.cols()); }
  void validate(double tol = 1e-8) const;  // I - M^dag M must be PSD
};

// Outcome labels of the restricted experiments, in the fixed enumeration
// order used everywhere (single particle: each output slot, then "other"
// (arrived outside S), then "empty" (lost); two particles: slot pairs in
// lexicographic order, then single slots, then "other").
struct OutcomeLabel {
  enum class Kind { sites, other, empty };
  Kind kind = Kind::other;
  std::vector<int> slots;  // 1-based output slots, ascending

  bool operator==(const OutcomeLabel& o) const { return kind == o.kind && slots == o.slots; }
};

std::vector<OutcomeLabel> outcome_space(int n_outputs, int n_particles);

// Normalized outcome distribution of the model for a one- or two-input
// setting (input slots are 1-based column indices of M).
VectorXd model_distribution(const TwoParticleModel& model, const std::vector<int>& inputs);

struct RestrictedCounts {
  std::vector<int> inputs;        // 1 or 2 input slots
  std::vector<long long> counts;  // aligned with outcome_space(n_outputs, inputs.size())
};

// Multinomial synthesis from the model (for tests and pipelines).
std::vector<RestrictedCounts> sample_restricted_counts(
    const TwoParticleModel& model, const std::vector<std::vector<int>>& settings,
    long long shots_per_setting, std::uint64_t seed);

struct MleOptions {
  int max_iters = 400;
  double grad_tol = 1e-6;
  int lbfgs_memory = 10;
  double prob_floor = 1e-300;
  bool fd_gradient = false;   // finite-difference gradient (h = 1e-6), for testing
  double fd_step = 1e-6;
};

struct MleResult {
  TwoParticleModel model;          // fitted, gauge-fixed (first row/column real-nonnegative)
  linopt::GellMannCoeffs coeffs;   // optimizer's final point
  std::vector<double> loglik_trace;
  bool converged = false;
};

// Two-stage fit: p_lambda is the pooled empty frequency of the
// single-particle settings (closed form); the submatrix is then fit by
// quasi-Newton (L-BFGS with backtracking) ascent of the log-likelihood over
// the (|S|+|I|)^2 Gell-Mann coefficients of a unitary completion, with the
// analytic gradient through the matrix exponential.
MleResult mle_fit(const std::vector<RestrictedCounts>& data, int n_outputs, int n_inputs,
                  const linopt::GellMannCoeffs& init, double indist,
                  const MleOptions& opts = {});

// max over settings of (1/2) sum_o |p_a(o) - p_b(o)|. The value d gives the
// optimal correct-guess probability (1 + d)/2 for distinguishing the models
// from one shot of the best setting.
double max_tvd(const TwoParticleModel& a, const TwoParticleModel& b,
               const std::vector<std::vector<int>>& settings);

// ---------------------------------------------------------------------------
// Design-problem construction for the restricted thermal boson model:
// settings prepare one particle in each site of an input subset, outcomes
// are the patterns on S (with the outside-S remainder aggregated), and the
// Jacobian is taken by central finite differences in the Gell-Mann
// coefficients of the unitary completion of the reference submatrix.

struct BosonDesignSpec {
  MatrixXcd reference_submatrix;           // |S| x |I| calibration reference
  double thermal_x = 0.0;                  // hidden-DOF thermal parameter
  std::vector<std::vector<int>> settings;  // input-slot subsets (1-based)
};

// All occupation patterns h on the outputs with |h| <= n_particles, in the
// order produced by enumerate_occupations per total, ascending total.
std::vector<linopt::OccupationList> restricted_outcomes(int n_outputs, int n_particles);

struct BosonDesignJacobians {
  std::vector<MatrixXd> jacobians;  // per setting: O_s x d^2 (raw parameters)
  std::vector<VectorXd> probs;      // per setting outcome probabilities
};

BosonDesignJacobians build_restricted_thermal_jacobians(const BosonDesignSpec& spec,
                                                        double fd_step = 1e-6);

}  // namespace bosonstat::design
