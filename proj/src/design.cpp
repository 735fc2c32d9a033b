#include "bosonstat/design.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "bosonstat/hidden_dof.hpp"

namespace bosonstat::design {

MatrixXd fisher_information(const MatrixXd& jacobian, const VectorXd& probs) {
  require(jacobian.rows() == probs.size(), "fisher_information: one Jacobian row per outcome");
  const Eigen::Index r = jacobian.cols();
  MatrixXd f = MatrixXd::Zero(r, r);
  for (Eigen::Index o = 0; o < probs.size(); ++o) {
    const double p = probs(o);
    const double rownorm = jacobian.row(o).cwiseAbs().maxCoeff();
    if (p <= 0.0) {
      if (rownorm > 0.0)
        throw numerical_error(
            "fisher_information: outcome with zero probability but nonzero sensitivity");
      continue;
    }
    f += jacobian.row(o).transpose() * jacobian.row(o) / p;
  }
  return f;
}

Projection project_inferable(const std::vector<MatrixXd>& jacobians, double rtol) {
  require(!jacobians.empty(), "project_inferable: need at least one setting");
  const Eigen::Index rp = jacobians[0].cols();
  Eigen::Index rows = 0;
  for (const auto& j : jacobians) {
    require(j.cols() == rp, "project_inferable: inconsistent parameter counts");
    rows += j.rows();
  }
  MatrixXd stacked(rows, rp);
  Eigen::Index at = 0;
  for (const auto& j : jacobians) {
    stacked.middleRows(at, j.rows()) = j;
    at += j.rows();
  }
  require(stacked.cwiseAbs().maxCoeff() > 0.0, "project_inferable: all Jacobians are zero");
  Eigen::JacobiSVD<MatrixXd> svd(stacked, Eigen::ComputeThinV);
  const VectorXd sv = svd.singularValues();
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > rtol * sv(0)) ++rank;
  Projection out;
  out.inferable_count = rank;
  out.basis = svd.matrixV().leftCols(rank);
  for (const auto& j : jacobians) out.projected.push_back(j * out.basis);
  return out;
}

namespace {

// F(q); throws if the aggregate is singular on the projected space.
MatrixXd aggregate_fim(const std::vector<MatrixXd>& fims, const VectorXd& q) {
  MatrixXd f = MatrixXd::Zero(fims[0].rows(), fims[0].cols());
  for (std::size_t s = 0; s < fims.size(); ++s) f += q(static_cast<Eigen::Index>(s)) * fims[s];
  return f;
}

struct CostEval {
  double cost = std::numeric_limits<double>::infinity();
  VectorXd d;  // d_s = Tr(diag(Y^2) F^-1 F^(s) F^-1), the negative gradient
  bool ok = false;
};

CostEval evaluate_design(const std::vector<MatrixXd>& fims, const VectorXd& y,
                         const VectorXd& q, bool want_gradient) {
  CostEval out;
  const MatrixXd f = aggregate_fim(fims, q);
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(f);
  const double lo = es.eigenvalues().minCoeff(), hi = es.eigenvalues().maxCoeff();
  if (!(hi > 0.0) || lo <= hi * 1e-13) return out;  // singular aggregate
  const MatrixXd a = es.operatorInverseSqrt() * es.operatorInverseSqrt();
  double cost = 0.0;
  for (Eigen::Index r = 0; r < y.size(); ++r) cost += y(r) * y(r) * a(r, r);
  out.cost = cost;
  out.ok = true;
  if (want_gradient) {
    out.d.resize(static_cast<Eigen::Index>(fims.size()));
    for (std::size_t s = 0; s < fims.size(); ++s) {
      const MatrixXd g = a * fims[s] * a;
      double ds = 0.0;
      for (Eigen::Index r = 0; r < y.size(); ++r) ds += y(r) * y(r) * g(r, r);
      out.d(static_cast<Eigen::Index>(s)) = ds;
    }
  }
  return out;
}

VectorXd project_to_simplex(const VectorXd& v) {
  const Eigen::Index n = v.size();
  std::vector<double> u(v.data(), v.data() + n);
  std::sort(u.begin(), u.end(), std::greater<double>());
  double acc = 0.0, theta = 0.0;
  int rho = 0;
  for (Eigen::Index j = 0; j < n; ++j) {
    acc += u[j];
    const double candidate = (1.0 - acc) / static_cast<double>(j + 1);
    if (u[j] + candidate > 0.0) {
      rho = static_cast<int>(j + 1);
      theta = candidate;
    }
  }
  (void)rho;
  return (v.array() + theta).cwiseMax(0.0);
}

void check_design_inputs(const std::vector<MatrixXd>& fims, const VectorXd& y) {
  require(!fims.empty(), "a_optimal: need at least one setting");
  for (const auto& f : fims)
    require(f.rows() == y.size() && f.cols() == y.size(),
            "a_optimal: FIM dimensions must match the cost vector");
}

}  // namespace

double design_cost(const std::vector<MatrixXd>& fims, const VectorXd& y, const VectorXd& q) {
  check_design_inputs(fims, y);
  const CostEval e = evaluate_design(fims, y, q, false);
  if (!e.ok) throw numerical_error("design_cost: aggregate Fisher information is singular");
  return e.cost;
}

DirectDesignResult a_optimal_direct(const std::vector<MatrixXd>& fims, const VectorXd& y,
                                    double rel_tol, int max_iters) {
  check_design_inputs(fims, y);
  const int n_settings = static_cast<int>(fims.size());
  VectorXd q = VectorXd::Constant(n_settings, 1.0 / n_settings);
  CostEval cur = evaluate_design(fims, y, q, true);
  if (!cur.ok)
    throw numerical_error("a_optimal_direct: design infeasible (singular aggregate FIM)");
  int it = 0;
  for (; it < max_iters; ++it) {
    const double weighted = q.dot(cur.d);
    if (cur.d.maxCoeff() - weighted <= rel_tol * std::abs(cur.cost)) break;
    // gradient of cost is -d
    double step = 1.0 / std::max(cur.d.maxCoeff(), 1e-30);
    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt) {
      const VectorXd trial = project_to_simplex(q + step * cur.d);
      const CostEval te = evaluate_design(fims, y, trial, true);
      const double predicted = -cur.d.dot(trial - q);  // grad^T (trial - q)
      if (te.ok && te.cost <= cur.cost + 1e-4 * predicted) {
        q = trial;
        cur = te;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;  // no descent direction left at this scale
  }
  DirectDesignResult out;
  out.q = q;
  out.cost = cur.cost;
  out.iterations = it;
  return out;
}

namespace {

std::vector<MatrixXd> fims_from_jacobians(const std::vector<MatrixXd>& jacobians,
                                          const std::vector<VectorXd>& probs) {
  require(jacobians.size() == probs.size(), "a_optimal_socp: one probability vector per setting");
  std::vector<MatrixXd> fims;
  fims.reserve(jacobians.size());
  for (std::size_t s = 0; s < jacobians.size(); ++s)
    fims.push_back(fisher_information(jacobians[s], probs[s]));
  return fims;
}

}  // namespace

SocpDesignResult a_optimal_socp(const std::vector<MatrixXd>& projected_jacobians,
                                const std::vector<VectorXd>& probs, const VectorXd& y,
                                double rel_tol, int max_iters) {
  const std::vector<MatrixXd> fims = fims_from_jacobians(projected_jacobians, probs);
  check_design_inputs(fims, y);
  const int n_settings = static_cast<int>(fims.size());
  const Eigen::Index n_params = y.size();
  VectorXd q = VectorXd::Constant(n_settings, 1.0 / n_settings);
  CostEval cur = evaluate_design(fims, y, q, true);
  if (!cur.ok)
    throw numerical_error("a_optimal_socp: design infeasible (singular aggregate FIM)");
  int it = 0;
  for (; it < max_iters; ++it) {
    const double weighted = q.dot(cur.d);
    if (cur.d.maxCoeff() - weighted <= rel_tol * std::abs(cur.cost)) break;
    // inner q-elimination fixed point: q_s <- v_s / sum v_s, v_s = q_s sqrt(d_s)
    VectorXd v = q.cwiseProduct(cur.d.cwiseSqrt());
    q = v / v.sum();
    const CostEval next = evaluate_design(fims, y, q, true);
    if (!next.ok) throw numerical_error("a_optimal_socp: iteration left the feasible set");
    cur = next;
  }
  // Estimators at the final weights: C^(r)_{o,s} = q_s [T^(s) F^-1]_{o,r} / p(o|s).
  const MatrixXd f = aggregate_fim(fims, q);
  const MatrixXd finv = f.ldlt().solve(MatrixXd::Identity(n_params, n_params));
  SocpDesignResult out;
  out.estimators.coefficients.assign(
      static_cast<std::size_t>(n_params),
      std::vector<VectorXd>(static_cast<std::size_t>(n_settings)));
  out.d = VectorXd::Zero(n_settings);
  for (int s = 0; s < n_settings; ++s) {
    const MatrixXd tfinv = projected_jacobians[s] * finv;  // O_s x R
    double vs2 = 0.0;
    for (Eigen::Index r = 0; r < n_params; ++r) {
      VectorXd c = VectorXd::Zero(probs[s].size());
      if (q(s) > 1e-12) {
        for (Eigen::Index o = 0; o < probs[s].size(); ++o)
          if (probs[s](o) > 0.0) c(o) = q(s) * tfinv(o, r) / probs[s](o);
      }
      // v_s^2 accumulates Y_r^2 C^T Sigma_s C = Y_r^2 sum_o p_o C_o^2 (mean-zero C)
      double quad = 0.0;
      for (Eigen::Index o = 0; o < probs[s].size(); ++o) quad += probs[s](o) * c(o) * c(o);
      const double mean = probs[s].dot(c);
      vs2 += y(r) * y(r) * (quad - mean * mean);
      out.estimators.coefficients[static_cast<std::size_t>(r)][static_cast<std::size_t>(s)] =
          std::move(c);
    }
    out.d(s) = std::sqrt(vs2);
  }
  const double dsum = out.d.sum();
  out.q = q;
  out.cost = dsum * dsum;
  out.iterations = it;
  return out;
}

std::vector<long long> shot_allocation(const VectorXd& q, long long n_shots) {
  require(n_shots >= 0, "shot_allocation: negative shot count");
  const std::size_t s = static_cast<std::size_t>(q.size());
  require(s >= 1, "shot_allocation: empty design");
  // Floor, then hand the residue to the largest fractional parts (ties:
  // lowest setting index); equals nearest-integer rounding whenever that
  // already sums to N.
  std::vector<long long> n(s, 0);
  std::vector<std::pair<double, std::size_t>> frac(s);
  long long assigned = 0;
  for (std::size_t i = 0; i < s; ++i) {
    const double ideal = q(static_cast<Eigen::Index>(i)) * static_cast<double>(n_shots);
    require(ideal >= -1e-9, "shot_allocation: negative weight");
    n[i] = static_cast<long long>(std::floor(std::max(ideal, 0.0)));
    frac[i] = {ideal - static_cast<double>(n[i]), i};
    assigned += n[i];
  }
  std::stable_sort(frac.begin(), frac.end(), [](const auto& a, const auto& b) {
    return a.first > b.first + 1e-15;
  });
  for (std::size_t k = 0; assigned < n_shots; ++assigned, ++k) ++n[frac[k % s].second];
  return n;
}

// ---------------------------------------------------------------------------

void TwoParticleModel::validate(double tol) const {
  require(loss >= 0.0 && loss <= 1.0, "TwoParticleModel: loss must lie in [0,1]");
  require(indist >= 0.0 && indist <= 1.0, "TwoParticleModel: indistinguishability in [0,1]");
  const MatrixXcd gram =
      MatrixXcd::Identity(m.cols(), m.cols()) - m.adjoint() * m;
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(gram);
  require(es.eigenvalues().minCoeff() >= -tol,
          "TwoParticleModel: M is not a submatrix of a unitary (I - M^dag M not PSD)");
}

std::vector<OutcomeLabel> outcome_space(int n_outputs, int n_particles) {
  require(n_particles == 1 || n_particles == 2, "outcome_space: one or two particles");
  std::vector<OutcomeLabel> out;
  if (n_particles == 1) {
    for (int s = 1; s <= n_outputs; ++s)
      out.push_back({OutcomeLabel::Kind::sites, {s}});
    out.push_back({OutcomeLabel::Kind::other, {}});
    out.push_back({OutcomeLabel::Kind::empty, {}});
  } else {
    for (int s = 1; s <= n_outputs; ++s)
      for (int sp = s + 1; sp <= n_outputs; ++sp)
        out.push_back({OutcomeLabel::Kind::sites, {s, sp}});
    for (int s = 1; s <= n_outputs; ++s)
      out.push_back({OutcomeLabel::Kind::sites, {s}});
    out.push_back({OutcomeLabel::Kind::other, {}});
  }
  return out;
}

namespace {

double pair_interference(const MatrixXcd& m, int s, int sp, int i, int j, double indist) {
  const complexd a = m(s, i), b = m(sp, j), c = m(s, j), d = m(sp, i);
  return std::norm(a) * std::norm(b) + std::norm(c) * std::norm(d) +
         2.0 * indist * (a * b * std::conj(c) * std::conj(d)).real();
}

}  // namespace

VectorXd model_distribution(const TwoParticleModel& model, const std::vector<int>& inputs) {
  const int n_out = model.n_outputs();
  for (int i : inputs)
    require(i >= 1 && i <= model.n_inputs(), "model_distribution: input slot out of range");
  const double pl = model.loss;
  VectorXd p;
  if (inputs.size() == 1) {
    const int i = inputs[0] - 1;
    p.resize(n_out + 2);
    double in_s = 0.0;
    for (int s = 0; s < n_out; ++s) {
      p(s) = (1.0 - pl) * std::norm(model.m(s, i));
      in_s += std::norm(model.m(s, i));
    }
    p(n_out) = (1.0 - pl) * (1.0 - in_s);  // arrived outside S
    p(n_out + 1) = pl;                     // lost
  } else if (inputs.size() == 2) {
    require(inputs[0] != inputs[1], "model_distribution: two-particle inputs must be distinct");
    const int i = inputs[0] - 1, j = inputs[1] - 1;
    const int n_pairs = n_out * (n_out - 1) / 2;
    p.resize(n_pairs + n_out + 1);
    Eigen::Index at = 0;
    double used = 0.0;
    for (int s = 0; s < n_out; ++s) {
      for (int sp = s + 1; sp < n_out; ++sp) {
        p(at) = (1.0 - pl) * (1.0 - pl) * pair_interference(model.m, s, sp, i, j, model.indist);
        used += p(at);
        ++at;
      }
    }
    for (int s = 0; s < n_out; ++s) {
      p(at) = pl * (1.0 - pl) * (std::norm(model.m(s, i)) + std::norm(model.m(s, j)));
      used += p(at);
      ++at;
    }
    p(at) = 1.0 - used;  // remainder event
  } else {
    throw invalid_input("model_distribution: settings prepare one or two particles");
  }
  for (Eigen::Index o = 0; o < p.size(); ++o) {
    require(p(o) >= -1e-10 && p(o) <= 1.0 + 1e-10,
            "model_distribution: probability outside [0,1] (invalid model)");
    p(o) = std::clamp(p(o), 0.0, 1.0);
  }
  return p;
}

std::vector<RestrictedCounts> sample_restricted_counts(
    const TwoParticleModel& model, const std::vector<std::vector<int>>& settings,
    long long shots_per_setting, std::uint64_t seed) {
  model.validate();
  const Rng parent(seed);
  std::vector<RestrictedCounts> out;
  for (std::size_t s = 0; s < settings.size(); ++s) {
    Rng rng = parent.child(s);
    const VectorXd p = model_distribution(model, settings[s]);
    RestrictedCounts rc;
    rc.inputs = settings[s];
    rc.counts = multinomial_draw(rng, std::vector<double>(p.data(), p.data() + p.size()),
                                 shots_per_setting);
    out.push_back(std::move(rc));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Maximum-likelihood fit.

namespace {

struct NllContext {
  const std::vector<RestrictedCounts>* data;
  int n_out, n_in;
  double loss, indist, prob_floor;
  double total_counts;
  std::vector<MatrixXcd> basis;  // Gell-Mann basis of side n_out + n_in
};

// NLL per observation and its Wirtinger gradient d(NLL)/dM (so that
// d NLL = 2 Re sum_kl grad_kl dM_kl).
double nll_and_mgrad(const NllContext& ctx, const MatrixXcd& m, MatrixXcd* grad) {
  const double pl = ctx.loss, ind = ctx.indist;
  const int n_out = ctx.n_out;
  double nll = 0.0;
  if (grad) grad->setZero(n_out, ctx.n_in);
  for (const RestrictedCounts& rc : *ctx.data) {
    TwoParticleModel tmp{m, pl, ind};
    const VectorXd p = model_distribution(tmp, rc.inputs);
    require(static_cast<Eigen::Index>(rc.counts.size()) == p.size(),
            "mle_fit: counts misaligned with the outcome space");
    // Wirtinger derivative of each outcome probability wrt M entries.
    // Computed per outcome, accumulated weighted by -n_o / p_o.
    const double surv1 = 1.0 - pl, surv2 = (1.0 - pl) * (1.0 - pl);
    auto weight = [&](Eigen::Index o) {
      const double denom = std::max(p(o), ctx.prob_floor);
      nll += -static_cast<double>(rc.counts[o]) * std::log(denom) / ctx.total_counts;
      return grad ? -static_cast<double>(rc.counts[o]) / denom / ctx.total_counts : 0.0;
    };
    if (rc.inputs.size() == 1) {
      const int i = rc.inputs[0] - 1;
      for (int s = 0; s < n_out; ++s) {
        const double w = weight(s);
        if (grad) (*grad)(s, i) += w * surv1 * std::conj(m(s, i));
      }
      const double w_other = weight(n_out);
      if (grad)
        for (int s = 0; s < n_out; ++s) (*grad)(s, i) -= w_other * surv1 * std::conj(m(s, i));
      weight(n_out + 1);  // empty: no M dependence
    } else {
      const int i = rc.inputs[0] - 1, j = rc.inputs[1] - 1;
      Eigen::Index at = 0;
      MatrixXcd other_grad;
      if (grad) other_grad.setZero(n_out, ctx.n_in);
      auto add_pair_grad = [&](MatrixXcd& g, int s, int sp, double scale) {
        const complexd a = m(s, i), b = m(sp, j), c = m(s, j), d = m(sp, i);
        g(s, i) += scale * (std::conj(a) * std::norm(b) + ind * b * std::conj(c * d));
        g(sp, j) += scale * (std::conj(b) * std::norm(a) + ind * a * std::conj(c * d));
        g(s, j) += scale * (std::conj(c) * std::norm(d) + ind * std::conj(a * b) * d);
        g(sp, i) += scale * (std::conj(d) * std::norm(c) + ind * std::conj(a * b) * c);
      };
      auto add_single_grad = [&](MatrixXcd& g, int s, double scale) {
        g(s, i) += scale * pl * surv1 * std::conj(m(s, i));
        g(s, j) += scale * pl * surv1 * std::conj(m(s, j));
      };
      for (int s = 0; s < n_out; ++s) {
        for (int sp = s + 1; sp < n_out; ++sp) {
          const double w = weight(at++);
          if (grad) {
            add_pair_grad(*grad, s, sp, w * surv2);
            add_pair_grad(other_grad, s, sp, -surv2);  // remainder loses this mass
          }
        }
      }
      for (int s = 0; s < n_out; ++s) {
        const double w = weight(at++);
        if (grad) {
          add_single_grad(*grad, s, w);
          add_single_grad(other_grad, s, -1.0);
        }
      }
      const double w_other = weight(at);
      if (grad) *grad += w_other * other_grad;
    }
  }
  return nll;
}

// Value and gradient of the normalized NLL in the Gell-Mann coordinates,
// with the analytic Frechet derivative of exp(iH) (Daleckii-Krein through
// the eigendecomposition).
double nll_in_coords(const NllContext& ctx, const VectorXd& c, VectorXd* grad) {
  const int d = ctx.n_out + ctx.n_in;
  MatrixXcd h = MatrixXcd::Zero(d, d);
  for (Eigen::Index a = 0; a < c.size(); ++a) h += c(a) * ctx.basis[static_cast<std::size_t>(a)];
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(h);
  const VectorXd phi = es.eigenvalues();
  const MatrixXcd& q = es.eigenvectors();
  VectorXcd phases(d);
  for (int k = 0; k < d; ++k) phases(k) = std::exp(complexd(0.0, phi(k)));
  const MatrixXcd v = q * phases.asDiagonal() * q.adjoint();
  const MatrixXcd m = v.topLeftCorner(ctx.n_out, ctx.n_in);
  if (!grad) return nll_and_mgrad(ctx, m, nullptr);

  MatrixXcd mgrad;
  const double nll = nll_and_mgrad(ctx, m, &mgrad);
  MatrixXcd wpad = MatrixXcd::Zero(d, d);
  wpad.topLeftCorner(ctx.n_out, ctx.n_in) = mgrad;
  // dV = Q (Lambda o (Q^dag dH Q)) Q^dag with
  // Lambda_kl = i exp(i(phi_k+phi_l)/2) sinc((phi_k-phi_l)/2).
  MatrixXcd lambda(d, d);
  for (int k = 0; k < d; ++k) {
    for (int l = 0; l < d; ++l) {
      const double half_sum = 0.5 * (phi(k) + phi(l));
      const double half_diff = 0.5 * (phi(k) - phi(l));
      const double sinc = std::abs(half_diff) < 1e-150 ? 1.0 : std::sin(half_diff) / half_diff;
      lambda(k, l) = complexd(0.0, 1.0) * std::exp(complexd(0.0, half_sum)) * sinc;
    }
  }
  // d NLL / d c_a = 2 Re Tr(W^T dV_a); collapse to G = Q (Y^T o Lambda)^T Q^dag
  // with Y = Q^dag W^T Q, then grad_a = Tr((G + G^dag) B_a).
  const MatrixXcd y = q.adjoint() * wpad.transpose() * q;
  const MatrixXcd kmat = y.transpose().cwiseProduct(lambda);
  const MatrixXcd g = q * kmat.transpose() * q.adjoint();
  const MatrixXcd gsym = g + g.adjoint();
  grad->resize(c.size());
  for (Eigen::Index a = 0; a < c.size(); ++a)
    (*grad)(a) = (gsym * ctx.basis[static_cast<std::size_t>(a)]).trace().real();
  return nll;
}

double nll_fd_gradient(const NllContext& ctx, const VectorXd& c, double h, VectorXd* grad) {
  grad->resize(c.size());
  for (Eigen::Index a = 0; a < c.size(); ++a) {
    VectorXd cp = c, cm = c;
    cp(a) += h;
    cm(a) -= h;
    (*grad)(a) = (nll_in_coords(ctx, cp, nullptr) - nll_in_coords(ctx, cm, nullptr)) / (2.0 * h);
  }
  return nll_in_coords(ctx, c, nullptr);
}

MatrixXcd gauge_fix(const MatrixXcd& m) {
  MatrixXcd out = m;
  for (Eigen::Index s = 0; s < out.rows(); ++s) {
    const complexd v = out(s, 0);
    if (std::abs(v) > 1e-14) out.row(s) *= std::conj(v) / std::abs(v);
  }
  for (Eigen::Index i = 1; i < out.cols(); ++i) {
    const complexd v = out(0, i);
    if (std::abs(v) > 1e-14) out.col(i) *= std::conj(v) / std::abs(v);
  }
  return out;
}

}  // namespace

MleResult mle_fit(const std::vector<RestrictedCounts>& data, int n_outputs, int n_inputs,
                  const linopt::GellMannCoeffs& init, double indist, const MleOptions& opts) {
  require(init.d == n_outputs + n_inputs, "mle_fit: init coefficients of wrong dimension");
  require(indist >= 0.0 && indist <= 1.0, "mle_fit: indistinguishability in [0,1]");
  // Stage 1: p_lambda is the pooled empty frequency of single-particle data.
  long long empty = 0, singles_total = 0;
  bool has_pair = false;
  for (const auto& rc : data) {
    if (rc.inputs.size() == 1) {
      const auto space = outcome_space(n_outputs, 1);
      require(rc.counts.size() == space.size(), "mle_fit: counts misaligned (single setting)");
      for (std::size_t o = 0; o < space.size(); ++o) {
        singles_total += rc.counts[o];
        if (space[o].kind == OutcomeLabel::Kind::empty) empty += rc.counts[o];
      }
    } else if (rc.inputs.size() == 2) {
      has_pair = true;
    }
  }
  require(singles_total > 0, "mle_fit: dataset has no single-particle settings");
  require(has_pair, "mle_fit: dataset has no two-particle settings");
  const double p_loss = static_cast<double>(empty) / static_cast<double>(singles_total);

  NllContext ctx;
  ctx.data = &data;
  ctx.n_out = n_outputs;
  ctx.n_in = n_inputs;
  ctx.loss = p_loss;
  ctx.indist = indist;
  ctx.prob_floor = opts.prob_floor;
  double total = 0.0;
  for (const auto& rc : data)
    for (long long c : rc.counts) total += static_cast<double>(c);
  require(total > 0.0, "mle_fit: empty dataset");
  ctx.total_counts = total;
  ctx.basis = linopt::gellmann_basis(n_outputs + n_inputs);

  auto eval = [&](const VectorXd& c, VectorXd* g) {
    return opts.fd_gradient && g ? nll_fd_gradient(ctx, c, opts.fd_step, g)
                                 : nll_in_coords(ctx, c, g);
  };

  // Stage 2: L-BFGS with Armijo backtracking.
  VectorXd c = init.c;
  VectorXd g;
  double f = eval(c, &g);
  MleResult result;
  result.loglik_trace.push_back(-f * total);
  std::deque<VectorXd> s_hist, y_hist;
  int it = 0;
  for (; it < opts.max_iters; ++it) {
    if (g.cwiseAbs().maxCoeff() <= opts.grad_tol) {
      result.converged = true;
      break;
    }
    // two-loop recursion
    VectorXd dir = -g;
    std::vector<double> alpha(s_hist.size());
    for (int h = static_cast<int>(s_hist.size()) - 1; h >= 0; --h) {
      const double rho = 1.0 / y_hist[h].dot(s_hist[h]);
      alpha[h] = rho * s_hist[h].dot(dir);
      dir -= alpha[h] * y_hist[h];
    }
    if (!s_hist.empty()) {
      const double gamma = s_hist.back().dot(y_hist.back()) / y_hist.back().squaredNorm();
      dir *= gamma;
    }
    for (std::size_t h = 0; h < s_hist.size(); ++h) {
      const double rho = 1.0 / y_hist[h].dot(s_hist[h]);
      const double beta = rho * y_hist[h].dot(dir);
      dir += (alpha[h] - beta) * s_hist[h];
    }
    if (dir.dot(g) >= 0.0) dir = -g;  // safeguard: fall back to steepest descent
    double step = 1.0;
    const double slope = g.dot(dir);
    VectorXd c_new;
    double f_new = f;
    bool accepted = false;
    for (int bt = 0; bt < 50; ++bt) {
      c_new = c + step * dir;
      f_new = eval(c_new, nullptr);
      if (std::isfinite(f_new) && f_new <= f + 1e-4 * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
    VectorXd g_new;
    eval(c_new, &g_new);
    const VectorXd s_vec = c_new - c, y_vec = g_new - g;
    if (y_vec.dot(s_vec) > 1e-12 * s_vec.norm() * y_vec.norm()) {
      s_hist.push_back(s_vec);
      y_hist.push_back(y_vec);
      if (static_cast<int>(s_hist.size()) > opts.lbfgs_memory) {
        s_hist.pop_front();
        y_hist.pop_front();
      }
    }
    c = c_new;
    f = f_new;
    g = g_new;
    result.loglik_trace.push_back(-f * total);
  }

  linopt::GellMannCoeffs final_coeffs;
  final_coeffs.d = n_outputs + n_inputs;
  final_coeffs.c = c;
  const MatrixXcd v = linopt::unitary_from_coeffs(final_coeffs);
  result.model.m = gauge_fix(v.topLeftCorner(n_outputs, n_inputs));
  result.model.loss = p_loss;
  result.model.indist = indist;
  result.coeffs = final_coeffs;
  return result;
}

double max_tvd(const TwoParticleModel& a, const TwoParticleModel& b,
               const std::vector<std::vector<int>>& settings) {
  require(a.n_outputs() == b.n_outputs() && a.n_inputs() == b.n_inputs(),
          "max_tvd: models must share the outcome spaces");
  require(!settings.empty(), "max_tvd: need at least one setting");
  double worst = 0.0;
  for (const auto& inputs : settings) {
    const VectorXd pa = model_distribution(a, inputs);
    const VectorXd pb = model_distribution(b, inputs);
    worst = std::max(worst, 0.5 * (pa - pb).cwiseAbs().sum());
  }
  return worst;
}

// ---------------------------------------------------------------------------

std::vector<linopt::OccupationList> restricted_outcomes(int n_outputs, int n_particles) {
  std::vector<linopt::OccupationList> out;
  for (int p = 0; p <= n_particles; ++p)
    for (auto& h : linopt::enumerate_occupations(p, n_outputs)) out.push_back(std::move(h));
  return out;
}

namespace {

VectorXd restricted_thermal_distribution(const MatrixXcd& m, const std::vector<int>& inputs,
                                         double x, int n_outputs) {
  linopt::SiteList cols(inputs.begin(), inputs.end());
  MatrixXcd u_sub(m.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) u_sub.col(static_cast<Eigen::Index>(c)) = m.col(cols[c] - 1);
  const auto outcomes = restricted_outcomes(n_outputs, static_cast<int>(inputs.size()));
  VectorXd p(static_cast<Eigen::Index>(outcomes.size()));
  const hidden_dof::AuxiliaryClassFunction k =
      hidden_dof::AuxiliaryClassFunction::thermal(x, static_cast<int>(inputs.size()));
  for (std::size_t o = 0; o < outcomes.size(); ++o)
    p(static_cast<Eigen::Index>(o)) =
        hidden_dof::restricted_probability(u_sub, k, outcomes[o], 1e-6);
  return p;
}

}  // namespace

BosonDesignJacobians build_restricted_thermal_jacobians(const BosonDesignSpec& spec,
                                                        double fd_step) {
  const int n_out = static_cast<int>(spec.reference_submatrix.rows());
  const int n_in = static_cast<int>(spec.reference_submatrix.cols());
  require(!spec.settings.empty(), "build_restricted_thermal_jacobians: no settings");
  const MatrixXcd completion = linopt::unitary_completion(spec.reference_submatrix);
  linopt::GellMannCoeffs c0 = linopt::coeffs_from_unitary(completion);
  auto submatrix_at = [&](const VectorXd& c) {
    linopt::GellMannCoeffs cc;
    cc.d = c0.d;
    cc.c = c;
    return linopt::unitary_from_coeffs(cc).topLeftCorner(n_out, n_in).eval();
  };
  BosonDesignJacobians out;
  for (const auto& inputs : spec.settings) {
    require(!inputs.empty(), "build_restricted_thermal_jacobians: empty setting");
    out.probs.push_back(restricted_thermal_distribution(spec.reference_submatrix, inputs,
                                                        spec.thermal_x, n_out));
  }
  const Eigen::Index n_params = c0.c.size();
  std::vector<MatrixXd> jac(spec.settings.size());
  for (std::size_t s = 0; s < spec.settings.size(); ++s)
    jac[s].resize(out.probs[s].size(), n_params);
  for (Eigen::Index a = 0; a < n_params; ++a) {
    VectorXd cp = c0.c, cm = c0.c;
    cp(a) += fd_step;
    cm(a) -= fd_step;
    const MatrixXcd mp = submatrix_at(cp), mm = submatrix_at(cm);
    for (std::size_t s = 0; s < spec.settings.size(); ++s) {
      const VectorXd pp =
          restricted_thermal_distribution(mp, spec.settings[s], spec.thermal_x, n_out);
      const VectorXd pm =
          restricted_thermal_distribution(mm, spec.settings[s], spec.thermal_x, n_out);
      jac[s].col(a) = (pp - pm) / (2.0 * fd_step);
    }
  }
  out.jacobians = std::move(jac);
  return out;
}

}  // namespace bosonstat::design
