// Python bindings for the main operations: combinatorics of S_n, permanents
// and ideal distributions, partial-distinguishability models, bunching
// statistics, the statistical toolkit, experiment design and the MLE, and
// the dephasing error model.

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bosonstat/bunching.hpp"
#include "bosonstat/design.hpp"
#include "bosonstat/error_model.hpp"
#include "bosonstat/hidden_dof.hpp"
#include "bosonstat/linopt.hpp"
#include "bosonstat/rng.hpp"
#include "bosonstat/stats.hpp"
#include "bosonstat/symrep.hpp"

namespace py = pybind11;
using namespace bosonstat;

namespace {

symrep::Partition to_partition(const std::vector<int>& parts) {
  return symrep::Partition(parts);
}

py::tuple partition_key(const symrep::Partition& lam) {
  py::tuple key(lam.length());
  for (int i = 0; i < lam.length(); ++i) key[i] = lam.parts()[static_cast<std::size_t>(i)];
  return key;
}

hidden_dof::PartitionMixture to_mixture(const py::dict& weights, int n) {
  hidden_dof::PartitionMixture mix;
  mix.n = n;
  for (const auto& item : weights)
    mix.weights[to_partition(item.first.cast<std::vector<int>>())] =
        item.second.cast<double>();
  mix.validate(1e-8);
  return mix;
}

py::dict from_mixture(const hidden_dof::PartitionMixture& mix) {
  py::dict out;
  for (const auto& [lam, w] : mix.weights) out[partition_key(lam)] = w;
  return out;
}

hidden_dof::AuxiliaryClassFunction to_class_function(const py::dict& values, int n) {
  std::map<symrep::Partition, complexd> v;
  for (const auto& item : values)
    v[to_partition(item.first.cast<std::vector<int>>())] =
        item.second.cast<std::complex<double>>();
  return hidden_dof::AuxiliaryClassFunction(n, std::move(v));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "linear-optical statistics with partially distinguishable particles";

  py::register_exception<invalid_input>(m, "InvalidInput", PyExc_ValueError);
  py::register_exception<size_limit_error>(m, "SizeLimitError", PyExc_ValueError);
  py::register_exception<numerical_error>(m, "NumericalError", PyExc_ArithmeticError);

  // symrep
  m.def("partitions_of", [](int n) {
    std::vector<std::vector<int>> out;
    for (const auto& p : symrep::partitions_of(n)) out.push_back(p.parts());
    return out;
  });
  m.def("hook_dimension",
        [](const std::vector<int>& lam) { return symrep::hook_dimension(to_partition(lam)); });
  m.def("weyl_dimension", [](const std::vector<int>& lam, int modes) {
    return symrep::weyl_dimension(to_partition(lam), modes);
  });
  m.def("character", [](const std::vector<int>& lam, const std::vector<int>& cls) {
    return symrep::character(to_partition(lam), to_partition(cls));
  });
  m.def("young_orthogonal_rep",
        [](const std::vector<int>& lam, const std::vector<int>& images) {
          return symrep::young_orthogonal_rep(to_partition(lam), symrep::Permutation(images));
        });

  // linopt
  m.def("beam_splitter", &linopt::beam_splitter);
  m.def("zeta", &linopt::zeta);
  m.def("xi", &linopt::xi);
  m.def("permanent", [](const MatrixXcd& mat) { return linopt::permanent(mat); });
  m.def("bosonic_probability", &linopt::bosonic_probability);
  m.def("distinguishable_probability", &linopt::distinguishable_probability);
  m.def("enumerate_occupations", &linopt::enumerate_occupations);
  m.def("gellmann_basis", &linopt::gellmann_basis);
  m.def("unitary_from_coeffs", [](const VectorXd& c, int d) {
    linopt::GellMannCoeffs g{d, c};
    return linopt::unitary_from_coeffs(g);
  });
  m.def("coeffs_from_unitary",
        [](const MatrixXcd& v) { return linopt::coeffs_from_unitary(v).c; });
  m.def("unitary_completion",
        [](const MatrixXcd& mat) { return linopt::unitary_completion(mat); });

  // hidden_dof
  m.def("thermal_class_function", [](double x, int n) {
    py::dict out;
    const auto k = hidden_dof::AuxiliaryClassFunction::thermal(x, n);
    for (const auto& mu : symrep::partitions_of(n)) out[partition_key(mu)] = k.value(mu);
    return out;
  });
  m.def("thermal_partition_weights",
        [](double x, int n) { return from_mixture(hidden_dof::thermal_partition_weights(x, n)); });
  m.def("plancherel_weights",
        [](int n) { return from_mixture(hidden_dof::PartitionMixture::plancherel(n)); });
  m.def("weights_from_class_function", [](const py::dict& k, int n) {
    return from_mixture(hidden_dof::weights_from_class_function(to_class_function(k, n)));
  });
  m.def("direct_model_probability",
        [](const MatrixXcd& u, const linopt::SiteList& i, const py::dict& k,
           const linopt::OccupationList& g) {
          return hidden_dof::direct_model_probability(
              u, i, to_class_function(k, static_cast<int>(i.size())), g);
        });
  m.def("mixture_probability",
        [](const py::dict& mix, const MatrixXcd& u, const linopt::SiteList& i,
           const linopt::OccupationList& g) {
          return hidden_dof::mixture_probability(to_mixture(mix, static_cast<int>(i.size())), u,
                                                 i, g);
        });
  m.def("restricted_probability",
        [](const MatrixXcd& u_sub, double x, const linopt::OccupationList& h) {
          return hidden_dof::restricted_probability(u_sub, x, h);
        });

  // bunching
  m.def("coincidence_probability", &bunching::coincidence_probability);
  m.def("hom_tau", &bunching::tau);
  m.def("estimate_indistinguishability", &bunching::estimate_indistinguishability);
  m.def("indistinguishability_lower_bound", &bunching::indistinguishability_lower_bound);
  m.def("indistinguishability_from_vacuum", &bunching::indistinguishability_from_vacuum);
  m.def("normalized_immanant", [](const MatrixXcd& mat, const std::vector<int>& lam) {
    return bunching::normalized_immanant(mat, to_partition(lam));
  });
  m.def("generalized_bunching",
        [](const MatrixXcd& u, const linopt::SiteList& i, const linopt::SiteList& subset,
           const py::dict& mix) {
          return bunching::generalized_bunching(u, i, subset,
                                                to_mixture(mix, static_cast<int>(i.size())));
        });
  m.def("average_generalized_bunching",
        [](const MatrixXcd& u, const linopt::SiteList& i, int k, const py::dict& mix) {
          const auto r = bunching::average_generalized_bunching(
              u, i, k, to_mixture(mix, static_cast<int>(i.size())));
          return py::make_tuple(r.value, r.k_below_n);
        });
  m.def("optimal_k", &bunching::optimal_k);
  m.def("modified_bunching_mc",
        [](const std::vector<std::pair<std::vector<int>, std::vector<long long>>>& data, int modes,
           int k, long long n_mc, std::uint64_t seed, long long chunk_size, int n_threads) {
          std::vector<bunching::SingleParticleCounts> converted;
          for (const auto& [sites, counts] : data) converted.push_back({sites, counts});
          return bunching::modified_bunching_mc(converted, modes, k, n_mc, seed, chunk_size,
                                                n_threads);
        },
        py::arg("data"), py::arg("modes"), py::arg("k"), py::arg("n_mc"), py::arg("seed"),
        py::arg("chunk_size") = 1 << 16, py::arg("n_threads") = 1);

  // stats
  m.def("normal_cdf", &stats::normal_cdf);
  m.def("normal_quantile", &stats::normal_quantile);
  m.def("delta_correct", &stats::delta_correct);
  m.def("bootstrap_bc_interval",
        [](const std::vector<double>& reps, double point, double alpha,
           std::optional<double> clip_hi) {
          const auto iv = stats::bootstrap_bc_interval(reps, point, alpha, clip_hi);
          return py::make_tuple(iv.lo, iv.hi, iv.degenerate);
        },
        py::arg("replicates"), py::arg("point"), py::arg("alpha"),
        py::arg("clip_hi") = std::nullopt);
  m.def("clopper_pearson", [](long long k, long long n, double alpha, const std::string& side) {
    return stats::clopper_pearson(k, n, alpha,
                                  side == "lower" ? stats::Side::lower : stats::Side::upper);
  });
  m.def("union_ratio_interval",
        [](std::pair<long long, long long> num, std::pair<long long, long long> den,
           double alpha, double beta_u, double beta_l) {
          const auto iv = stats::union_ratio_interval(num, den, alpha, beta_u, beta_l);
          return py::make_tuple(iv.lo, iv.hi, iv.unbounded_hi);
        },
        py::arg("num"), py::arg("den"), py::arg("alpha"), py::arg("beta_u") = 0.004,
        py::arg("beta_l") = 0.15999);
  m.def("chernoff_samples", &stats::chernoff_samples, py::arg("p_ref"), py::arg("epsilon"),
        py::arg("delta"), py::arg("cap") = 0);
  m.def("hoeffding_samples", &stats::hoeffding_samples, py::arg("p_ref"), py::arg("epsilon"),
        py::arg("delta"), py::arg("cap") = 0);
  m.def("loss_from_single_survival", &stats::loss_from_single_survival);
  m.def("time_label_two_particle", &stats::time_label_two_particle);

  // design
  m.def("fisher_information", &design::fisher_information);
  m.def("project_inferable",
        [](const std::vector<MatrixXd>& jacobians, double rtol) {
          const auto p = design::project_inferable(jacobians, rtol);
          return py::make_tuple(p.basis, p.projected, p.inferable_count);
        },
        py::arg("jacobians"), py::arg("rtol") = 1e-7);
  m.def("a_optimal_direct",
        [](const std::vector<MatrixXd>& fims, const VectorXd& y, double rel_tol) {
          const auto r = design::a_optimal_direct(fims, y, rel_tol);
          return py::make_tuple(r.q, r.cost);
        },
        py::arg("fims"), py::arg("y"), py::arg("rel_tol") = 1e-8);
  m.def("a_optimal_socp",
        [](const std::vector<MatrixXd>& jacobians, const std::vector<VectorXd>& probs,
           const VectorXd& y, double rel_tol) {
          const auto r = design::a_optimal_socp(jacobians, probs, y, rel_tol);
          return py::make_tuple(r.q, r.cost, r.d);
        },
        py::arg("projected_jacobians"), py::arg("probs"), py::arg("y"),
        py::arg("rel_tol") = 1e-8);
  m.def("shot_allocation", &design::shot_allocation);
  m.def("two_particle_distribution",
        [](const MatrixXcd& mat, double loss, double indist, const std::vector<int>& inputs) {
          design::TwoParticleModel model{mat, loss, indist};
          model.validate();
          return design::model_distribution(model, inputs);
        });
  m.def("sample_restricted_counts",
        [](const MatrixXcd& mat, double loss, double indist,
           const std::vector<std::vector<int>>& settings, long long shots, std::uint64_t seed) {
          design::TwoParticleModel model{mat, loss, indist};
          std::vector<std::pair<std::vector<int>, std::vector<long long>>> out;
          for (const auto& rc : design::sample_restricted_counts(model, settings, shots, seed))
            out.emplace_back(rc.inputs, rc.counts);
          return out;
        });
  m.def("mle_fit",
        [](const std::vector<std::pair<std::vector<int>, std::vector<long long>>>& data,
           int n_outputs, int n_inputs, const MatrixXcd& init, double indist) {
          std::vector<design::RestrictedCounts> converted;
          for (const auto& [inputs, counts] : data) converted.push_back({inputs, counts});
          const auto init_coeffs =
              linopt::coeffs_from_unitary(linopt::unitary_completion(init));
          const auto fit = design::mle_fit(converted, n_outputs, n_inputs, init_coeffs, indist);
          py::dict out;
          out["submatrix"] = fit.model.m;
          out["p_loss"] = fit.model.loss;
          out["indistinguishability"] = fit.model.indist;
          out["log_likelihood"] = fit.loglik_trace.back();
          out["loglik_trace"] = fit.loglik_trace;
          out["converged"] = fit.converged;
          return out;
        });
  m.def("max_tvd", [](const MatrixXcd& ma, const MatrixXcd& mb, double loss, double indist,
                      const std::vector<std::vector<int>>& settings) {
    return design::max_tvd({ma, loss, indist}, {mb, loss, indist}, settings);
  });

  // error model
  m.def("dephase", [](const MatrixXcd& rho, double sigma_s, double t,
                      const std::vector<double>& omegas) {
    return error_model::dephase(rho, {sigma_s, t, omegas});
  });
  m.def("fidelity_after_dephasing", [](const MatrixXcd& rho0, double sigma_s, double t,
                                       const std::vector<double>& omegas) {
    return error_model::fidelity_after_dephasing(rho0, {sigma_s, t, omegas});
  });
  m.def("fidelity_lower_bound", &error_model::fidelity_lower_bound);

  m.attr("rng_algorithm") = Rng::algorithm();
}
