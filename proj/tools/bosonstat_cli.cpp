// bosonstat command-line interface: simulate and sample linear-optical
// distributions with partial distinguishability, estimate indistinguishability
// from count data, compute bunching statistics, design experiments, fit a
// unitary submatrix by maximum likelihood, and evaluate the laser-fluctuation
// dephasing bound. Emits JSON results and CSV plot data.
//
// Exit codes: 0 success, 2 input error, 3 numerical failure, 4 size-cap
// violation.

#include <atomic>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "bosonstat/bunching.hpp"
#include "bosonstat/design.hpp"
#include "bosonstat/error_model.hpp"
#include "bosonstat/hidden_dof.hpp"
#include "bosonstat/hom.hpp"
#include "bosonstat/io.hpp"
#include "bosonstat/linopt.hpp"
#include "bosonstat/rng.hpp"
#include "bosonstat/stats.hpp"
#include "bosonstat/symrep.hpp"

using nlohmann::json;
using namespace bosonstat;

namespace {

int g_threads = 1;

std::vector<int> parse_sites(const std::string& arg) {
  std::vector<int> sites;
  std::stringstream ss(arg);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    sites.push_back(std::stoi(tok));
  }
  require(!sites.empty(), "expected a comma-separated site list, got '" + arg + "'");
  return sites;
}

struct Grid {
  double lo = 0.0, hi = 0.0;
  int steps = 0;
};

Grid parse_grid(const std::string& arg) {
  Grid g;
  std::stringstream ss(arg);
  std::string a, b, c;
  if (!std::getline(ss, a, ':') || !std::getline(ss, b, ':') || !std::getline(ss, c, ':'))
    throw invalid_input("expected lo:hi:steps, got '" + arg + "'");
  g.lo = std::stod(a);
  g.hi = std::stod(b);
  g.steps = std::stoi(c);
  require(g.steps >= 1 && g.hi >= g.lo, "bad grid '" + arg + "'");
  return g;
}

void emit_json(const json& j, const std::string& out_path) {
  if (out_path.empty() || out_path == "-") {
    std::cout << j.dump(2) << '\n';
  } else {
    std::ofstream out(out_path);
    require(static_cast<bool>(out), "cannot write " + out_path);
    out << j.dump(2) << '\n';
  }
}

std::string occupation_label(const linopt::OccupationList& g) {
  std::string s;
  for (std::size_t x = 0; x < g.size(); ++x) {
    if (x) s += '|';
    s += std::to_string(g[x]);
  }
  return s;
}

// ---------------------------------------------------------------------------
// Model selection shared by simulate/sample/bunching.

struct ModelSpec {
  enum class Kind { bosonic, distinguishable, thermal, mixture } kind = Kind::bosonic;
  double x = 0.0;
  hidden_dof::PartitionMixture mixture;
};

ModelSpec parse_model(const std::string& arg, int n) {
  ModelSpec spec;
  if (arg == "bosonic") {
    spec.kind = ModelSpec::Kind::bosonic;
  } else if (arg == "distinguishable") {
    spec.kind = ModelSpec::Kind::distinguishable;
  } else if (arg.rfind("thermal:", 0) == 0) {
    spec.kind = ModelSpec::Kind::thermal;
    spec.x = std::stod(arg.substr(8));
    require(spec.x >= 0.0 && spec.x < 1.0, "thermal parameter must lie in [0, 1)");
    if (spec.x == 0.0) spec.kind = ModelSpec::Kind::bosonic;  // exact limit
  } else if (arg.rfind("mixture:", 0) == 0) {
    spec.kind = ModelSpec::Kind::mixture;
    spec.mixture = io::read_mixture_json(arg.substr(8));
    require(spec.mixture.n == n, "mixture file is for n = " + std::to_string(spec.mixture.n) +
                                     " but " + std::to_string(n) + " inputs were prepared");
  } else {
    throw invalid_input("unknown model '" + arg +
                        "' (expected bosonic|distinguishable|thermal:x|mixture:file)");
  }
  return spec;
}

hidden_dof::PartitionMixture model_mixture(const ModelSpec& spec, int n) {
  switch (spec.kind) {
    case ModelSpec::Kind::bosonic:
      return hidden_dof::PartitionMixture::bosonic(n);
    case ModelSpec::Kind::distinguishable:
      return hidden_dof::PartitionMixture::plancherel(n);
    case ModelSpec::Kind::thermal:
      return hidden_dof::thermal_partition_weights(spec.x, n);
    case ModelSpec::Kind::mixture:
      return spec.mixture;
  }
  throw invalid_input("unreachable model kind");
}

hidden_dof::AuxiliaryClassFunction model_class_function(const ModelSpec& spec, int n) {
  switch (spec.kind) {
    case ModelSpec::Kind::bosonic:
      return hidden_dof::AuxiliaryClassFunction::constant_one(n);
    case ModelSpec::Kind::distinguishable:
      return hidden_dof::AuxiliaryClassFunction::delta_identity(n);
    case ModelSpec::Kind::thermal:
      return hidden_dof::AuxiliaryClassFunction::thermal(spec.x, n);
    case ModelSpec::Kind::mixture:
      return hidden_dof::class_function_from_weights(spec.mixture);
  }
  throw invalid_input("unreachable model kind");
}

void check_distinct_inputs_for(const ModelSpec& spec, const linopt::SiteList& inputs) {
  if (spec.kind == ModelSpec::Kind::bosonic || spec.kind == ModelSpec::Kind::distinguishable)
    return;
  linopt::SiteList sorted = inputs;
  std::sort(sorted.begin(), sorted.end());
  require(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end(),
          "thermal/mixture models require distinct input sites");
}

// Exhaustive outcome table of (label, probability) rows.
struct OutcomeTable {
  std::vector<std::string> labels;
  std::vector<double> probs;
  // occupation pattern per row, over all modes (plain) or the subset
  std::vector<linopt::OccupationList> patterns;
  bool restricted = false;
};

OutcomeTable simulate_table(const MatrixXcd& u, const linopt::SiteList& inputs,
                            const ModelSpec& spec, const std::vector<int>& subset, bool force) {
  const int n = static_cast<int>(inputs.size());
  const int m = static_cast<int>(u.rows());
  check_distinct_inputs_for(spec, inputs);
  const int cap = force ? 16 : hidden_dof::kMaxDirectN;
  if (n > cap)
    throw size_limit_error("n = " + std::to_string(n) +
                           " exceeds the cap (pass --force to override up to 16)");
  OutcomeTable table;
  if (subset.empty()) {
    for (const auto& g : linopt::enumerate_occupations(n, m)) {
      double p = 0.0;
      switch (spec.kind) {
        case ModelSpec::Kind::bosonic:
          p = linopt::bosonic_probability(u, inputs, g);
          break;
        case ModelSpec::Kind::distinguishable:
          p = linopt::distinguishable_probability(u, inputs, g);
          break;
        default:
          p = hidden_dof::mixture_probability(model_mixture(spec, n), u, inputs, g,
                                              std::max(cap, hidden_dof::kMaxDirectN));
      }
      table.labels.push_back(occupation_label(g));
      table.probs.push_back(p);
      table.patterns.push_back(g);
    }
  } else {
    table.restricted = true;
    const auto k = model_class_function(spec, n);
    linopt::SiteList rows(subset.begin(), subset.end());
    const MatrixXcd u_sub = linopt::submatrix(u, rows, inputs);
    for (int particles = 0; particles <= n; ++particles) {
      for (const auto& h :
           linopt::enumerate_occupations(particles, static_cast<int>(subset.size()))) {
        table.labels.push_back(occupation_label(h));
        table.probs.push_back(hidden_dof::restricted_probability(u_sub, k, h, 1e-8, cap));
        table.patterns.push_back(h);
      }
    }
  }
  double total = 0.0;
  for (double p : table.probs) total += p;
  require(std::abs(total - 1.0) <= 1e-9, "outcome table failed to normalize (sum = " +
                                             std::to_string(total) + ")");
  return table;
}

// ---------------------------------------------------------------------------
// Subcommands.

int cmd_simulate(const std::string& unitary_path, const std::string& input_arg,
                 const std::string& model_arg, const std::string& restrict_arg, bool force,
                 const std::string& out_path) {
  const MatrixXcd u = io::read_matrix_json(unitary_path);
  require(linopt::is_unitary(u, 1e-10), unitary_path + ": matrix is not unitary");
  const auto inputs = parse_sites(input_arg);
  const ModelSpec spec = parse_model(model_arg, static_cast<int>(inputs.size()));
  std::vector<int> subset;
  if (!restrict_arg.empty()) subset = parse_sites(restrict_arg);
  const OutcomeTable table = simulate_table(u, inputs, spec, subset, force);
  io::CsvWriter csv(out_path.empty() ? "-" : out_path, {"outcome", "probability"});
  for (std::size_t r = 0; r < table.labels.size(); ++r)
    csv.row({table.labels[r], io::CsvWriter::num(table.probs[r])});
  return 0;
}

int cmd_sample(const std::string& unitary_path, const std::string& input_arg,
               const std::string& model_arg, const std::string& restrict_arg, bool force,
               long long shots, std::uint64_t seed, const std::string& out_path) {
  const MatrixXcd u = io::read_matrix_json(unitary_path);
  require(linopt::is_unitary(u, 1e-10), unitary_path + ": matrix is not unitary");
  const auto inputs = parse_sites(input_arg);
  const ModelSpec spec = parse_model(model_arg, static_cast<int>(inputs.size()));
  std::vector<int> subset;
  if (!restrict_arg.empty()) subset = parse_sites(restrict_arg);
  const OutcomeTable table = simulate_table(u, inputs, spec, subset, force);
  Rng rng(seed);
  const auto counts = multinomial_draw(rng, table.probs, shots);
  io::CountsDataset ds;
  ds.modes = static_cast<int>(u.rows());
  io::SettingCounts setting;
  setting.prepared_sites = inputs;
  if (table.restricted) ds.output_sites = subset;
  for (std::size_t r = 0; r < table.patterns.size(); ++r) {
    io::OutcomeCount oc;
    oc.count = counts[r];
    const auto sites = linopt::zeta(table.patterns[r]);
    if (sites.empty()) {
      oc.kind = io::OutcomeCount::Kind::empty;
    } else {
      oc.kind = io::OutcomeCount::Kind::sites;
      for (int s : sites)
        oc.sites.push_back(table.restricted ? subset[static_cast<std::size_t>(s - 1)] : s);
      std::sort(oc.sites.begin(), oc.sites.end());
    }
    setting.outcomes.push_back(std::move(oc));
  }
  ds.settings.push_back(std::move(setting));
  require(!out_path.empty(), "sample requires --out for the counts dataset");
  io::write_counts_json(out_path, ds);
  return 0;
}

int cmd_hom_estimate(const std::string& singles_a_path, const std::string& singles_b_path,
                     const std::string& pairs_path, std::optional<double> tau_value,
                     int bootstrap, std::uint64_t seed, const std::string& s1_arg,
                     const std::string& s2_arg, const std::string& out_path) {
  const io::CountsDataset ds_a = io::read_counts_json(singles_a_path);
  const io::CountsDataset ds_b = io::read_counts_json(singles_b_path);
  const io::CountsDataset ds_ab = io::read_counts_json(pairs_path);
  std::vector<int> s1, s2;
  if (!s1_arg.empty()) {
    s1 = parse_sites(s1_arg);
    s2 = parse_sites(s2_arg);
  }
  const hom::HomResult result = hom::estimate(ds_a, ds_b, ds_ab, tau_value, s1, s2, bootstrap,
                                              seed, 0.16, std::max(1, g_threads));
  json out{{"schema_version", 1},
           {"q", result.q},
           {"p_loss", result.p_loss},
           {"indistinguishability_lower_bound", result.lower_bound}};
  if (tau_value) {
    out["tau"] = *tau_value;
    out["indistinguishability"] = *result.indistinguishability;
  }
  if (result.lower_bound_interval) {
    out["lower_bound_interval"] = {{"lo", std::max(0.0, result.lower_bound_interval->lo)},
                                   {"hi", result.lower_bound_interval->hi},
                                   {"degenerate", result.lower_bound_interval->degenerate}};
    out["bootstrap_replicates"] = bootstrap;
  }
  if (result.interval) {
    out["interval"] = {{"lo", std::max(0.0, result.interval->lo)},
                       {"hi", result.interval->hi},
                       {"degenerate", result.interval->degenerate}};
  }
  emit_json(out, out_path);
  return 0;
}

std::string partition_csv_label(const symrep::Partition& lam) {
  // comma-free label, e.g. "3+1"
  std::string s;
  for (std::size_t i = 0; i < lam.parts().size(); ++i) {
    if (i) s += '+';
    s += std::to_string(lam.parts()[i]);
  }
  return s;
}

int cmd_partition_weights(int n, const std::string& grid_arg, const std::string& out_path) {
  const Grid grid = parse_grid(grid_arg);
  require(grid.lo >= 0.0 && grid.hi < 1.0, "x grid must lie inside [0, 1)");
  io::CsvWriter csv(out_path.empty() ? "-" : out_path, {"x", "partition", "p"});
  const auto lambdas = symrep::partitions_of(n);
  for (int step = 0; step < grid.steps; ++step) {
    const double x =
        grid.steps == 1 ? grid.lo
                        : grid.lo + (grid.hi - grid.lo) * step / (grid.steps - 1);
    const auto mix = hidden_dof::thermal_partition_weights(x, n);
    for (const auto& lam : lambdas)
      csv.row({io::CsvWriter::num(x), partition_csv_label(lam),
               io::CsvWriter::num(mix.weight(lam))});
  }
  // analytic x -> 1 endpoint: the Plancherel weights
  const auto plancherel = hidden_dof::PartitionMixture::plancherel(n);
  for (const auto& lam : lambdas)
    csv.row({io::CsvWriter::num(1.0), partition_csv_label(lam),
             io::CsvWriter::num(plancherel.weight(lam))});
  return 0;
}

int cmd_design(const std::string& jacobians_path, const std::string& boson_spec_path,
               const std::string& reference_path, const std::string& costs_path,
               long long shots, const std::string& out_path) {
  std::vector<MatrixXd> jacobians;
  std::vector<VectorXd> probs;
  std::vector<std::string> ids;
  if (!jacobians_path.empty()) {
    std::ifstream in(jacobians_path);
    require(static_cast<bool>(in), "cannot open " + jacobians_path);
    json j;
    in >> j;
    for (const auto& s : j.at("settings")) {
      ids.push_back(s.value("id", "setting-" + std::to_string(ids.size())));
      const auto pv = s.at("probs").get<std::vector<double>>();
      VectorXd p(pv.size());
      for (std::size_t o = 0; o < pv.size(); ++o) p(static_cast<Eigen::Index>(o)) = pv[o];
      probs.push_back(p);
      const auto rows = s.at("jacobian").get<std::vector<std::vector<double>>>();
      require(rows.size() == pv.size(), jacobians_path + ": jacobian rows != outcomes");
      MatrixXd jac(rows.size(), rows[0].size());
      for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < rows[r].size(); ++c)
          jac(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
      jacobians.push_back(jac);
    }
  } else {
    require(!boson_spec_path.empty(), "need --jacobians or --boson-spec");
    require(!reference_path.empty(), "--boson-spec needs --reference");
    std::ifstream in(boson_spec_path);
    require(static_cast<bool>(in), "cannot open " + boson_spec_path);
    json j;
    in >> j;
    const MatrixXcd u = io::read_matrix_json(reference_path);
    const auto input_sites = j.at("input_sites").get<std::vector<int>>();
    const auto output_sites = j.at("output_sites").get<std::vector<int>>();
    design::BosonDesignSpec spec;
    spec.thermal_x = j.value("x", 0.0);
    spec.reference_submatrix = linopt::submatrix(u, output_sites, input_sites);
    if (j.contains("settings")) {
      spec.settings = j["settings"].get<std::vector<std::vector<int>>>();
    } else {
      const int max_particles =
          std::min<int>(j.value("max_particles", 2), static_cast<int>(input_sites.size()));
      // all nonempty input-slot subsets up to the particle cap
      const int n_in = static_cast<int>(input_sites.size());
      for (int mask = 1; mask < (1 << n_in); ++mask) {
        std::vector<int> slots;
        for (int b = 0; b < n_in; ++b)
          if (mask & (1 << b)) slots.push_back(b + 1);
        if (static_cast<int>(slots.size()) <= max_particles) spec.settings.push_back(slots);
      }
    }
    for (const auto& s : spec.settings) {
      std::string id = "prep";
      for (int slot : s) id += "-" + std::to_string(input_sites[slot - 1]);
      ids.push_back(id);
    }
    const auto built = design::build_restricted_thermal_jacobians(spec);
    jacobians = built.jacobians;
    probs = built.probs;
  }

  const auto proj = design::project_inferable(jacobians);
  VectorXd y = VectorXd::Ones(proj.inferable_count);
  if (!costs_path.empty()) {
    std::ifstream in(costs_path);
    require(static_cast<bool>(in), "cannot open " + costs_path);
    json j;
    in >> j;
    const auto yv = j.at("Y").get<std::vector<double>>();
    require(static_cast<int>(yv.size()) == proj.inferable_count,
            "costs vector length must equal the inferable parameter count (" +
                std::to_string(proj.inferable_count) + ")");
    for (std::size_t r = 0; r < yv.size(); ++r) y(static_cast<Eigen::Index>(r)) = yv[r];
  }
  std::vector<MatrixXd> fims;
  for (std::size_t s = 0; s < jacobians.size(); ++s)
    fims.push_back(design::fisher_information(proj.projected[s], probs[s]));
  const auto direct = design::a_optimal_direct(fims, y);
  const auto socp = design::a_optimal_socp(proj.projected, probs, y);
  const auto alloc = design::shot_allocation(socp.q, shots);

  json weights = json::array();
  for (std::size_t s = 0; s < jacobians.size(); ++s)
    weights.push_back(json{{"setting", ids[s]},
                           {"q", socp.q(static_cast<Eigen::Index>(s))},
                           {"shots", alloc[s]}});
  emit_json(json{{"schema_version", 1},
                 {"inferable_parameters", proj.inferable_count},
                 {"weights", std::move(weights)},
                 {"direct_cost", direct.cost},
                 {"socp_cost", socp.cost},
                 {"cost_per_shot_per_param", socp.cost / proj.inferable_count}},
            out_path);
  return 0;
}

json matrix_to_json(const MatrixXcd& m, bool unitary_flag) {
  json entries = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    entries.push_back(std::move(row));
  }
  return json{{"schema_version", 1},
              {"dim_rows", m.rows()},
              {"dim_cols", m.cols()},
              {"unitary", unitary_flag},
              {"entries", std::move(entries)}};
}

int cmd_fit(const std::string& data_path, const std::string& init_path, double indist,
            int bootstrap, std::uint64_t seed, bool strict, const std::string& tvd_hist_path,
            const std::string& out_path) {
  const io::CountsDataset ds = io::read_counts_json(data_path);
  require(!ds.input_sites.empty() && !ds.output_sites.empty(),
          data_path + ": fit requires input_sites and output_sites in the dataset");
  const MatrixXcd m0 = io::read_matrix_json(init_path);
  const int n_out = static_cast<int>(ds.output_sites.size());
  const int n_in = static_cast<int>(ds.input_sites.size());
  require(m0.rows() == n_out && m0.cols() == n_in,
          init_path + ": init must be output_sites x input_sites");
  const auto data = io::to_restricted_counts(ds);
  const auto init_coeffs = linopt::coeffs_from_unitary(linopt::unitary_completion(m0));
  const auto fit = design::mle_fit(data, n_out, n_in, init_coeffs, indist);

  std::vector<std::vector<int>> settings;
  for (const auto& rc : data) settings.push_back(rc.inputs);
  design::TwoParticleModel init_model{m0, fit.model.loss, indist};
  const double tvd_to_init = design::max_tvd(fit.model, init_model, settings);

  json out{{"schema_version", 1},
           {"submatrix", matrix_to_json(fit.model.m, false)},
           {"p_loss", fit.model.loss},
           {"indistinguishability", indist},
           {"log_likelihood", fit.loglik_trace.back()},
           {"iterations", fit.loglik_trace.size() - 1},
           {"converged", fit.converged},
           {"max_tvd_to_init", tvd_to_init}};

  if (bootstrap > 0) {
    std::vector<double> tvds(bootstrap, 0.0);
    const Rng parent(seed);
    std::atomic<int> next{0};
    auto worker = [&] {
      for (int r = next.fetch_add(1); r < bootstrap; r = next.fetch_add(1)) {
        Rng rng = parent.child(static_cast<std::uint64_t>(r));
        auto resampled = data;
        for (auto& rc : resampled) {
          std::vector<double> w;
          long long total = 0;
          for (long long c : rc.counts) {
            w.push_back(static_cast<double>(c));
            total += c;
          }
          rc.counts = multinomial_draw(rng, w, total);
        }
        const auto refit = design::mle_fit(resampled, n_out, n_in, init_coeffs, indist);
        tvds[r] = design::max_tvd(refit.model, fit.model, settings);
      }
    };
    std::vector<std::thread> pool;
    for (int w = 0; w < std::max(1, g_threads); ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    out["bootstrap_replicates"] = bootstrap;
    if (!tvd_hist_path.empty()) {
      io::CsvWriter csv(tvd_hist_path, {"replicate", "max_tvd"});
      for (int r = 0; r < bootstrap; ++r)
        csv.row({std::to_string(r), io::CsvWriter::num(tvds[r])});
    }
  }
  emit_json(out, out_path);
  if (strict && !fit.converged) {
    std::cerr << "fit did not converge within the iteration budget\n";
    return 3;
  }
  return 0;
}

int cmd_bunching(const std::string& unitary_path, const std::string& input_arg,
                 const std::string& model_arg, const std::string& k_arg,
                 const std::string& out_path) {
  const MatrixXcd u = io::read_matrix_json(unitary_path);
  require(linopt::is_unitary(u, 1e-10), unitary_path + ": matrix is not unitary");
  const auto inputs = parse_sites(input_arg);
  const int n = static_cast<int>(inputs.size());
  const int m = static_cast<int>(u.rows());
  const ModelSpec spec = parse_model(model_arg, n);
  check_distinct_inputs_for(spec, inputs);
  const int k = k_arg == "auto" ? bunching::optimal_k(m, n) : std::stoi(k_arg);
  require(k >= 1 && k <= m, "need 1 <= k <= m");
  const auto mix = model_mixture(spec, n);
  const auto value = bunching::average_generalized_bunching(u, inputs, k, mix);
  const auto bosonic =
      bunching::average_generalized_bunching(u, inputs, k, hidden_dof::PartitionMixture::bosonic(n));
  const auto dist = bunching::average_generalized_bunching(
      u, inputs, k, hidden_dof::PartitionMixture::plancherel(n));
  const double floor = bunching::bunching_ratio(m, k, n);
  json out{{"schema_version", 1},
           {"k", k},
           {"b_k", value.value},
           {"fermionic_floor", floor},
           {"bosonic_value", bosonic.value},
           {"distinguishable_value", dist.value},
           {"k_below_n", value.k_below_n}};
  if (bosonic.value < dist.value - 1e-9) {
    out["dominance_violation"] = true;
    std::cerr << "note: bosonic averaged bunching fell below the distinguishable value; "
                 "this would be a reportable counterexample\n";
  }
  emit_json(out, out_path);
  return 0;
}

int cmd_error_bound(double n, double sigma, double bandwidth, double t, bool angular,
                    const std::string& n_grid_arg, const std::string& out_path) {
  const double w = angular ? bandwidth * 2.0 * M_PI : bandwidth;
  if (!n_grid_arg.empty()) {
    const Grid grid = parse_grid(n_grid_arg);
    io::CsvWriter csv(out_path.empty() ? "-" : out_path, {"n", "fidelity_lower_bound"});
    for (int step = 0; step < grid.steps; ++step) {
      const double nv =
          grid.steps == 1 ? grid.lo
                          : grid.lo + (grid.hi - grid.lo) * step / (grid.steps - 1);
      csv.row({io::CsvWriter::num(nv),
               io::CsvWriter::num(error_model::fidelity_lower_bound(nv, sigma, w, t))});
    }
    return 0;
  }
  emit_json(json{{"schema_version", 1},
                 {"n", n},
                 {"sigma_s", sigma},
                 {"bandwidth", w},
                 {"angular_input", angular},
                 {"t", t},
                 {"fidelity_lower_bound", error_model::fidelity_lower_bound(n, sigma, w, t)}},
            out_path);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"linear-optical statistics with partially distinguishable particles"};
  app.require_subcommand(1);
  app.add_option("--threads", g_threads, "cap on worker threads")->check(CLI::PositiveNumber);

  std::string unitary, input_arg, model_arg = "bosonic", restrict_arg, out_path;
  bool force = false;
  long long shots = 0;
  std::uint64_t seed = 0;

  auto* simulate = app.add_subcommand("simulate", "exact outcome table as CSV");
  simulate->add_option("--unitary", unitary)->required();
  simulate->add_option("--input", input_arg, "comma-separated input sites")->required();
  simulate->add_option("--model", model_arg, "bosonic|distinguishable|thermal:x|mixture:file");
  simulate->add_option("--restrict", restrict_arg, "output subset sites");
  simulate->add_flag("--force", force, "override the particle-number cap");
  simulate->add_option("--out", out_path);

  auto* sample = app.add_subcommand("sample", "multinomial counts dataset from a model");
  sample->add_option("--unitary", unitary)->required();
  sample->add_option("--input", input_arg)->required();
  sample->add_option("--model", model_arg);
  sample->add_option("--restrict", restrict_arg);
  sample->add_flag("--force", force);
  sample->add_option("--shots", shots)->required();
  sample->add_option("--seed", seed)->required();
  sample->add_option("--out", out_path)->required();

  std::vector<std::string> singles_paths;
  std::string pairs_path, s1_arg, s2_arg;
  double tau_value = -1.0;
  int bootstrap = 0;
  auto* hom = app.add_subcommand("hom-estimate", "indistinguishability from HOM count data");
  hom->add_option("--singles", singles_paths, "the two single-particle datasets")
      ->required()
      ->expected(2);
  hom->add_option("--pairs", pairs_path, "two-particle dataset")->required();
  hom->add_option("--tau", tau_value, "calibrated tau (omit for the lower bound only)");
  hom->add_option("--bootstrap", bootstrap, "number of bootstrap replicates");
  hom->add_option("--seed", seed);
  hom->add_option("--s1", s1_arg, "first coincidence subset");
  hom->add_option("--s2", s2_arg, "second coincidence subset");
  hom->add_option("--out", out_path);

  int weights_n = 2;
  std::string grid_arg;
  auto* weights = app.add_subcommand("partition-weights", "thermal partition weights as CSV");
  weights->add_option("--n", weights_n)->required()->check(CLI::Range(1, 10));
  weights->add_option("--x-grid", grid_arg, "lo:hi:steps inside [0,1)")->required();
  weights->add_option("--out", out_path);

  std::string jacobians_path, boson_spec_path, reference_path, costs_path;
  auto* design_cmd = app.add_subcommand("design", "A-optimal experiment design");
  design_cmd->add_option("--jacobians", jacobians_path, "explicit jacobians JSON");
  design_cmd->add_option("--boson-spec", boson_spec_path, "restricted thermal model spec");
  design_cmd->add_option("--reference", reference_path, "calibration unitary JSON");
  design_cmd->add_option("--costs", costs_path, "variance cost weights JSON");
  design_cmd->add_option("--shots", shots, "total shot budget")->required();
  design_cmd->add_option("--out", out_path);

  std::string data_path, init_path, tvd_hist_path;
  double indist = 1.0;
  bool strict = false;
  auto* fit = app.add_subcommand("fit", "maximum-likelihood unitary submatrix fit");
  fit->add_option("--data", data_path)->required();
  fit->add_option("--init", init_path, "initial submatrix JSON")->required();
  fit->add_option("--indist", indist, "calibrated indistinguishability")->required();
  fit->add_option("--bootstrap", bootstrap);
  fit->add_option("--seed", seed);
  fit->add_flag("--strict", strict, "nonzero exit on non-convergence");
  fit->add_option("--tvd-hist", tvd_hist_path, "bootstrap max-TVD histogram CSV");
  fit->add_option("--out", out_path);

  std::string k_arg = "auto";
  auto* bunch = app.add_subcommand("bunching", "averaged generalized bunching values");
  bunch->add_option("--unitary", unitary)->required();
  bunch->add_option("--input", input_arg)->required();
  bunch->add_option("--model", model_arg);
  bunch->add_option("--k", k_arg, "subset size or 'auto'");
  bunch->add_option("--out", out_path);

  double err_n = 1.0, err_sigma = 0.0, err_w = 0.0, err_t = 0.0;
  bool angular = false;
  std::string n_grid_arg;
  auto* err = app.add_subcommand("error-bound", "laser-fluctuation fidelity lower bound");
  err->add_option("--n", err_n, "particle number");
  err->add_option("--sigma", err_sigma)->required();
  err->add_option("--bandwidth", err_w)->required();
  err->add_option("--t", err_t)->required();
  err->add_flag("--angular", angular, "interpret the bandwidth as ordinary frequency x 2pi");
  err->add_option("--n-grid", n_grid_arg, "emit a CSV over an n grid (lo:hi:steps)");
  err->add_option("--out", out_path);

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed())
      return cmd_simulate(unitary, input_arg, model_arg, restrict_arg, force, out_path);
    if (sample->parsed())
      return cmd_sample(unitary, input_arg, model_arg, restrict_arg, force, shots, seed,
                        out_path);
    if (hom->parsed())
      return cmd_hom_estimate(singles_paths[0], singles_paths[1], pairs_path,
                              tau_value >= 0.0 ? std::optional<double>(tau_value) : std::nullopt,
                              bootstrap, seed, s1_arg, s2_arg, out_path);
    if (weights->parsed()) return cmd_partition_weights(weights_n, grid_arg, out_path);
    if (design_cmd->parsed())
      return cmd_design(jacobians_path, boson_spec_path, reference_path, costs_path, shots,
                        out_path);
    if (fit->parsed())
      return cmd_fit(data_path, init_path, indist, bootstrap, seed, strict, tvd_hist_path,
                     out_path);
    if (bunch->parsed()) return cmd_bunching(unitary, input_arg, model_arg, k_arg, out_path);
    if (err->parsed())
      return cmd_error_bound(err_n, err_sigma, err_w, err_t, angular, n_grid_arg, out_path);
  } catch (const size_limit_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  } catch (const numerical_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const invalid_input& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
