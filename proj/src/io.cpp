#include "bosonstat/io.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <locale>
#include <sstream>

#include "json.hpp"

namespace bosonstat::io {

using nlohmann::json;

namespace {

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw invalid_input("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw invalid_input(path + ": " + e.what());
  }
  return j;
}

void save_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw invalid_input("cannot write " + path);
  out << j.dump(2) << '\n';
}

}  // namespace

MatrixXcd read_matrix_json(const std::string& path) {
  const json j = load_json(path);
  require(j.contains("dim_rows") && j.contains("dim_cols") && j.contains("entries"),
          path + ": matrix JSON needs dim_rows, dim_cols, entries");
  const int rows = j["dim_rows"].get<int>(), cols = j["dim_cols"].get<int>();
  require(rows >= 1 && cols >= 1, path + ": bad dimensions");
  const auto& entries = j["entries"];
  require(entries.is_array() && static_cast<int>(entries.size()) == rows,
          path + ": entries must have dim_rows rows");
  MatrixXcd m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    const auto& row = entries[r];
    require(row.is_array() && static_cast<int>(row.size()) == cols,
            path + ": row of wrong length");
    for (int c = 0; c < cols; ++c) {
      const auto& e = row[c];
      require(e.is_array() && e.size() == 2, path + ": entries are [re, im] pairs");
      m(r, c) = complexd(e[0].get<double>(), e[1].get<double>());
    }
  }
  if (j.value("unitary", false))
    require(linopt::is_unitary(m, 1e-10), path + ": matrix flagged unitary but is not");
  return m;
}

void write_matrix_json(const std::string& path, const MatrixXcd& m, bool unitary_flag) {
  json entries = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      row.push_back({m(r, c).real(), m(r, c).imag()});
    entries.push_back(std::move(row));
  }
  save_json(path, json{{"schema_version", 1},
                       {"dim_rows", m.rows()},
                       {"dim_cols", m.cols()},
                       {"unitary", unitary_flag},
                       {"entries", std::move(entries)}});
}

long long SettingCounts::total() const {
  long long t = 0;
  for (const auto& o : outcomes) t += o.count;
  return t;
}

long long SettingCounts::count_of(OutcomeCount::Kind kind, const std::vector<int>& sites) const {
  for (const auto& o : outcomes)
    if (o.kind == kind && (kind != OutcomeCount::Kind::sites || o.sites == sites))
      return o.count;
  return 0;
}

void CountsDataset::validate() const {
  require(modes >= 1, "counts dataset: modes must be positive");
  auto check_sites = [&](const std::vector<int>& sites) {
    for (int s : sites) require(s >= 1 && s <= modes, "counts dataset: site index out of range");
  };
  check_sites(input_sites);
  check_sites(output_sites);
  for (const auto& setting : settings) {
    check_sites(setting.prepared_sites);
    for (const auto& o : setting.outcomes) {
      check_sites(o.sites);
      require(o.count >= 0, "counts dataset: counts must be nonnegative");
    }
  }
}

namespace {
int label_kind_rank(OutcomeCount::Kind k) { return static_cast<int>(k); }
}  // namespace

CountsDataset read_counts_json(const std::string& path) {
  const json j = load_json(path);
  CountsDataset ds;
  require(j.contains("modes") && j.contains("settings"),
          path + ": counts JSON needs modes and settings");
  ds.modes = j["modes"].get<int>();
  if (j.contains("input_sites")) ds.input_sites = j["input_sites"].get<std::vector<int>>();
  if (j.contains("output_sites")) ds.output_sites = j["output_sites"].get<std::vector<int>>();
  for (const auto& s : j["settings"]) {
    SettingCounts sc;
    sc.prepared_sites = s.at("prepared_sites").get<std::vector<int>>();
    for (const auto& oc : s.at("outcomes")) {
      OutcomeCount o;
      const auto& label = oc.at("label");
      if (label.contains("sites")) {
        o.kind = OutcomeCount::Kind::sites;
        o.sites = label["sites"].get<std::vector<int>>();
        std::sort(o.sites.begin(), o.sites.end());
      } else if (label.contains("empty")) {
        o.kind = OutcomeCount::Kind::empty;
      } else if (label.contains("other")) {
        o.kind = OutcomeCount::Kind::other;
      } else {
        throw invalid_input(path + ": outcome label must be sites/empty/other");
      }
      o.count = oc.at("count").get<long long>();
      require(o.count >= 0, path + ": counts must be nonnegative");
      sc.outcomes.push_back(std::move(o));
    }
    // labels unique within a setting
    auto key = [](const OutcomeCount& o) { return std::make_pair(label_kind_rank(o.kind), o.sites); };
    for (std::size_t a = 0; a < sc.outcomes.size(); ++a)
      for (std::size_t b = a + 1; b < sc.outcomes.size(); ++b)
        require(key(sc.outcomes[a]) != key(sc.outcomes[b]),
                path + ": duplicate outcome label in a setting");
    ds.settings.push_back(std::move(sc));
  }
  ds.validate();
  return ds;
}

void write_counts_json(const std::string& path, const CountsDataset& dataset) {
  dataset.validate();
  json settings = json::array();
  for (const auto& s : dataset.settings) {
    json outcomes = json::array();
    for (const auto& o : s.outcomes) {
      json label;
      switch (o.kind) {
        case OutcomeCount::Kind::sites:
          label = json{{"sites", o.sites}};
          break;
        case OutcomeCount::Kind::empty:
          label = json{{"empty", true}};
          break;
        case OutcomeCount::Kind::other:
          label = json{{"other", true}};
          break;
      }
      outcomes.push_back(json{{"label", std::move(label)}, {"count", o.count}});
    }
    settings.push_back(
        json{{"prepared_sites", s.prepared_sites}, {"outcomes", std::move(outcomes)}});
  }
  json j{{"schema_version", 1}, {"modes", dataset.modes}, {"settings", std::move(settings)}};
  if (!dataset.input_sites.empty()) j["input_sites"] = dataset.input_sites;
  if (!dataset.output_sites.empty()) j["output_sites"] = dataset.output_sites;
  save_json(path, j);
}

std::vector<design::RestrictedCounts> to_restricted_counts(const CountsDataset& dataset) {
  dataset.validate();
  require(!dataset.input_sites.empty() && !dataset.output_sites.empty(),
          "to_restricted_counts: dataset must declare input_sites and output_sites");
  auto slot_of = [](const std::vector<int>& sites, int site) {
    const auto it = std::find(sites.begin(), sites.end(), site);
    require(it != sites.end(), "to_restricted_counts: site not in the declared set");
    return static_cast<int>(it - sites.begin()) + 1;
  };
  const int n_out = static_cast<int>(dataset.output_sites.size());
  std::vector<design::RestrictedCounts> out;
  for (const auto& s : dataset.settings) {
    design::RestrictedCounts rc;
    for (int site : s.prepared_sites) rc.inputs.push_back(slot_of(dataset.input_sites, site));
    const auto space = design::outcome_space(n_out, static_cast<int>(rc.inputs.size()));
    rc.counts.assign(space.size(), 0);
    for (const auto& o : s.outcomes) {
      design::OutcomeLabel lbl;
      switch (o.kind) {
        case OutcomeCount::Kind::sites: {
          lbl.kind = design::OutcomeLabel::Kind::sites;
          for (int site : o.sites) lbl.slots.push_back(slot_of(dataset.output_sites, site));
          std::sort(lbl.slots.begin(), lbl.slots.end());
          break;
        }
        case OutcomeCount::Kind::empty:
          lbl.kind = design::OutcomeLabel::Kind::empty;
          break;
        case OutcomeCount::Kind::other:
          lbl.kind = design::OutcomeLabel::Kind::other;
          break;
      }
      const auto it = std::find(space.begin(), space.end(), lbl);
      require(it != space.end(), "to_restricted_counts: outcome label outside the model space");
      rc.counts[static_cast<std::size_t>(it - space.begin())] += o.count;
    }
    out.push_back(std::move(rc));
  }
  return out;
}

CountsDataset from_restricted_counts(const std::vector<design::RestrictedCounts>& data,
                                     int modes, const std::vector<int>& input_sites,
                                     const std::vector<int>& output_sites) {
  CountsDataset ds;
  ds.modes = modes;
  ds.input_sites = input_sites;
  ds.output_sites = output_sites;
  for (const auto& rc : data) {
    SettingCounts sc;
    for (int slot : rc.inputs) {
      require(slot >= 1 && slot <= static_cast<int>(input_sites.size()),
              "from_restricted_counts: input slot out of range");
      sc.prepared_sites.push_back(input_sites[static_cast<std::size_t>(slot - 1)]);
    }
    const auto space = design::outcome_space(static_cast<int>(output_sites.size()),
                                             static_cast<int>(rc.inputs.size()));
    require(space.size() == rc.counts.size(), "from_restricted_counts: misaligned counts");
    for (std::size_t o = 0; o < space.size(); ++o) {
      OutcomeCount oc;
      oc.count = rc.counts[o];
      switch (space[o].kind) {
        case design::OutcomeLabel::Kind::sites: {
          oc.kind = OutcomeCount::Kind::sites;
          for (int slot : space[o].slots)
            oc.sites.push_back(output_sites[static_cast<std::size_t>(slot - 1)]);
          std::sort(oc.sites.begin(), oc.sites.end());
          break;
        }
        case design::OutcomeLabel::Kind::empty:
          oc.kind = OutcomeCount::Kind::empty;
          break;
        case design::OutcomeLabel::Kind::other:
          oc.kind = OutcomeCount::Kind::other;
          break;
      }
      sc.outcomes.push_back(std::move(oc));
    }
    ds.settings.push_back(std::move(sc));
  }
  ds.validate();
  return ds;
}

hidden_dof::PartitionMixture read_mixture_json(const std::string& path) {
  const json j = load_json(path);
  require(j.contains("n") && j.contains("weights"), path + ": mixture JSON needs n and weights");
  hidden_dof::PartitionMixture mix;
  mix.n = j["n"].get<int>();
  for (const auto& w : j["weights"]) {
    const symrep::Partition lambda(w.at("partition").get<std::vector<int>>());
    mix.weights[lambda] = w.at("p").get<double>();
  }
  mix.validate(1e-8);
  return mix;
}

void write_mixture_json(const std::string& path, const hidden_dof::PartitionMixture& mix) {
  json weights = json::array();
  for (const auto& [lambda, p] : mix.weights)
    weights.push_back(json{{"partition", lambda.parts()}, {"p", p}});
  save_json(path, json{{"schema_version", 1}, {"n", mix.n}, {"weights", std::move(weights)}});
}

struct CsvWriter::Impl {
  std::ofstream file;
  std::ostream* out = nullptr;
};

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& columns)
    : impl_(new Impl) {
  if (path == "-") {
    impl_->out = &std::cout;
  } else {
    impl_->file.open(path);
    if (!impl_->file) {
      delete impl_;
      throw invalid_input("cannot write " + path);
    }
    impl_->out = &impl_->file;
  }
  *impl_->out << "# schema-version: 1\n";
  for (std::size_t c = 0; c < columns.size(); ++c)
    *impl_->out << columns[c] << (c + 1 < columns.size() ? "," : "");
  *impl_->out << '\n';
}

CsvWriter::~CsvWriter() { delete impl_; }

void CsvWriter::row(const std::vector<std::string>& cells) {
  for (std::size_t c = 0; c < cells.size(); ++c)
    *impl_->out << cells[c] << (c + 1 < cells.size() ? "," : "");
  *impl_->out << '\n';
}

std::string CsvWriter::num(double v) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace bosonstat::io
