#include "bosonstat/io.hpp"

#include <cstdio>
#include <fstream>

#include "doctest.h"
#include "helpers.hpp"

using namespace bosonstat;
using namespace bosonstat::io;

namespace {
struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name) : path("io_test_" + name) {}
  ~TempFile() { std::remove(path.c_str()); }
};
}  // namespace

TEST_CASE("matrix JSON round trip and unitarity validation") {
  Rng rng(3);
  const MatrixXcd u = testutil::random_unitary(rng, 4);
  TempFile f("matrix.json");
  write_matrix_json(f.path, u, true);
  const MatrixXcd back = read_matrix_json(f.path);
  CHECK((back - u).cwiseAbs().maxCoeff() <= 1e-15);

  // a non-unitary matrix flagged unitary is rejected
  MatrixXcd bad = u;
  bad(0, 0) += 0.1;
  TempFile g("bad.json");
  write_matrix_json(g.path, bad, false);
  CHECK_NOTHROW(read_matrix_json(g.path));
  std::ofstream out(g.path);
  out << R"({"schema_version":1,"dim_rows":1,"dim_cols":1,"unitary":true,)"
      << R"("entries":[[[2.0,0.0]]]})";
  out.close();
  CHECK_THROWS_AS(read_matrix_json(g.path), invalid_input);
}

TEST_CASE("counts dataset round trip with all label kinds") {
  CountsDataset ds;
  ds.modes = 6;
  ds.input_sites = {2, 5};
  ds.output_sites = {1, 3, 4};
  SettingCounts s1;
  s1.prepared_sites = {2};
  s1.outcomes = {{OutcomeCount::Kind::sites, {1}, 40},
                 {OutcomeCount::Kind::sites, {3}, 25},
                 {OutcomeCount::Kind::other, {}, 20},
                 {OutcomeCount::Kind::empty, {}, 15}};
  SettingCounts s2;
  s2.prepared_sites = {2, 5};
  s2.outcomes = {{OutcomeCount::Kind::sites, {1, 4}, 30},
                 {OutcomeCount::Kind::sites, {3}, 10},
                 {OutcomeCount::Kind::other, {}, 60}};
  ds.settings = {s1, s2};
  TempFile f("counts.json");
  write_counts_json(f.path, ds);
  const CountsDataset back = read_counts_json(f.path);
  CHECK(back.modes == 6);
  CHECK(back.input_sites == ds.input_sites);
  CHECK(back.output_sites == ds.output_sites);
  REQUIRE(back.settings.size() == 2);
  CHECK(back.settings[0].count_of(OutcomeCount::Kind::sites, {1}) == 40);
  CHECK(back.settings[0].count_of(OutcomeCount::Kind::empty) == 15);
  CHECK(back.settings[1].count_of(OutcomeCount::Kind::sites, {1, 4}) == 30);
  CHECK(back.settings[1].total() == 100);
}

TEST_CASE("dataset converts to slot-indexed restricted counts and back") {
  CountsDataset ds;
  ds.modes = 6;
  ds.input_sites = {2, 5};
  ds.output_sites = {1, 3, 4};
  SettingCounts s;
  s.prepared_sites = {5, 2};
  s.outcomes = {{OutcomeCount::Kind::sites, {1, 3}, 7},
                {OutcomeCount::Kind::sites, {4}, 3},
                {OutcomeCount::Kind::other, {}, 5}};
  ds.settings = {s};
  const auto restricted = to_restricted_counts(ds);
  REQUIRE(restricted.size() == 1);
  CHECK(restricted[0].inputs == std::vector<int>{2, 1});
  const auto space = design::outcome_space(3, 2);
  long long total = 0;
  for (std::size_t o = 0; o < space.size(); ++o) {
    total += restricted[0].counts[o];
    if (space[o].kind == design::OutcomeLabel::Kind::sites &&
        space[o].slots == std::vector<int>{1, 2})
      CHECK(restricted[0].counts[o] == 7);  // sites {1,3} -> slots {1,2}
  }
  CHECK(total == 15);

  const CountsDataset rebuilt =
      from_restricted_counts(restricted, ds.modes, ds.input_sites, ds.output_sites);
  CHECK(rebuilt.settings[0].count_of(OutcomeCount::Kind::sites, {1, 3}) == 7);
  CHECK(rebuilt.settings[0].count_of(OutcomeCount::Kind::sites, {4}) == 3);
  CHECK(rebuilt.settings[0].count_of(OutcomeCount::Kind::other) == 5);
}

TEST_CASE("mixture JSON round trip validates normalization") {
  const auto mix = hidden_dof::thermal_partition_weights(0.4, 4);
  TempFile f("mixture.json");
  write_mixture_json(f.path, mix);
  const auto back = read_mixture_json(f.path);
  CHECK(back.n == 4);
  for (const auto& [lam, w] : mix.weights)
    CHECK(back.weight(lam) == doctest::Approx(w).epsilon(1e-14));

  std::ofstream out(f.path);
  out << R"({"schema_version":1,"n":2,"weights":[{"partition":[2],"p":0.8}]})";
  out.close();
  CHECK_THROWS_AS(read_mixture_json(f.path), invalid_input);
}

TEST_CASE("CSV writer emits the schema comment and classic-locale numbers") {
  TempFile f("table.csv");
  {
    CsvWriter csv(f.path, {"x", "value"});
    csv.row({CsvWriter::num(0.5), CsvWriter::num(1.25e-3)});
  }
  std::ifstream in(f.path);
  std::string line;
  std::getline(in, line);
  CHECK(line == "# schema-version: 1");
  std::getline(in, line);
  CHECK(line == "x,value");
  std::getline(in, line);
  CHECK(line == "0.5,0.00125");
}
