#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "ritzbound/experiments.hpp"

using namespace ritzbound;

namespace {

std::string csv_of(const ExperimentResult &r) {
  std::ostringstream out;
  emit_csv(r, out);
  return out.str();
}

std::size_t line_count(const std::string &s) {
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

std::string header_line(Family f) {
  std::string out;
  for (const std::string &c : csv_header(f)) {
    out += (out.empty() ? "" : ",") + c;
  }
  return out + "\n";
}

ExperimentConfig small(Scenario s) {
  ExperimentConfig c = default_config(s);
  if (family_of(s) == Family::symmetric) {
    c.n = 90;
    c.k = 9;
    c.keep = s == Scenario::eig_lanczos ? 5 : 9;
    c.iters = 20;
    if (s == Scenario::eig_cluster) {
      c.n = 60;
      c.k = 15;
      c.keep = 15;
    }
  } else if (family_of(s) == Family::svd) {
    c.m = 60;
    c.n = 30;
    c.k = 6;
    c.keep = 6;
    c.kappa = 1e8;
  }
  return c;
}

} // namespace

TEST_CASE("scenario names round trip") {
  for (Scenario s : {Scenario::eig_uniform, Scenario::eig_cluster, Scenario::eig_lanczos,
                     Scenario::svd_pg, Scenario::svd_hmt, Scenario::svd_pg_vs_hmt,
                     Scenario::sharpness}) {
    CHECK(parse_scenario(to_string(s)) == s);
    CHECK_NOTHROW(validate(default_config(s)));
  }
  CHECK_FALSE(parse_scenario("nope"));
  CHECK(parse_gap_selection("both") == GapSelection::both);
  CHECK(parse_eig_method("lobpcg") == EigMethod::lobpcg);
}

TEST_CASE("full-size presets") {
  const ExperimentConfig u = default_config(Scenario::eig_uniform, Scale::full);
  CHECK(u.n == 2000);
  CHECK(u.k == 100);
  CHECK(u.iters == 40);
  CHECK(u.method == EigMethod::lobpcg);
  const ExperimentConfig l = default_config(Scenario::eig_lanczos, Scale::full);
  CHECK(l.k == 400);
  CHECK(l.keep == 20);
  const ExperimentConfig s = default_config(Scenario::svd_pg, Scale::full);
  CHECK(s.m == 5000);
  CHECK(s.n == 1000);
  CHECK(s.k == 200);
  CHECK(s.kappa == 1e20);
}

TEST_CASE("validation rejects inconsistent configurations") {
  ExperimentConfig c = default_config(Scenario::eig_uniform);
  c.k = 500;
  try {
    validate(c);
    FAIL("expected ConfigError");
  } catch (const ConfigError &e) {
    CHECK(std::string(e.what()) == "k must not exceed n");
  }
  c = default_config(Scenario::eig_uniform);
  c.keep = 40;
  CHECK_THROWS_AS(validate(c), ConfigError);
  c = default_config(Scenario::eig_uniform);
  c.method = EigMethod::lobpcg;
  c.k = 150;
  c.keep = 150;
  CHECK_THROWS_AS(validate(c), ConfigError);
  c = default_config(Scenario::svd_pg);
  c.power_passes = 3;
  CHECK_THROWS_AS(validate(c), ConfigError);
  c = default_config(Scenario::svd_pg);
  c.kappa = 0.5;
  CHECK_THROWS_AS(validate(c), ConfigError);
  c = default_config(Scenario::sharpness);
  c.gap_mode = GapSelection::approximate;
  CHECK_THROWS_AS(validate(c), ConfigError);
  c = default_config(Scenario::eig_cluster);
  c.n = 20;
  c.k = 10;
  c.keep = 10;
  CHECK_THROWS_AS(validate(c), ConfigError);
  CHECK_THROWS_AS(run_experiment(c), ConfigError);
}

TEST_CASE("empty results give a header-only CSV") {
  for (Family f : {Family::symmetric, Family::svd, Family::sharpness}) {
    ExperimentResult r;
    r.family = f;
    const std::string csv = csv_of(r);
    CHECK(csv == header_line(f));
    CHECK(line_count(csv) == 1);
  }
}

TEST_CASE("one row gives two lines") {
  ExperimentResult r;
  r.family = Family::symmetric;
  ExperimentRow row;
  row.variant = "a,\"b\"";
  row.theta = 1.5;
  row.residual_e = 0.25;
  row.bounds[BoundKind::thm_main] = BoundValue::of(0.125);
  row.bounds[BoundKind::weyl] = BoundValue::not_applicable();
  row.applicable = true;
  r.rows.push_back(row);
  const std::string csv = csv_of(r);
  CHECK(line_count(csv) == 2);
  const std::string second = csv.substr(csv.find('\n') + 1);
  CHECK(second.rfind("\"a,\"\"b\"\"\",1,1.5,,,0.25,,exact,0.125,", 0) == 0);
  CHECK(second.find("\r") == std::string::npos);
  CHECK(second.substr(second.size() - 5) == ",1,0\n");
}

TEST_CASE("number formatting") {
  CHECK(format_number(std::nullopt).empty());
  CHECK(format_number(0.1) == "0.10000000000000001");
  CHECK(format_number(3.0) == "3");
  CHECK(std::stod(format_number(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("small runs of every scenario") {
  for (Scenario s : {Scenario::eig_uniform, Scenario::eig_cluster, Scenario::eig_lanczos,
                     Scenario::svd_pg, Scenario::svd_hmt, Scenario::svd_pg_vs_hmt,
                     Scenario::sharpness}) {
    CAPTURE(to_string(s));
    const ExperimentConfig c = small(s);
    const ExperimentResult r = run_experiment(c);
    CHECK(r.family == family_of(s));
    CHECK_FALSE(r.rows.empty());
    CHECK(count_violations(r) == 0);
    const std::string csv = csv_of(r);
    CHECK(line_count(csv) == r.rows.size() + 1);
    CHECK(csv.rfind(header_line(r.family), 0) == 0);
    CHECK(csv_of(run_experiment(c)) == csv);
  }
}

TEST_CASE("gap selection controls the rows") {
  ExperimentConfig c = small(Scenario::eig_uniform);
  c.gap_mode = GapSelection::exact;
  const std::size_t exact_rows = run_experiment(c).rows.size();
  c.gap_mode = GapSelection::both;
  const ExperimentResult both = run_experiment(c);
  CHECK(both.rows.size() == 2 * exact_rows);
  for (const ExperimentRow &row : both.rows) {
    CHECK(row.exact_value.has_value());
    CHECK(row.below_roundoff == (*row.abs_error < roundoff_floor(both.norm_a)));
  }
}

TEST_CASE("different seeds give different output") {
  ExperimentConfig c = small(Scenario::svd_pg);
  const std::string a = csv_of(run_experiment(c));
  c.seed = 1;
  CHECK(csv_of(run_experiment(c)) != a);
}

TEST_CASE("metadata sidecar") {
  const ExperimentResult r = run_experiment(small(Scenario::eig_uniform));
  std::ostringstream out;
  emit_metadata(r, out);
  const std::string meta = out.str();
  for (const char *key : {"scenario=eig_uniform", "seed=0", "wall_time_s=", "soundness_slack=",
                          "unit_roundoff=", "soundness_violations=0", "rerandomized_columns="}) {
    CHECK(meta.find(key) != std::string::npos);
  }
}

TEST_CASE("file output") {
  const auto dir = std::filesystem::temp_directory_path() / "ritzbound_test_experiments";
  std::filesystem::create_directories(dir);
  const ExperimentResult r = run_experiment(small(Scenario::svd_hmt));
  const auto path = dir / "out.csv";
  emit_csv(r, path);
  std::ifstream in(path, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  CHECK(buf.str() == csv_of(r));

  const auto bad = dir / "missing" / "out.csv";
  try {
    emit_csv(r, bad);
    FAIL("expected a write failure");
  } catch (const Error &e) {
    CHECK(std::string(e.what()).find(bad.string()) != std::string::npos);
  }
  std::filesystem::remove_all(dir);
}
