#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "occ/errors.hpp"
#include "occ/experiment.hpp"
#include "occ/serialize.hpp"

using namespace occ;

namespace {

const char* kMixedConfig = R"({
  "law": {"family": "Mixed", "atomMass": 0.8, "inner": {"family": "ZipfLike", "gamma": 0.5}},
  "seed": 4711,
  "replicas": 6,
  "checkpoints": [1000, 5000],
  "ratios": [
    {"name": "RnOverN"},
    {"name": "Rn1OverN"},
    {"name": "RkOverTailK", "k": [2, 3]}
  ],
  "tolerances": {"band": 0.25, "zeroCeiling": 0.15, "trendSlack": 0.01}
})";

} // namespace

TEST_CASE("config parsing accepts the documented schema") {
  auto config = config_from_json_text(kMixedConfig);
  CHECK(config.seed == 4711);
  CHECK(config.replicas == 6);
  CHECK(config.checkpoints == std::vector<std::uint64_t>{1000, 5000});
  CHECK(config.ratios.size() == 4); // k list expanded
  CHECK(config.tolerances.band == 0.25);
  CHECK(config.law.family() == LawFamily::Mixed);
}

TEST_CASE("config parsing rejects malformed documents") {
  CHECK_THROWS_AS(config_from_json_text("not json"), ConfigError);
  CHECK_THROWS_AS(config_from_json_text("{}"), ConfigError);
  CHECK_THROWS_AS(config_from_json_text(R"({
    "law": {"family": "PureDiffuse"}, "checkpoints": [100, 50],
    "ratios": [{"name": "RnOverN"}]})"),
                  ConfigError);
  CHECK_THROWS_AS(config_from_json_text(R"({
    "law": {"family": "PureDiffuse"}, "checkpoints": [100],
    "ratios": [{"name": "Bogus"}]})"),
                  ConfigError);
  // ratio undefined for the law's regime
  CHECK_THROWS_AS(config_from_json_text(R"({
    "law": {"family": "PureDiffuse"}, "checkpoints": [100],
    "ratios": [{"name": "RkOverTail2", "k": [2]}]})"),
                  UnsupportedRatio);
}

TEST_CASE("pure diffuse experiment is exact") {
  ExperimentConfig config;
  config.law = RegularLaw::pure_diffuse();
  config.seed = 1;
  config.replicas = 3;
  config.checkpoints = {10, 100};
  config.ratios = {{RatioKind::RnOverN, 1, std::nullopt, std::nullopt}};
  auto report = run_experiment(config);
  CHECK(report.all_pass);
  for (const auto& cell : report.cells) {
    CHECK(cell.mean == 1.0);
    CHECK(cell.stddev == 0.0);
    CHECK(cell.predicted == 1.0);
    CHECK(cell.pass);
  }
  for (const auto& row : report.range_oracle) {
    CHECK(row.mean_range == doctest::Approx(static_cast<double>(row.checkpoint)));
    CHECK(row.pass);
  }
}

TEST_CASE("report rows cover every replica, checkpoint and ratio") {
  auto config = config_from_json_text(kMixedConfig);
  auto report = run_experiment(config);
  CHECK(report.replica_rows.size() == 6u * 2u * 4u);
  CHECK(report.cells.size() == 2u * 4u);
  CHECK(report.range_oracle.size() == 2u);
  // replica-major, deterministic ordering
  CHECK(report.replica_rows.front().replica == 0);
  CHECK(report.replica_rows.back().replica == 5);
}

TEST_CASE("reports are byte-identical across runs and thread counts") {
  auto config = config_from_json_text(kMixedConfig);
  auto a = run_experiment(config);
  auto b = run_experiment(config);
  CHECK(report_to_json_text(a) == report_to_json_text(b));
  CHECK(report_to_csv_text(a) == report_to_csv_text(b));

  setenv("RR_THREADS", "1", 1);
  auto serial = run_experiment(config);
  setenv("RR_THREADS", "4", 1);
  auto parallel = run_experiment(config);
  unsetenv("RR_THREADS");
  CHECK(report_to_json_text(serial) == report_to_json_text(parallel));
  CHECK(report_to_csv_text(serial) == report_to_csv_text(parallel));
  CHECK(report_to_json_text(serial) == report_to_json_text(a));
}

TEST_CASE("csv schema") {
  auto config = config_from_json_text(kMixedConfig);
  auto report = run_experiment(config);
  std::string csv = report_to_csv_text(report);
  std::istringstream lines(csv);
  std::string header;
  std::getline(lines, header);
  CHECK(header == "run_id,seed,n,ratio,k,observed,predicted,gap");
  std::string first;
  std::getline(lines, first);
  CHECK(first.substr(0, 2) == "0,");
  CHECK(first.find("RnOverN") != std::string::npos);
}

TEST_CASE("zero limits use the trend rule") {
  ExperimentConfig config;
  config.law = RegularLaw::geometric(0.5);
  config.seed = 33;
  config.replicas = 8;
  config.checkpoints = {2000, 20000};
  config.ratios = {{RatioKind::RkOverTailK, 2, std::nullopt, std::nullopt}};
  config.tolerances.zero_ceiling = 0.30;
  auto report = run_experiment(config);
  for (const auto& cell : report.cells) {
    CHECK(cell.zero_limit);
    CHECK(cell.predicted == 0.0);
  }
  CHECK(report.all_pass);
}

TEST_CASE("report files are written and bad paths raise IoError") {
  auto config = config_from_json_text(kMixedConfig);
  config.replicas = 2;
  config.checkpoints = {50};
  std::string dir = "occ_test_out";
  std::remove((dir + "/r.json").c_str());
  config.json_out = "occ_report_tmp.json";
  config.csv_out = "occ_report_tmp.csv";
  auto report = run_experiment(config);
  write_report_files(report);
  std::ifstream in(config.json_out);
  CHECK(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  CHECK(buf.str() == report_to_json_text(report));
  std::remove("occ_report_tmp.json");
  std::remove("occ_report_tmp.csv");

  config.json_out = "/nonexistent_dir_zz/x.json";
  auto r2 = run_experiment(config);
  CHECK_THROWS_AS(write_report_files(r2), IoError);
}

TEST_CASE("experiment enforces single-pass draw counting") {
  // the draw counter equals the last checkpoint after a run; indirectly
  // visible through the documented error being absent on a healthy law
  ExperimentConfig config;
  config.law = RegularLaw::finite_uniform(3);
  config.replicas = 1;
  config.checkpoints = {1, 7, 19};
  config.ratios = {{RatioKind::RnOverN, 1, std::nullopt, std::nullopt}};
  config.tolerances.band = 1.0;
  CHECK_NOTHROW(run_experiment(config));
}
