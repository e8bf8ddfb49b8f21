#ifndef OCC_EXPERIMENT_HPP
#define OCC_EXPERIMENT_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "occ/errors.hpp"
#include "occ/law.hpp"
#include "occ/limits.hpp"

namespace occ {

struct RatioRequest {
  RatioKind kind;
  std::uint64_t k = 1;
  std::optional<double> band;    // per-ratio override of the two-sided band
  std::optional<double> ceiling; // per-ratio override of the zero-limit ceiling
};

struct Tolerances {
  double band = 0.05;        // two-sided band around a positive limit
  double zero_ceiling = 0.15; // final-checkpoint ceiling for zero limits
  double trend_slack = 0.01; // allowed per-checkpoint increase for zero limits
};

struct ExperimentConfig {
  RegularLaw law = RegularLaw::pure_diffuse();
  std::uint64_t seed = 1;
  std::uint32_t replicas = 1;
  std::vector<std::uint64_t> checkpoints; // strictly increasing
  std::vector<RatioRequest> ratios;
  Tolerances tolerances;
  std::string json_out; // empty = no file
  std::string csv_out;
};

/// Parse a config document; throws ConfigError on malformed input and
/// validates every tracked ratio against the law's regime.
ExperimentConfig config_from_json_text(const std::string& text);
ExperimentConfig config_from_file(const std::string& path);

struct CellStat {
  std::uint64_t checkpoint;
  RatioKind kind;
  std::uint64_t k;
  double mean;
  double stddev;
  double predicted;
  bool zero_limit;
  double gap;
  bool pass;
  std::uint32_t valid_replicas;
};

struct OracleStat {
  std::uint64_t checkpoint;
  double mean_range;
  double stddev;
  double expected;
  double expected_error;
  double gap;
  double tolerance;
  bool pass;
};

struct ReplicaRow {
  std::uint32_t replica;
  std::uint64_t seed;
  std::uint64_t checkpoint;
  RatioKind kind;
  std::uint64_t k;
  double observed;
  double predicted;
};

struct ConvergenceReport {
  ExperimentConfig config;
  std::vector<CellStat> cells;
  std::vector<OracleStat> range_oracle;
  std::vector<ReplicaRow> replica_rows;
  bool all_pass = false;
};

/// Run the configured experiment: each replica streams once to the last
/// checkpoint (single pass, snapshots on the way), ratios are aggregated
/// across replicas in replica order, and every cell is judged against its
/// predicted limit: a two-sided band for positive limits, the
/// non-increasing-trend-plus-ceiling rule for zero limits. The empirical
/// mean range is checked against the exact expectation at every checkpoint
/// (within 4 standard errors plus the oracle's own error bound).
///
/// Replicas run on min(RR_THREADS, hardware) threads; the report bytes do
/// not depend on the thread count.
ConvergenceReport run_experiment(const ExperimentConfig& config);

std::string report_to_json_text(const ConvergenceReport& report);
std::string report_to_csv_text(const ConvergenceReport& report);

/// Write the report to the paths configured (if any). Throws IoError.
void write_report_files(const ConvergenceReport& report);

class IoError : public Error {
public:
  explicit IoError(const std::string& what) : Error(what) {}
};

} // namespace occ

#endif
