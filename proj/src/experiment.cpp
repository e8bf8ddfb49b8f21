#include "occ/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "occ/counter.hpp"
#include "occ/expectation.hpp"
#include "occ/serialize.hpp"
#include "occ/stream.hpp"

namespace occ {

using nlohmann::json;

namespace {

unsigned worker_count(std::uint32_t replicas) {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("RR_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && v >= 1) hw = std::min<long>(v, 256);
  }
  return std::min<unsigned>(hw, std::max<std::uint32_t>(replicas, 1));
}

double ratio_value(const OccupancySpectrum& s, RatioKind kind, std::uint64_t k) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  double n = static_cast<double>(s.n());
  switch (kind) {
    case RatioKind::RnOverN:
      return n > 0 ? static_cast<double>(s.distinct()) / n : nan;
    case RatioKind::Rn1OverN:
      return n > 0 ? static_cast<double>(s.count_at(1)) / n : nan;
    case RatioKind::RkOverRn: {
      double d = static_cast<double>(s.distinct());
      return d > 0 ? static_cast<double>(s.count_at(k)) / d : nan;
    }
    case RatioKind::RkOverTail2: {
      double t = static_cast<double>(s.tail_count(2));
      return t > 0 ? static_cast<double>(s.count_at(k)) / t : nan;
    }
    case RatioKind::RkOverTailK: {
      double t = static_cast<double>(s.tail_count(k));
      return t > 0 ? static_cast<double>(s.count_at(k)) / t : nan;
    }
  }
  return nan;
}

void validate(const ExperimentConfig& config) {
  if (config.replicas < 1) throw ConfigError("config: replicas must be >= 1");
  if (config.checkpoints.empty())
    throw ConfigError("config: at least one checkpoint required");
  for (std::size_t i = 0; i < config.checkpoints.size(); ++i) {
    if (config.checkpoints[i] == 0)
      throw ConfigError("config: checkpoints must be positive");
    if (i > 0 && config.checkpoints[i] <= config.checkpoints[i - 1])
      throw ConfigError("config: checkpoints must be strictly increasing");
  }
  if (config.ratios.empty())
    throw ConfigError("config: at least one tracked ratio required");
  Regime regime = config.law.regime();
  for (const auto& r : config.ratios)
    predict(regime, r.kind, r.k); // throws if unsupported for this regime
}

struct ReplicaResult {
  std::uint64_t seed = 0;
  std::vector<double> ratios; // [checkpoint][ratio] flattened
  std::vector<double> range;  // R_n per checkpoint
};

ReplicaResult run_replica(const ExperimentConfig& config, std::uint32_t index) {
  ReplicaResult out;
  out.seed = seed_split(config.seed, index);
  SymbolStream stream(config.law, out.seed);
  OccupancyCounter counter;
  out.ratios.reserve(config.checkpoints.size() * config.ratios.size());
  out.range.reserve(config.checkpoints.size());
  for (std::uint64_t cp : config.checkpoints) {
    while (stream.position() < cp) counter.observe(stream.next());
    OccupancySpectrum spec = counter.spectrum();
    for (const auto& r : config.ratios)
      out.ratios.push_back(ratio_value(spec, r.kind, r.k));
    out.range.push_back(static_cast<double>(spec.distinct()));
  }
  // single-pass guarantee: each symbol of the stream was drawn exactly once
  if (stream.position() != config.checkpoints.back())
    throw Error("run_experiment: draw counter mismatch (" +
                std::to_string(stream.position()) + " draws for max checkpoint " +
                std::to_string(config.checkpoints.back()) + ")");
  return out;
}

} // namespace

ConvergenceReport run_experiment(const ExperimentConfig& config) {
  validate(config);
  const std::uint32_t R = config.replicas;

  std::vector<ReplicaResult> results(R);
  unsigned workers = worker_count(R);
  if (workers <= 1) {
    for (std::uint32_t r = 0; r < R; ++r) results[r] = run_replica(config, r);
  } else {
    std::vector<std::thread> pool;
    std::atomic<std::uint32_t> cursor{0};
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&]() {
        for (;;) {
          std::uint32_t r = cursor.fetch_add(1);
          if (r >= R) return;
          results[r] = run_replica(config, r);
        }
      });
    for (auto& t : pool) t.join();
  }

  ConvergenceReport report;
  report.config = config;
  const Regime regime = config.law.regime();
  const std::size_t n_ratios = config.ratios.size();

  // replica-major rows for the CSV
  for (std::uint32_t r = 0; r < R; ++r)
    for (std::size_t ci = 0; ci < config.checkpoints.size(); ++ci)
      for (std::size_t ri = 0; ri < n_ratios; ++ri) {
        const auto& req = config.ratios[ri];
        double predicted = predict(regime, req.kind, req.k).value;
        report.replica_rows.push_back({r, results[r].seed, config.checkpoints[ci],
                                       req.kind, req.k,
                                       results[r].ratios[ci * n_ratios + ri],
                                       predicted});
      }

  bool all_pass = true;

  // aggregate cells, checkpoint-major; zero limits use the trend rule
  std::vector<double> prev_mean(n_ratios, std::numeric_limits<double>::quiet_NaN());
  for (std::size_t ci = 0; ci < config.checkpoints.size(); ++ci) {
    const bool final_cp = ci + 1 == config.checkpoints.size();
    for (std::size_t ri = 0; ri < n_ratios; ++ri) {
      const auto& req = config.ratios[ri];
      double predicted = predict(regime, req.kind, req.k).value;
      double sum = 0;
      std::uint32_t valid = 0;
      for (std::uint32_t r = 0; r < R; ++r) {
        double v = results[r].ratios[ci * n_ratios + ri];
        if (!std::isnan(v)) {
          sum += v;
          ++valid;
        }
      }
      double mean = valid ? sum / valid : std::numeric_limits<double>::quiet_NaN();
      double sq = 0;
      for (std::uint32_t r = 0; r < R; ++r) {
        double v = results[r].ratios[ci * n_ratios + ri];
        if (!std::isnan(v)) sq += (v - mean) * (v - mean);
      }
      double stddev = valid > 1 ? std::sqrt(sq / (valid - 1)) : 0.0;

      CellStat cell{config.checkpoints[ci], req.kind, req.k, mean, stddev,
                    predicted, predicted == 0.0,
                    std::abs(mean - predicted), false, valid};
      if (valid < R) {
        cell.pass = false;
      } else if (!cell.zero_limit) {
        double band = req.band.value_or(config.tolerances.band);
        cell.pass = cell.gap <= band;
      } else {
        bool trend_ok = std::isnan(prev_mean[ri]) ||
                        mean <= prev_mean[ri] + config.tolerances.trend_slack;
        double ceiling = req.ceiling.value_or(config.tolerances.zero_ceiling);
        cell.pass = trend_ok && (!final_cp || mean <= ceiling);
      }
      prev_mean[ri] = mean;
      all_pass = all_pass && cell.pass;
      report.cells.push_back(cell);
    }

    // range against the exact expectation
    double sum = 0;
    for (std::uint32_t r = 0; r < R; ++r) sum += results[r].range[ci];
    double mean = sum / R;
    double sq = 0;
    for (std::uint32_t r = 0; r < R; ++r)
      sq += (results[r].range[ci] - mean) * (results[r].range[ci] - mean);
    double stddev = R > 1 ? std::sqrt(sq / (R - 1)) : 0.0;
    ExpectationResult oracle = expected_range(config.law, config.checkpoints[ci]);
    double tol = 4.0 * stddev / std::sqrt(static_cast<double>(R)) +
                 oracle.error_bound + 1e-9 * std::max(1.0, std::abs(oracle.value));
    OracleStat row{config.checkpoints[ci], mean, stddev, oracle.value,
                   oracle.error_bound, std::abs(mean - oracle.value), tol, false};
    row.pass = row.gap <= row.tolerance;
    all_pass = all_pass && row.pass;
    report.range_oracle.push_back(row);
  }

  report.all_pass = all_pass;
  return report;
}

namespace {

json cell_to_json(const CellStat& c) {
  json j{{"checkpoint", c.checkpoint}, {"ratio", ratio_name(c.kind)},
         {"mean", c.mean}, {"stddev", c.stddev}, {"predicted", c.predicted},
         {"zeroLimit", c.zero_limit}, {"gap", c.gap}, {"pass", c.pass},
         {"validReplicas", c.valid_replicas}};
  if (ratio_uses_k(c.kind)) j["k"] = c.k;
  return j;
}

json config_to_json(const ExperimentConfig& config) {
  json ratios = json::array();
  for (const auto& r : config.ratios) {
    json jr{{"name", ratio_name(r.kind)}};
    if (ratio_uses_k(r.kind)) jr["k"] = r.k;
    if (r.band) jr["band"] = *r.band;
    if (r.ceiling) jr["ceiling"] = *r.ceiling;
    ratios.push_back(jr);
  }
  return json{{"law", law_to_json(config.law)},
              {"seed", config.seed},
              {"replicas", config.replicas},
              {"checkpoints", config.checkpoints},
              {"ratios", ratios},
              {"tolerances",
               json{{"band", config.tolerances.band},
                    {"zeroCeiling", config.tolerances.zero_ceiling},
                    {"trendSlack", config.tolerances.trend_slack}}}};
}

} // namespace

ExperimentConfig config_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  ExperimentConfig config;
  try {
    config.law = law_from_json(j.at("law"));
    config.seed = j.value("seed", 1ull);
    config.replicas = j.value("replicas", 1u);
    config.checkpoints = j.at("checkpoints").get<std::vector<std::uint64_t>>();
    if (j.contains("tolerances")) {
      const auto& t = j["tolerances"];
      config.tolerances.band = t.value("band", config.tolerances.band);
      config.tolerances.zero_ceiling =
          t.value("zeroCeiling", config.tolerances.zero_ceiling);
      config.tolerances.trend_slack =
          t.value("trendSlack", config.tolerances.trend_slack);
    }
    for (const auto& jr : j.at("ratios")) {
      RatioRequest base;
      base.kind = ratio_from_name(jr.at("name").get<std::string>());
      if (jr.contains("band")) base.band = jr["band"].get<double>();
      if (jr.contains("ceiling")) base.ceiling = jr["ceiling"].get<double>();
      if (jr.contains("k")) {
        for (std::uint64_t k : jr["k"].get<std::vector<std::uint64_t>>()) {
          RatioRequest req = base;
          req.k = k;
          config.ratios.push_back(req);
        }
      } else {
        config.ratios.push_back(base);
      }
    }
    if (j.contains("output")) {
      config.json_out = j["output"].value("json", "");
      config.csv_out = j["output"].value("csv", "");
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  validate(config);
  return config;
}

ExperimentConfig config_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return config_from_json_text(buf.str());
}

std::string report_to_json_text(const ConvergenceReport& report) {
  json cells = json::array();
  for (const auto& c : report.cells) cells.push_back(cell_to_json(c));
  json oracle = json::array();
  for (const auto& o : report.range_oracle)
    oracle.push_back(json{{"checkpoint", o.checkpoint}, {"meanRange", o.mean_range},
                          {"stddev", o.stddev}, {"expected", o.expected},
                          {"expectedError", o.expected_error}, {"gap", o.gap},
                          {"tolerance", o.tolerance}, {"pass", o.pass}});
  json j{{"config", config_to_json(report.config)},
         {"cells", cells},
         {"rangeOracle", oracle},
         {"allPass", report.all_pass}};
  return j.dump(2) + "\n";
}

std::string report_to_csv_text(const ConvergenceReport& report) {
  std::string out = "run_id,seed,n,ratio,k,observed,predicted,gap\n";
  char buf[256];
  for (const auto& row : report.replica_rows) {
    double gap = std::abs(row.observed - row.predicted);
    std::snprintf(buf, sizeof(buf), "%u,%llu,%llu,%s,%llu,%.17g,%.17g,%.17g\n",
                  row.replica, static_cast<unsigned long long>(row.seed),
                  static_cast<unsigned long long>(row.checkpoint),
                  ratio_name(row.kind),
                  static_cast<unsigned long long>(ratio_uses_k(row.kind) ? row.k : 0),
                  row.observed, row.predicted, gap);
    out += buf;
  }
  return out;
}

void write_report_files(const ConvergenceReport& report) {
  auto write = [](const std::string& path, const std::string& text) {
    if (path.empty()) return;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open output file: " + path);
    out << text;
    if (!out) throw IoError("failed writing output file: " + path);
  };
  write(report.config.json_out, report_to_json_text(report));
  write(report.config.csv_out, report_to_csv_text(report));
}

} // namespace occ
