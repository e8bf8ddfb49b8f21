// occlab: occupancy statistics of i.i.d. symbol streams.
//
// Subcommands:
//   predict   print the theoretical limit of a named spectrum ratio
//   simulate  run a replicated simulation and compare against the limits
//   estimate  invert the limits: regime/index estimates from a spectrum
//   spectrum  occupancy spectrum of a token stream
//   verify    exact path-decomposition identity checks
//
// Exit codes: 0 ok, 1 tolerance/identity failure, 2 invalid input, 3 I/O error.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "occ/counter.hpp"
#include "occ/decompose.hpp"
#include "occ/errors.hpp"
#include "occ/estimate.hpp"
#include "occ/experiment.hpp"
#include "occ/expectation.hpp"
#include "occ/limits.hpp"
#include "occ/serialize.hpp"
#include "occ/stream.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitTolerance = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitIo = 3;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw occ::IoError("cannot open input file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

int cmd_predict(double gamma, double atom_mass, const std::string& atoms,
                const std::string& ratio, std::uint64_t k) {
  occ::AtomCardinality card;
  if (atoms == "infinite")
    card = occ::AtomCardinality::Infinite;
  else if (atoms == "finite")
    card = occ::AtomCardinality::Finite;
  else if (atoms == "empty")
    card = occ::AtomCardinality::Empty;
  else
    throw occ::ConfigError("--atoms must be one of: infinite, finite, empty");
  if (atom_mass == 0.0) card = occ::AtomCardinality::Empty;

  occ::Regime regime(gamma, atom_mass, card);
  occ::LimitPrediction p = occ::predict(regime, occ::ratio_from_name(ratio), k);
  nlohmann::json out{{"ratio", occ::ratio_name(p.ratio)}, {"value", p.value}};
  if (occ::ratio_uses_k(p.ratio)) out["k"] = p.k;
  std::cout << out.dump() << "\n";
  return kExitOk;
}

int cmd_simulate(const std::string& config_path, const std::string& json_out,
                 const std::string& csv_out) {
  occ::ExperimentConfig config = occ::config_from_file(config_path);
  if (!json_out.empty()) config.json_out = json_out;
  if (!csv_out.empty()) config.csv_out = csv_out;
  occ::ConvergenceReport report = occ::run_experiment(config);
  occ::write_report_files(report);
  if (config.json_out.empty()) std::cout << occ::report_to_json_text(report);
  std::cerr << (report.all_pass ? "simulate: all cells within tolerance\n"
                                : "simulate: tolerance failures, see report\n");
  return report.all_pass ? kExitOk : kExitTolerance;
}

int cmd_estimate(const std::string& input) {
  std::string text = slurp(input);
  std::size_t first = text.find_first_not_of(" \t\r\n");
  occ::RegimeEstimate est;
  if (first != std::string::npos && text[first] == '{') {
    occ::OccupancySpectrum spec =
        occ::spectrum_from_json(nlohmann::json::parse(text, nullptr, true));
    est = occ::classify(spec);
  } else {
    std::istringstream in(text);
    occ::TokenStreamResult tokens = occ::read_token_stream(in);
    est = occ::classify(tokens.final_spectrum, tokens.midpoint_spectrum);
  }
  std::cout << occ::estimate_to_json(est).dump(2) << "\n";
  return kExitOk;
}

int cmd_spectrum(const std::string& input) {
  std::string text = slurp(input);
  std::istringstream in(text);
  occ::TokenStreamResult tokens = occ::read_token_stream(in);
  std::cout << occ::spectrum_to_json(tokens.final_spectrum).dump() << "\n";
  return kExitOk;
}

int cmd_verify(const std::string& config_path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(slurp(config_path));
  } catch (const nlohmann::json::exception& e) {
    throw occ::ConfigError(std::string("verify config: ") + e.what());
  }
  occ::RegularLaw law = occ::law_from_json(j.at("law"));
  std::uint64_t seed = j.value("seed", 1ull);
  std::uint64_t paths = j.value("paths", 100ull);
  std::uint64_t length = j.value("length", 10000ull);
  std::uint64_t max_k = j.value("maxK", 10ull);

  bool identities_ok = true;
  std::uint64_t lln_failures = 0;
  for (std::uint64_t i = 0; i < paths; ++i) {
    occ::SymbolStream stream(law, occ::seed_split(seed, i));
    std::vector<occ::Symbol> path = stream.sample(length);
    occ::IdentityCheck check = occ::verify_identities(path, max_k);
    if (!check.pass) {
      identities_ok = false;
      std::cerr << "verify: path " << i << " failed at prefix "
                << check.first_bad_prefix << ": " << check.detail << "\n";
    }
    occ::LlnCheck lln = occ::bernoulli_lln_check(path, law.diffuse_mass());
    if (!lln.pass) ++lln_failures;
  }
  std::cout << "verify: " << paths << " paths of length " << length << " ("
            << law.describe() << "), decomposition identities "
            << (identities_ok ? "exact" : "VIOLATED") << ", LLN outliers "
            << lln_failures << "/" << paths << "\n";
  return identities_ok ? kExitOk : kExitTolerance;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"occupancy statistics of i.i.d. symbol streams"};
  app.require_subcommand(1);

  auto* predict = app.add_subcommand("predict", "theoretical limit of a spectrum ratio");
  double gamma = 0.5, atom_mass = 1.0;
  std::string atoms = "infinite", ratio;
  std::uint64_t k = 1;
  predict->add_option("--gamma", gamma, "regularity index of the atom part")->required();
  predict->add_option("--atom-mass", atom_mass, "total atom probability (default 1)");
  predict->add_option("--atoms", atoms, "atom cardinality: infinite|finite|empty");
  predict->add_option("--ratio", ratio, "RnOverN|Rn1OverN|RkOverRn|RkOverTail2|RkOverTailK")
      ->required();
  predict->add_option("--k", k, "multiplicity index");

  auto* simulate = app.add_subcommand("simulate", "replicated convergence experiment");
  std::string sim_config, sim_json, sim_csv;
  simulate->add_option("--config", sim_config, "experiment config JSON")->required();
  simulate->add_option("--json", sim_json, "report JSON path (overrides config)");
  simulate->add_option("--csv", sim_csv, "per-replica CSV path (overrides config)");

  auto* estimate = app.add_subcommand("estimate", "regime/index estimates from data");
  std::string est_input;
  estimate->add_option("--input", est_input, "spectrum JSON or token stream file")
      ->required();

  auto* spectrum = app.add_subcommand("spectrum", "occupancy spectrum of a token stream");
  std::string spec_input;
  spectrum->add_option("--input", spec_input, "token stream file")->required();

  auto* verify = app.add_subcommand("verify", "exact decomposition identity checks");
  std::string ver_config;
  verify->add_option("--config", ver_config, "verify config JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (app.got_subcommand(predict))
      return cmd_predict(gamma, atom_mass, atoms, ratio, k);
    if (app.got_subcommand(simulate))
      return cmd_simulate(sim_config, sim_json, sim_csv);
    if (app.got_subcommand(estimate)) return cmd_estimate(est_input);
    if (app.got_subcommand(spectrum)) return cmd_spectrum(spec_input);
    if (app.got_subcommand(verify)) return cmd_verify(ver_config);
  } catch (const occ::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: invalid JSON: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
  return kExitInvalid;
}
