#include "occ/serialize.hpp"

#include <algorithm>
#include <string>
#include <unordered_map>
#include <vector>

#include "occ/errors.hpp"

namespace occ {

using nlohmann::json;

json spectrum_to_json(const OccupancySpectrum& spec) {
  json buckets = json::object();
  for (const auto& [k, c] : spec.buckets()) buckets[std::to_string(k)] = c;
  return json{{"n", spec.n()}, {"distinct", spec.distinct()}, {"spectrum", buckets}};
}

OccupancySpectrum spectrum_from_json(const json& j) {
  try {
    std::uint64_t n = j.at("n").get<std::uint64_t>();
    std::uint64_t distinct = j.at("distinct").get<std::uint64_t>();
    std::vector<std::pair<std::uint64_t, std::uint64_t>> buckets;
    std::uint64_t sum = 0, weighted = 0;
    for (const auto& [key, val] : j.at("spectrum").items()) {
      std::uint64_t k = std::stoull(key);
      std::uint64_t c = val.get<std::uint64_t>();
      if (k == 0) throw ConfigError("spectrum: multiplicity 0 is not allowed");
      if (c == 0) continue;
      buckets.emplace_back(k, c);
      sum += c;
      weighted += k * c;
    }
    std::sort(buckets.begin(), buckets.end());
    if (sum != distinct)
      throw ConfigError("spectrum: bucket counts sum to " + std::to_string(sum) +
                        ", distinct says " + std::to_string(distinct));
    if (weighted != n)
      throw ConfigError("spectrum: sum k*R_k = " + std::to_string(weighted) +
                        ", n says " + std::to_string(n));
    return OccupancySpectrum(n, distinct, std::move(buckets));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("spectrum: malformed JSON: ") + e.what());
  }
}

json estimate_to_json(const RegimeEstimate& est) {
  json diag = json::array();
  for (const auto& d : est.diagnostics)
    diag.push_back(json{{"k", d.k}, {"observed", d.observed}, {"predicted", d.predicted}});
  json out{{"diffuseMassHat", est.diffuse_mass_hat},
           {"diffuseMassUpper", est.diffuse_mass_upper},
           {"diagnostics", diag}};
  out["gammaHat"] = est.gamma_hat ? json(*est.gamma_hat) : json(nullptr);
  out["regime"] = est.regime ? json(regime_class_name(*est.regime)) : json(nullptr);
  if (!est.note.empty()) out["note"] = est.note;
  return out;
}

RegularLaw law_from_json(const json& j) {
  try {
    std::string family = j.at("family").get<std::string>();
    double eps = j.value("epsilon", RegularLaw::kDefaultEpsilon);
    if (family == "FiniteUniform")
      return RegularLaw::finite_uniform(j.at("atoms").get<std::uint64_t>());
    if (family == "Geometric")
      return RegularLaw::geometric(j.at("q").get<double>(), eps);
    if (family == "ZipfLike")
      return RegularLaw::zipf_like(j.at("gamma").get<double>(), eps);
    if (family == "LogCorrected") return RegularLaw::log_corrected(eps);
    if (family == "PureDiffuse") return RegularLaw::pure_diffuse();
    if (family == "Mixed")
      return RegularLaw::mixed(j.at("atomMass").get<double>(),
                               law_from_json(j.at("inner")));
    throw ConfigError("unknown law family: " + family);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("law: malformed JSON: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("law: ") + e.what());
  }
}

json law_to_json(const RegularLaw& law) {
  switch (law.family()) {
    case LawFamily::FiniteUniform:
      return json{{"family", "FiniteUniform"}, {"atoms", law.param_atoms()}};
    case LawFamily::Geometric:
      return json{{"family", "Geometric"}, {"q", law.param_q()},
                  {"epsilon", law.epsilon()}};
    case LawFamily::ZipfLike:
      return json{{"family", "ZipfLike"}, {"gamma", law.param_gamma()},
                  {"epsilon", law.epsilon()}};
    case LawFamily::LogCorrected:
      return json{{"family", "LogCorrected"}, {"epsilon", law.epsilon()}};
    case LawFamily::PureDiffuse:
      return json{{"family", "PureDiffuse"}};
    case LawFamily::Mixed:
      return json{{"family", "Mixed"}, {"atomMass", law.atom_mass()},
                  {"inner", law_to_json(law.inner())}};
  }
  throw ConfigError("law_to_json: unknown family");
}

TokenStreamResult read_token_stream(std::istream& in) {
  std::vector<std::string> tokens;
  std::string tok;
  while (in >> tok) tokens.push_back(tok);

  std::unordered_map<std::string, std::uint64_t> ids;
  ids.reserve(tokens.size());
  OccupancyCounter counter;
  TokenStreamResult out;
  const std::uint64_t mid = tokens.size() / 2;
  std::uint64_t seen = 0;
  for (const auto& t : tokens) {
    auto [it, inserted] = ids.try_emplace(t, ids.size());
    counter.observe(Symbol::atom(it->second));
    if (++seen == mid) out.midpoint_spectrum = counter.spectrum();
  }
  out.final_spectrum = counter.spectrum();
  return out;
}

} // namespace occ
