#ifndef OCC_SERIALIZE_HPP
#define OCC_SERIALIZE_HPP

#include <istream>
#include <string>

#include <json.hpp>

#include "occ/counter.hpp"
#include "occ/estimate.hpp"
#include "occ/law.hpp"

namespace occ {

/// Spectrum wire format: {"n":..., "distinct":..., "spectrum":{"k":count,...}}.
nlohmann::json spectrum_to_json(const OccupancySpectrum& spec);
OccupancySpectrum spectrum_from_json(const nlohmann::json& j);

nlohmann::json estimate_to_json(const RegimeEstimate& est);

/// Law specification, e.g. {"family":"ZipfLike","gamma":0.5} or
/// {"family":"Mixed","atomMass":0.8,"inner":{"family":"ZipfLike","gamma":0.5}}.
/// Optional "epsilon" overrides the truncation default.
RegularLaw law_from_json(const nlohmann::json& j);
nlohmann::json law_to_json(const RegularLaw& law);

/// Whitespace-delimited token stream; every distinct token is one atom,
/// numbered in order of first appearance.
struct TokenStreamResult {
  OccupancySpectrum final_spectrum;
  OccupancySpectrum midpoint_spectrum; // at floor(n/2); n = 0 gives empty
};
TokenStreamResult read_token_stream(std::istream& in);

} // namespace occ

#endif
