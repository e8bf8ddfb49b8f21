#ifndef OCC_ESTIMATE_HPP
#define OCC_ESTIMATE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "occ/counter.hpp"

namespace occ {

enum class RegimeClass { PureDiffuse, PureDiscrete, Mixed, FiniteAtoms };

const char* regime_class_name(RegimeClass c);

struct RatioDiagnostic {
  std::uint64_t k;
  double observed;   // R_{n,k} / R_{n,k+}
  double predicted;  // gamma_hat / k
};

/// Inversion of the limit theorems on one observed spectrum.
struct RegimeEstimate {
  std::optional<double> gamma_hat;       // clamped to [0,1]
  double gamma_hat_raw = 0;              // before clamping
  double diffuse_mass_hat = 0;           // R_{n,1}/n
  double diffuse_mass_upper = 0;         // R_n/n companion (upward biased)
  std::optional<RegimeClass> regime;     // empty when n is too small to call
  std::vector<RatioDiagnostic> diagnostics;
  std::string note;
};

/// gamma estimate for a purely atomic regular law: R_{n,1}/R_n, the k = 1
/// case of the spectrum-fraction limit. Throws UndefinedEstimate on an
/// empty spectrum.
double estimate_gamma_discrete(const OccupancySpectrum& spectrum);

struct MixedGammaEstimate {
  double headline;      // clamp(2 R_{n,2} / R_{n,2+}), the k = 2 inversion
  double headline_raw;
  double refined;       // inverse-variance weighted mean of k R_{n,k}/R_{n,k+}
  std::vector<RatioDiagnostic> per_k;
};

/// gamma* estimate for a mixed law from the repeated-visit spectrum.
/// k = 2 carries the most states, hence the headline; the per-k family
/// k * R_{n,k} / R_{n,k+} for k = 2..max_k and its inverse-variance mean
/// are reported alongside. Throws UndefinedEstimate when R_{n,2+} = 0.
MixedGammaEstimate estimate_gamma_mixed(const OccupancySpectrum& spec,
                                        std::uint64_t max_k = 8);

struct DiffuseMassEstimate {
  double primary;  // R_{n,1}/n; biased upward by atom singletons at finite n
  double upper;    // R_n/n, always >= primary
};

DiffuseMassEstimate estimate_diffuse_mass(const OccupancySpectrum& spectrum);

struct ClassifyOptions {
  double delta = 0.01;        // singleton-frequency band edge
  std::uint64_t min_n = 1000; // below this, diagnostics only
};

/// Regime guess from threshold rules: PureDiffuse when R_n = n exactly;
/// FiniteAtoms when the range did not grow since a midpoint snapshot;
/// PureDiscrete when R_{n,1}/n <= delta; Mixed otherwise. Never throws:
/// with n < min_n the guess is withheld and only diagnostics are returned.
RegimeEstimate classify(const OccupancySpectrum& final_spectrum,
                        const std::optional<OccupancySpectrum>& midpoint = std::nullopt,
                        const ClassifyOptions& options = {});

} // namespace occ

#endif
