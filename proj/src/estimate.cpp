#include "occ/estimate.hpp"

#include <algorithm>
#include <cmath>

#include "occ/errors.hpp"

namespace occ {

namespace {

double clamp01(double x) { return std::min(1.0, std::max(0.0, x)); }

} // namespace

const char* regime_class_name(RegimeClass c) {
  switch (c) {
    case RegimeClass::PureDiffuse: return "PureDiffuse";
    case RegimeClass::PureDiscrete: return "PureDiscrete";
    case RegimeClass::Mixed: return "Mixed";
    case RegimeClass::FiniteAtoms: return "FiniteAtoms";
  }
  return "?";
}

double estimate_gamma_discrete(const OccupancySpectrum& spectrum) {
  if (spectrum.distinct() == 0)
    throw UndefinedEstimate("estimate_gamma_discrete: empty spectrum");
  return clamp01(static_cast<double>(spectrum.count_at(1)) /
                 static_cast<double>(spectrum.distinct()));
}

MixedGammaEstimate estimate_gamma_mixed(const OccupancySpectrum& spectrum,
                                        std::uint64_t max_k) {
  std::uint64_t tail2 = spectrum.tail_count(2);
  if (tail2 == 0)
    throw UndefinedEstimate("estimate_gamma_mixed: no state repeats; the stream "
                            "looks purely diffuse");
  MixedGammaEstimate est;
  est.headline_raw = 2.0 * static_cast<double>(spectrum.count_at(2)) /
                     static_cast<double>(tail2);
  est.headline = clamp01(est.headline_raw);

  double wsum = 0.0, acc = 0.0;
  std::uint64_t tail = tail2;
  for (std::uint64_t k = 2; k <= max_k && tail > 0; ++k) {
    double rk = static_cast<double>(spectrum.count_at(k));
    double ratio = static_cast<double>(k) * rk / static_cast<double>(tail);
    // delta-method variance of k R_k / R_k+ with a smoothed fraction
    double qs = (rk + 0.5) / (static_cast<double>(tail) + 1.0);
    double var = static_cast<double>(k) * static_cast<double>(k) * qs * (1.0 - qs) /
                 static_cast<double>(tail);
    double w = 1.0 / var;
    wsum += w;
    acc += w * ratio;
    est.per_k.push_back({k, rk / static_cast<double>(tail),
                         0.0 /* predicted filled by caller */});
    tail -= spectrum.count_at(k);
  }
  est.refined = clamp01(wsum > 0.0 ? acc / wsum : est.headline);
  for (auto& d : est.per_k) d.predicted = est.headline / static_cast<double>(d.k);
  return est;
}

DiffuseMassEstimate estimate_diffuse_mass(const OccupancySpectrum& spectrum) {
  if (spectrum.n() == 0) return {0.0, 0.0};
  double n = static_cast<double>(spectrum.n());
  return {clamp01(static_cast<double>(spectrum.count_at(1)) / n),
          clamp01(static_cast<double>(spectrum.distinct()) / n)};
}

RegimeEstimate classify(const OccupancySpectrum& final_spectrum,
                        const std::optional<OccupancySpectrum>& midpoint,
                        const ClassifyOptions& options) {
  RegimeEstimate out;
  auto mass = estimate_diffuse_mass(final_spectrum);
  out.diffuse_mass_hat = mass.primary;
  out.diffuse_mass_upper = mass.upper;

  if (final_spectrum.tail_count(2) > 0) {
    auto mixed = estimate_gamma_mixed(final_spectrum);
    out.diagnostics = mixed.per_k;
  }

  if (final_spectrum.n() < options.min_n) {
    out.note = "sample too small to classify (n < " +
               std::to_string(options.min_n) + ")";
    return out;
  }

  double singleton_rate = final_spectrum.n() == 0
                              ? 0.0
                              : static_cast<double>(final_spectrum.count_at(1)) /
                                    static_cast<double>(final_spectrum.n());

  if (final_spectrum.distinct() == final_spectrum.n()) {
    out.regime = RegimeClass::PureDiffuse;
    out.diffuse_mass_hat = 1.0;
    return out;
  }
  if (midpoint && midpoint->n() < final_spectrum.n() &&
      midpoint->distinct() == final_spectrum.distinct()) {
    out.regime = RegimeClass::FiniteAtoms;
    out.gamma_hat = 0.0; // finite atom sets follow the index-0 limits
    out.gamma_hat_raw = 0.0;
    return out;
  }
  if (singleton_rate <= options.delta) {
    out.regime = RegimeClass::PureDiscrete;
    double g = estimate_gamma_discrete(final_spectrum);
    out.gamma_hat = g;
    out.gamma_hat_raw = g;
    return out;
  }
  out.regime = RegimeClass::Mixed;
  if (final_spectrum.tail_count(2) > 0) {
    auto mixed = estimate_gamma_mixed(final_spectrum);
    out.gamma_hat = mixed.headline;
    out.gamma_hat_raw = mixed.headline_raw;
    for (auto& d : out.diagnostics)
      d.predicted = mixed.headline / static_cast<double>(d.k);
  }
  return out;
}

} // namespace occ
