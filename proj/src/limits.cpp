#include "occ/limits.hpp"

#include <cassert>
#include <stdexcept>

#include "occ/errors.hpp"

namespace occ {

Regime::Regime(double gamma_star_, double atom_mass_, AtomCardinality cardinality_)
    : gamma_star(gamma_star_), atom_mass(atom_mass_), cardinality(cardinality_) {
  if (!(gamma_star >= 0.0 && gamma_star <= 1.0))
    throw std::invalid_argument("Regime: gamma_star must lie in [0,1]");
  if (!(atom_mass >= 0.0 && atom_mass <= 1.0))
    throw std::invalid_argument("Regime: atom_mass must lie in [0,1]");
  if (cardinality == AtomCardinality::Empty && atom_mass != 0.0)
    throw std::invalid_argument("Regime: empty atom set requires atom_mass = 0");
  if (cardinality == AtomCardinality::Finite && gamma_star != 0.0)
    throw std::invalid_argument("Regime: finite atom set behaves as gamma_star = 0");
}

const char* ratio_name(RatioKind kind) {
  switch (kind) {
    case RatioKind::RnOverN: return "RnOverN";
    case RatioKind::Rn1OverN: return "Rn1OverN";
    case RatioKind::RkOverRn: return "RkOverRn";
    case RatioKind::RkOverTail2: return "RkOverTail2";
    case RatioKind::RkOverTailK: return "RkOverTailK";
  }
  return "?";
}

RatioKind ratio_from_name(const std::string& name) {
  if (name == "RnOverN") return RatioKind::RnOverN;
  if (name == "Rn1OverN") return RatioKind::Rn1OverN;
  if (name == "RkOverRn") return RatioKind::RkOverRn;
  if (name == "RkOverTail2") return RatioKind::RkOverTail2;
  if (name == "RkOverTailK") return RatioKind::RkOverTailK;
  throw std::invalid_argument("unknown ratio name: " + name);
}

double r_fraction(double gamma, std::uint64_t k) {
  if (!(gamma > 0.0 && gamma < 1.0))
    throw std::invalid_argument("r_fraction: gamma must lie in (0,1)");
  if (k < 1) throw std::invalid_argument("r_fraction: k must be >= 1");
  double r = gamma;
  for (std::uint64_t i = 1; i < k; ++i)
    r *= (static_cast<double>(i) - gamma) / static_cast<double>(i + 1);
  return r;
}

namespace {

// R_{n,k}/R_n for a purely atomic law with infinitely many atoms.
double pure_discrete_fraction(double gamma, std::uint64_t k) {
  if (gamma == 0.0) return 0.0;
  if (gamma == 1.0) return k == 1 ? 1.0 : 0.0;
  return r_fraction(gamma, k);
}

} // namespace

LimitPrediction predict(const Regime& regime, RatioKind kind, std::uint64_t k) {
  if (ratio_uses_k(kind) && k < 1)
    throw std::invalid_argument("predict: k must be >= 1");

  const bool diffuse_only = regime.cardinality == AtomCardinality::Empty;
  const bool finite_atoms = regime.cardinality == AtomCardinality::Finite;
  // A finite atom set follows the index-0 limit laws.
  const double g = finite_atoms ? 0.0 : regime.gamma_star;

  double value = 0.0;
  switch (kind) {
    case RatioKind::RnOverN:
    case RatioKind::Rn1OverN:
      value = regime.diffuse_mass();
      break;

    case RatioKind::RkOverRn:
      if (diffuse_only) {
        value = k == 1 ? 1.0 : 0.0;
      } else if (regime.atom_mass == 1.0) {
        value = finite_atoms ? 0.0 : pure_discrete_fraction(g, k);
      } else {
        throw UnsupportedRatio(
            "RkOverRn is only defined for purely atomic or purely diffuse laws; "
            "use RkOverTail2 or RkOverTailK in the mixed regime");
      }
      break;

    case RatioKind::RkOverTail2:
      if (k < 2)
        throw std::invalid_argument("predict: RkOverTail2 requires k >= 2");
      if (diffuse_only)
        throw UnsupportedRatio("RkOverTail2 is undefined for a purely diffuse law "
                               "(no state is ever visited twice)");
      if (g == 0.0)
        value = 0.0;
      else if (g == 1.0)
        value = 1.0 / (static_cast<double>(k) * static_cast<double>(k - 1));
      else
        value = r_fraction(g, k) / (1.0 - g);
      break;

    case RatioKind::RkOverTailK:
      if (diffuse_only) {
        if (k == 1) {
          value = 1.0; // every state is a singleton
        } else {
          throw UnsupportedRatio("RkOverTailK with k >= 2 is undefined for a "
                                 "purely diffuse law");
        }
      } else {
        value = g == 0.0 ? 0.0 : g / static_cast<double>(k);
      }
      break;
  }

  assert(value >= 0.0 && value <= 1.0);
  return LimitPrediction{kind, k, value};
}

} // namespace occ
