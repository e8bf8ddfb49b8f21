#ifndef OCC_LIMITS_HPP
#define OCC_LIMITS_HPP

#include <cstdint>
#include <string>

namespace occ {

enum class AtomCardinality { Infinite, Finite, Empty };

/// The asymptotic regime of a sampling law: the regularity index of its atom
/// part, the total atom mass, and whether the atom set is infinite, finite
/// or empty. A finite nonempty atom set behaves like index 0, so gamma_star
/// is pinned to 0 there; an empty atom set forces atom_mass = 0.
struct Regime {
  Regime(double gamma_star, double atom_mass, AtomCardinality cardinality);

  double gamma_star;
  double atom_mass;
  AtomCardinality cardinality;

  double diffuse_mass() const { return 1.0 - atom_mass; }
};

/// The named limiting ratios of the occupancy spectrum.
///   RnOverN      R_n / n
///   Rn1OverN     R_{n,1} / n
///   RkOverRn     R_{n,k} / R_n            (purely atomic or purely diffuse laws)
///   RkOverTail2  R_{n,k} / R_{n,2+}       (k >= 2)
///   RkOverTailK  R_{n,k} / R_{n,k+}
enum class RatioKind { RnOverN, Rn1OverN, RkOverRn, RkOverTail2, RkOverTailK };

const char* ratio_name(RatioKind kind);
RatioKind ratio_from_name(const std::string& name);

/// Whether the k parameter is meaningful for this ratio.
inline bool ratio_uses_k(RatioKind kind) {
  return kind == RatioKind::RkOverRn || kind == RatioKind::RkOverTail2 ||
         kind == RatioKind::RkOverTailK;
}

struct LimitPrediction {
  RatioKind ratio;
  std::uint64_t k;
  double value; // in [0,1]
};

/// Limiting fraction of the range occupied by states seen exactly k times
/// under index gamma in (0,1): gamma * Gamma(k - gamma) / (k! * Gamma(1 - gamma)).
/// Evaluated by the overflow-free recurrence
///   r_1 = gamma,  r_{k+1} = r_k * (k - gamma) / (k + 1).
/// Throws std::invalid_argument unless 0 < gamma < 1 and k >= 1 (the boundary
/// indices 0 and 1 are handled by predict(), not here).
double r_fraction(double gamma, std::uint64_t k);

/// The theoretical limit of a named ratio under a regime. Throws
/// UnsupportedRatio when the theory does not define the requested limit
/// (RkOverRn with 0 < atom_mass < 1, or tail ratios of a purely diffuse law
/// where no state is ever repeated), and std::invalid_argument for bad k.
LimitPrediction predict(const Regime& regime, RatioKind kind, std::uint64_t k = 1);

} // namespace occ

#endif
