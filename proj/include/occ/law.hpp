#ifndef OCC_LAW_HPP
#define OCC_LAW_HPP

#include <cstdint>
#include <memory>
#include <random>
#include <string>

#include "occ/limits.hpp"
#include "occ/symbol.hpp"

namespace occ {

enum class LawFamily { FiniteUniform, Geometric, ZipfLike, LogCorrected, PureDiffuse, Mixed };

const char* family_name(LawFamily family);

/// A sampling law over atoms plus an optional diffuse part.
///
/// Atom families and the regularity index they realize:
///   FiniteUniform(m)   m equal atoms                         index 0 (finite)
///   Geometric(q)       p_i = (1-q) q^i                       index 0
///   ZipfLike(gamma)    p_i ~ (i+1)^(-1/gamma)                index gamma in (0,1)
///   LogCorrected       p_i ~ 1/((i+1) log^2(i+3))            index 1
///   PureDiffuse        fresh draws only
///   Mixed(a, inner)    atom family `inner` with mass a, fresh otherwise
///
/// Light-tailed laws are materialized up to the index where the residual
/// tail mass drops below epsilon * atom_mass, then renormalized (the classic
/// truncation scheme; the discarded mass is recorded as tail_bound()).
/// Heavy-tailed laws, whose epsilon-truncation point would be astronomically
/// large, instead keep a materialized head plus an exact analytic tail: draws
/// beyond the head are mapped to their exact rank by inverting the closed-form
/// tail-mass function, so no probability is discarded at all. Ranks past 2^62
/// (total mass deep_tail_mass(), e.g. ~1e-19 for ZipfLike(0.5)) are spread
/// over 2^61 equal-mass synthetic states; at any feasible sample size those
/// states are visited at most once, matching the true law up to an expected
/// collision count of order n^2 * deep_tail_mass^2 / 2^62.
///
/// Values are cheap to copy (shared immutable model).
class RegularLaw {
public:
  static constexpr double kDefaultEpsilon = 1e-12;

  static RegularLaw finite_uniform(std::uint64_t atoms);
  static RegularLaw geometric(double q, double epsilon = kDefaultEpsilon);
  static RegularLaw zipf_like(double gamma, double epsilon = kDefaultEpsilon);
  static RegularLaw log_corrected(double epsilon = kDefaultEpsilon);
  static RegularLaw pure_diffuse();
  static RegularLaw mixed(double atom_mass, const RegularLaw& inner);

  LawFamily family() const;
  /// Family of the atom part (equals family() except for Mixed).
  LawFamily atom_family() const;

  double atom_mass() const;
  double diffuse_mass() const { return 1.0 - atom_mass(); }

  /// The asymptotic regime this law realizes.
  Regime regime() const;

  /// Regularity index the atom family is built to realize.
  double claimed_gamma() const;

  /// Number of explicitly materialized atoms (the head table; for
  /// FiniteUniform the atom count itself).
  std::uint64_t materialized_atoms() const;

  /// True when the law carries an exact analytic tail beyond the head.
  bool exact_tail() const;

  /// Total-variation distance to the untruncated family introduced by
  /// truncation; 0 in exact-tail mode.
  double tail_bound() const;

  /// Mass past rank 2^62 handled by synthetic equal-mass states
  /// (exact-tail mode only, else 0).
  double deep_tail_mass() const;

  double epsilon() const;

  /// P(draw == Atom(index)); 0 beyond the support.
  double atom_prob(std::uint64_t index) const;
  /// Same, conditioned on drawing an atom.
  double conditional_atom_prob(std::uint64_t index) const;

  /// Sum over j > index of atom_prob(j)^power (power >= 1, analytic).
  double atom_tail_power_sum(std::uint64_t index, int power) const;

  /// Draw one symbol; deterministic in the generator state.
  Symbol draw(std::mt19937_64& rng, FreshIdAllocator& fresh) const;

  // Family parameters (meaningful per family; used for serialization).
  double param_gamma() const;
  double param_q() const;
  std::uint64_t param_atoms() const;
  /// Atom part of a Mixed law; throws for other families.
  RegularLaw inner() const;

  std::string describe() const;

private:
  struct Model;
  explicit RegularLaw(std::shared_ptr<const Model> model) : model_(std::move(model)) {}
  std::shared_ptr<const Model> model_;
};

/// Independent check that a law realizes its claimed index: evaluates the
/// counting function nu(x) = #{j : p*_j >= 1/x} on a geometric grid and fits
/// log nu against (log x, log log x). The log log covariate absorbs the
/// slowly varying factor, without which no index-1 family can match its
/// index at any numerically reachable x. Returns the fitted index; 0 for a
/// finite atom set. Throws std::invalid_argument for a purely diffuse law.
double empirical_index_slope(const RegularLaw& law);

} // namespace occ

#endif
