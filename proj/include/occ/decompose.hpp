#ifndef OCC_DECOMPOSE_HPP
#define OCC_DECOMPOSE_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "occ/symbol.hpp"

namespace occ {

/// A sample path split at its atom/diffuse boundary: the indicator sequence
/// of diffuse draws, the positions (1-based stopping times) and subsequences
/// of atom and diffuse draws, and the running diffuse count.
struct DecompositionView {
  std::vector<std::uint8_t> diffuse_indicator;     // Z_k, 1 iff step k is diffuse
  std::vector<std::uint64_t> atom_positions;       // tau_k
  std::vector<std::uint64_t> diffuse_positions;    // s_k
  std::vector<Symbol> atom_subsequence;            // X
  std::vector<Symbol> diffuse_subsequence;         // Y
  std::vector<std::uint64_t> diffuse_running;      // N_n(Z) for n = 1..len
};

DecompositionView decompose(std::span<const Symbol> path);

/// Rebuild the original path from a decomposition.
std::vector<Symbol> interleave(const DecompositionView& view);

struct IdentityCheck {
  bool pass = true;
  std::uint64_t first_bad_prefix = 0; // 0 when pass
  std::string detail;
  std::uint64_t prefixes_checked = 0;
  std::uint64_t max_k = 0;
};

/// Checks, at every prefix length n and in exact integer arithmetic, that
/// the occupancy of the full path splits over the decomposition:
///   R_n(path)    =  N_n(Z) + R_m(X)          with m = n - N_n(Z)
///   R_{n,1}(path) = N_n(Z) + R_{m,1}(X)
///   R_{n,k}(path) = R_{m,k}(X)               for k = 2..max_k
/// A failure means an implementation bug (fresh draws never collide).
/// Requires max_k >= 2.
IdentityCheck verify_identities(std::span<const Symbol> path, std::uint64_t max_k);

struct LlnCheck {
  std::uint64_t n = 0;
  double observed = 0;  // N_n(Z) / n
  double expected = 0;  // diffuse mass
  double gap = 0;
  double tolerance = 0;
  bool pass = false;
};

/// Compares the empirical diffuse frequency N_n(Z)/n against the law's
/// diffuse mass. Default tolerance is the 4-sigma binomial band
/// 4 sqrt(p(1-p)/n); it is 0 when p is 0 or 1, where equality is exact.
LlnCheck bernoulli_lln_check(std::span<const Symbol> path, double diffuse_mass,
                             std::optional<double> tolerance = std::nullopt);

} // namespace occ

#endif
