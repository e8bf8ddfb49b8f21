#ifndef OCC_STREAM_HPP
#define OCC_STREAM_HPP

#include <cstdint>
#include <random>
#include <vector>

#include "occ/law.hpp"
#include "occ/symbol.hpp"

namespace occ {

/// Deterministic 64-bit seed derivation for replica / shard children.
std::uint64_t seed_split(std::uint64_t base_seed, std::uint64_t index);

/// A seeded i.i.d. symbol stream over a law. The same (law, seed) always
/// reproduces the same sequence; fresh ids are strictly increasing within
/// the stream. Shard s of K allocates fresh ids congruent to s mod K, so
/// per-shard counters can be merged; with a common seed the underlying
/// uniform sequence (and hence every atom draw) is shared across shards,
/// and skip() positions a shard at its block offset.
///
/// Single-owner mutable cursor; use one stream per thread.
class SymbolStream {
public:
  SymbolStream(RegularLaw law, std::uint64_t seed,
               std::uint64_t shard = 0, std::uint64_t num_shards = 1);

  Symbol next();

  /// Draw and discard `count` symbols.
  void skip(std::uint64_t count);

  std::vector<Symbol> sample(std::uint64_t count);
  void sample_into(std::vector<Symbol>& out, std::uint64_t count);

  /// Symbols emitted so far (draw counter).
  std::uint64_t position() const { return position_; }

  const RegularLaw& law() const { return law_; }
  std::uint64_t seed() const { return seed_; }

private:
  RegularLaw law_;
  std::uint64_t seed_;
  std::mt19937_64 rng_;
  FreshIdAllocator fresh_;
  std::uint64_t position_ = 0;
};

} // namespace occ

#endif
