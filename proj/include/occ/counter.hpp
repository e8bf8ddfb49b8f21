#ifndef OCC_COUNTER_HPP
#define OCC_COUNTER_HPP

#include <cstdint>
#include <map>
#include <unordered_map>
#include <utility>
#include <vector>

#include "occ/symbol.hpp"

namespace occ {

/// Immutable snapshot of the occupancy spectrum of a stream prefix:
/// the sample count n, the number of distinct states, and the
/// count-of-counts map k -> number of states seen exactly k times
/// (only nonzero entries are stored, keys ascending).
class OccupancySpectrum {
public:
  OccupancySpectrum() = default;
  OccupancySpectrum(std::uint64_t n, std::uint64_t distinct,
                    std::vector<std::pair<std::uint64_t, std::uint64_t>> buckets)
      : n_(n), distinct_(distinct), buckets_(std::move(buckets)) {}

  std::uint64_t n() const { return n_; }
  std::uint64_t distinct() const { return distinct_; }

  /// Nonzero spectrum entries, sorted by multiplicity k.
  const std::vector<std::pair<std::uint64_t, std::uint64_t>>& buckets() const {
    return buckets_;
  }

  /// Number of states seen exactly k times; 0 if k is not present.
  std::uint64_t count_at(std::uint64_t k) const;

  /// Number of states seen at least k times. Throws std::invalid_argument
  /// for k = 0; tail_count(1) equals distinct().
  std::uint64_t tail_count(std::uint64_t k) const;

  friend bool operator==(const OccupancySpectrum& a, const OccupancySpectrum& b) {
    return a.n_ == b.n_ && a.distinct_ == b.distinct_ && a.buckets_ == b.buckets_;
  }

private:
  std::uint64_t n_ = 0;
  std::uint64_t distinct_ = 0;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> buckets_;
};

/// Streaming occupancy counter: per-state visit counts plus an incrementally
/// maintained count-of-counts histogram. observe() is O(1) amortized; the
/// histogram keeps multiplicities <= 64 in a dense array and spills the rest
/// into an ordered map (large multiplicities are rare and move one bucket at
/// a time).
///
/// Single-writer; snapshots taken with spectrum() are independent copies.
class OccupancyCounter {
public:
  OccupancyCounter();

  void observe(Symbol s);

  std::uint64_t n() const { return n_; }
  std::uint64_t distinct() const { return distinct_; }

  /// Visit count of a state, 0 if never observed.
  std::uint64_t multiplicity(Symbol s) const;

  /// Number of states with exactly k visits (k >= 1).
  std::uint64_t count_of(std::uint64_t k) const;

  /// Number of states with at least k visits; throws for k = 0.
  std::uint64_t tail_count(std::uint64_t k) const;

  OccupancySpectrum spectrum() const;

  std::uint64_t state_count() const { return visits_.size(); }

  template <typename F>
  void for_each_state(F&& f) const {
    for (const auto& [sym, cnt] : visits_) f(sym, cnt);
  }

  /// Pointwise sum of two counters (concatenation of their streams).
  /// Throws ContractViolation if the two counters share a fresh id.
  friend OccupancyCounter merge(const OccupancyCounter& a, const OccupancyCounter& b);

private:
  void bucket_add(std::uint64_t k, std::int64_t delta);

  static constexpr std::uint64_t kDense = 64;

  std::uint64_t n_ = 0;
  std::uint64_t distinct_ = 0;
  std::unordered_map<Symbol, std::uint64_t, SymbolHash> visits_;
  std::vector<std::uint64_t> freq_dense_;            // multiplicities 1..kDense
  std::map<std::uint64_t, std::uint64_t> freq_spill_; // multiplicities > kDense
};

OccupancyCounter merge(const OccupancyCounter& a, const OccupancyCounter& b);

} // namespace occ

#endif
