#ifndef OCC_SYMBOL_HPP
#define OCC_SYMBOL_HPP

#include <cstdint>
#include <functional>

namespace occ {

enum class SymbolKind : std::uint8_t { Atom, Fresh };

/// One element of a symbol stream. An Atom is a point of positive mass,
/// identified by its index: two Atom symbols denote the same state iff their
/// indices are equal. A Fresh symbol stands for a draw from the diffuse part
/// of the law; fresh ids are never reused inside one stream, so two Fresh
/// symbols never denote the same state.
///
/// Packed into one 64-bit word (low bit = kind), so symbols are cheap to
/// copy, compare and hash. Indices and ids must stay below 2^63.
class Symbol {
public:
  static Symbol atom(std::uint64_t index) { return Symbol((index << 1) | 0u); }
  static Symbol fresh(std::uint64_t id) { return Symbol((id << 1) | 1u); }

  SymbolKind kind() const {
    return (code_ & 1u) ? SymbolKind::Fresh : SymbolKind::Atom;
  }
  bool is_atom() const { return (code_ & 1u) == 0; }
  bool is_fresh() const { return (code_ & 1u) != 0; }

  /// Atom index or fresh id, depending on kind.
  std::uint64_t value() const { return code_ >> 1; }
  std::uint64_t code() const { return code_; }

  friend bool operator==(Symbol a, Symbol b) { return a.code_ == b.code_; }
  friend bool operator!=(Symbol a, Symbol b) { return a.code_ != b.code_; }
  friend bool operator<(Symbol a, Symbol b) { return a.code_ < b.code_; }

private:
  explicit Symbol(std::uint64_t code) : code_(code) {}
  std::uint64_t code_;
};

/// splitmix64 finalizer; good avalanche for packed symbol codes.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

struct SymbolHash {
  std::size_t operator()(Symbol s) const {
    return static_cast<std::size_t>(mix64(s.code()));
  }
};

/// Hands out fresh ids for one stream or shard. Shard s of K draws the ids
/// congruent to s mod K, so counters built on different shards can be merged
/// without fresh-id collisions.
class FreshIdAllocator {
public:
  explicit FreshIdAllocator(std::uint64_t shard = 0, std::uint64_t num_shards = 1)
      : next_(shard), step_(num_shards) {}

  std::uint64_t next() {
    std::uint64_t id = next_;
    next_ += step_;
    return id;
  }

  std::uint64_t shard() const { return next_ % step_; }
  std::uint64_t num_shards() const { return step_; }

private:
  std::uint64_t next_;
  std::uint64_t step_;
};

} // namespace occ

#endif
