#include "occ/stream.hpp"

namespace occ {

std::uint64_t seed_split(std::uint64_t base_seed, std::uint64_t index) {
  return mix64(base_seed + 0x9E3779B97F4A7C15ull * (index + 1));
}

SymbolStream::SymbolStream(RegularLaw law, std::uint64_t seed,
                           std::uint64_t shard, std::uint64_t num_shards)
    : law_(std::move(law)), seed_(seed), rng_(seed), fresh_(shard, num_shards) {}

Symbol SymbolStream::next() {
  ++position_;
  return law_.draw(rng_, fresh_);
}

void SymbolStream::skip(std::uint64_t count) {
  for (std::uint64_t i = 0; i < count; ++i) next();
}

void SymbolStream::sample_into(std::vector<Symbol>& out, std::uint64_t count) {
  out.reserve(out.size() + count);
  for (std::uint64_t i = 0; i < count; ++i) out.push_back(next());
}

std::vector<Symbol> SymbolStream::sample(std::uint64_t count) {
  std::vector<Symbol> out;
  sample_into(out, count);
  return out;
}

} // namespace occ
