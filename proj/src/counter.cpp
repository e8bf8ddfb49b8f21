#include "occ/counter.hpp"

#include <algorithm>
#include <stdexcept>

#include "occ/errors.hpp"

namespace occ {

std::uint64_t OccupancySpectrum::count_at(std::uint64_t k) const {
  auto it = std::lower_bound(buckets_.begin(), buckets_.end(), k,
                             [](const auto& b, std::uint64_t key) { return b.first < key; });
  if (it != buckets_.end() && it->first == k) return it->second;
  return 0;
}

std::uint64_t OccupancySpectrum::tail_count(std::uint64_t k) const {
  if (k == 0) throw std::invalid_argument("tail_count: k must be >= 1");
  std::uint64_t total = 0;
  for (auto it = buckets_.rbegin(); it != buckets_.rend() && it->first >= k; ++it)
    total += it->second;
  return total;
}

OccupancyCounter::OccupancyCounter() : freq_dense_(kDense + 1, 0) {}

void OccupancyCounter::bucket_add(std::uint64_t k, std::int64_t delta) {
  if (k <= kDense) {
    freq_dense_[k] += static_cast<std::uint64_t>(delta);
  } else {
    auto it = freq_spill_.find(k);
    if (it == freq_spill_.end()) {
      freq_spill_.emplace(k, static_cast<std::uint64_t>(delta));
    } else {
      it->second += static_cast<std::uint64_t>(delta);
      if (it->second == 0) freq_spill_.erase(it);
    }
  }
}

void OccupancyCounter::observe(Symbol s) {
  ++n_;
  auto [it, inserted] = visits_.try_emplace(s, 1);
  if (inserted) {
    ++distinct_;
    ++freq_dense_[1];
    return;
  }
  std::uint64_t k = it->second++;
  bucket_add(k, -1);
  bucket_add(k + 1, +1);
}

std::uint64_t OccupancyCounter::multiplicity(Symbol s) const {
  auto it = visits_.find(s);
  return it == visits_.end() ? 0 : it->second;
}

std::uint64_t OccupancyCounter::count_of(std::uint64_t k) const {
  if (k == 0) return 0;
  if (k <= kDense) return freq_dense_[k];
  auto it = freq_spill_.find(k);
  return it == freq_spill_.end() ? 0 : it->second;
}

std::uint64_t OccupancyCounter::tail_count(std::uint64_t k) const {
  if (k == 0) throw std::invalid_argument("tail_count: k must be >= 1");
  std::uint64_t total = 0;
  for (std::uint64_t i = k; i <= kDense; ++i) total += freq_dense_[i];
  for (auto it = freq_spill_.lower_bound(k > kDense ? k : kDense + 1);
       it != freq_spill_.end(); ++it)
    total += it->second;
  return total;
}

OccupancySpectrum OccupancyCounter::spectrum() const {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> buckets;
  for (std::uint64_t k = 1; k <= kDense; ++k)
    if (freq_dense_[k] > 0) buckets.emplace_back(k, freq_dense_[k]);
  for (const auto& [k, c] : freq_spill_) buckets.emplace_back(k, c);
  return OccupancySpectrum(n_, distinct_, std::move(buckets));
}

OccupancyCounter merge(const OccupancyCounter& a, const OccupancyCounter& b) {
  const OccupancyCounter& big = a.visits_.size() >= b.visits_.size() ? a : b;
  const OccupancyCounter& small = a.visits_.size() >= b.visits_.size() ? b : a;

  OccupancyCounter out;
  out.visits_ = big.visits_;
  for (const auto& [sym, cnt] : small.visits_) {
    auto [it, inserted] = out.visits_.try_emplace(sym, cnt);
    if (!inserted) {
      if (sym.is_fresh())
        throw ContractViolation("merge: fresh id " + std::to_string(sym.value()) +
                                " present in both counters");
      it->second += cnt;
    }
  }

  out.n_ = a.n_ + b.n_;
  out.distinct_ = out.visits_.size();
  for (const auto& [sym, cnt] : out.visits_) {
    (void)sym;
    out.bucket_add(cnt, +1);
  }
  return out;
}

} // namespace occ
