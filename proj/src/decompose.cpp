#include "occ/decompose.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "occ/counter.hpp"

namespace occ {

DecompositionView decompose(std::span<const Symbol> path) {
  DecompositionView view;
  view.diffuse_indicator.reserve(path.size());
  view.diffuse_running.reserve(path.size());
  std::uint64_t running = 0;
  for (std::size_t i = 0; i < path.size(); ++i) {
    Symbol s = path[i];
    bool diffuse = s.is_fresh();
    view.diffuse_indicator.push_back(diffuse ? 1 : 0);
    if (diffuse) {
      ++running;
      view.diffuse_positions.push_back(i + 1);
      view.diffuse_subsequence.push_back(s);
    } else {
      view.atom_positions.push_back(i + 1);
      view.atom_subsequence.push_back(s);
    }
    view.diffuse_running.push_back(running);
  }
  return view;
}

std::vector<Symbol> interleave(const DecompositionView& view) {
  std::vector<Symbol> path;
  path.reserve(view.diffuse_indicator.size());
  std::size_t ai = 0, di = 0;
  for (std::uint8_t z : view.diffuse_indicator)
    path.push_back(z ? view.diffuse_subsequence[di++] : view.atom_subsequence[ai++]);
  return path;
}

IdentityCheck verify_identities(std::span<const Symbol> path, std::uint64_t max_k) {
  if (max_k < 2) throw std::invalid_argument("verify_identities: max_k must be >= 2");
  IdentityCheck report;
  report.max_k = max_k;

  OccupancyCounter full;
  OccupancyCounter atoms;
  std::uint64_t n_diffuse = 0;

  auto fail = [&](std::uint64_t prefix, const std::string& what) {
    report.pass = false;
    report.first_bad_prefix = prefix;
    report.detail = what;
  };

  for (std::size_t i = 0; i < path.size(); ++i) {
    Symbol s = path[i];
    full.observe(s);
    if (s.is_fresh())
      ++n_diffuse;
    else
      atoms.observe(s);
    std::uint64_t n = i + 1;

    if (full.distinct() != n_diffuse + atoms.distinct()) {
      std::ostringstream msg;
      msg << "range identity: R_n=" << full.distinct() << " != N_n(Z)+R_m(X)="
          << n_diffuse << "+" << atoms.distinct();
      fail(n, msg.str());
      return report;
    }
    if (full.count_of(1) != n_diffuse + atoms.count_of(1)) {
      std::ostringstream msg;
      msg << "singleton identity: R_{n,1}=" << full.count_of(1)
          << " != N_n(Z)+R_{m,1}(X)=" << n_diffuse << "+" << atoms.count_of(1);
      fail(n, msg.str());
      return report;
    }
    for (std::uint64_t k = 2; k <= max_k; ++k) {
      if (full.count_of(k) != atoms.count_of(k)) {
        std::ostringstream msg;
        msg << "spectrum identity at k=" << k << ": R_{n,k}=" << full.count_of(k)
            << " != R_{m,k}(X)=" << atoms.count_of(k);
        fail(n, msg.str());
        return report;
      }
    }
    ++report.prefixes_checked;
  }
  return report;
}

LlnCheck bernoulli_lln_check(std::span<const Symbol> path, double diffuse_mass,
                             std::optional<double> tolerance) {
  if (path.empty())
    throw std::invalid_argument("bernoulli_lln_check: empty path");
  if (!(diffuse_mass >= 0.0 && diffuse_mass <= 1.0))
    throw std::invalid_argument("bernoulli_lln_check: diffuse_mass outside [0,1]");

  LlnCheck check;
  check.n = path.size();
  std::uint64_t fresh = 0;
  for (Symbol s : path)
    if (s.is_fresh()) ++fresh;
  check.observed = static_cast<double>(fresh) / static_cast<double>(check.n);
  check.expected = diffuse_mass;
  check.gap = std::abs(check.observed - check.expected);
  double var = diffuse_mass * (1.0 - diffuse_mass);
  check.tolerance =
      tolerance.value_or(4.0 * std::sqrt(var / static_cast<double>(check.n)));
  check.pass = check.gap <= check.tolerance;
  return check;
}

} // namespace occ
