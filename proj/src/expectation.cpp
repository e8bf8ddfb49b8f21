#include "occ/expectation.hpp"

#include <cmath>
#include <stdexcept>

namespace occ {

namespace {

// lambda = n*p below which a term joins the analytic tail
constexpr double kLambdaCut = 1e-3;

double log_choose(double n, double k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

// Walk atom probabilities in index order; calls term(p, count) for every atom
// kept explicit and returns the first index folded into the analytic tail
// (equals the support size when the law is fully materialized).
template <typename F>
std::uint64_t walk_atoms(const RegularLaw& law, std::uint64_t n, F&& term) {
  const double dn = static_cast<double>(n);
  if (law.atom_family() == LawFamily::FiniteUniform) {
    std::uint64_t m = law.param_atoms();
    term(law.atom_prob(0), m);
    return m;
  }
  const std::uint64_t head = law.materialized_atoms();
  std::uint64_t i = 0;
  for (; i < head; ++i) term(law.atom_prob(i), 1);
  if (!law.exact_tail()) return i;
  for (;; ++i) {
    double p = law.atom_prob(i);
    if (dn * p <= kLambdaCut) break;
    term(p, 1);
  }
  return i;
}

} // namespace

ExpectationResult expected_range(const RegularLaw& law, std::uint64_t n) {
  if (n == 0) return {0.0, 0.0};
  const double dn = static_cast<double>(n);
  double value = dn * law.diffuse_mass();
  if (law.atom_mass() == 0.0) return {value, 0.0};

  long double acc = 0.0;
  std::uint64_t cut = walk_atoms(law, n, [&](double p, std::uint64_t count) {
    acc += static_cast<double>(count) * -std::expm1(dn * std::log1p(-p));
  });
  value += static_cast<double>(acc);

  if (!law.exact_tail()) return {value, 0.0};

  // States past the cutoff are almost never repeated: expand
  // 1-(1-p)^n = sum_i (-1)^(i+1) C(n,i) p^i over the analytic tail.
  double t1 = law.atom_tail_power_sum(cut - 1, 1);
  double s2 = law.atom_tail_power_sum(cut - 1, 2);
  double s3 = law.atom_tail_power_sum(cut - 1, 3);
  double s4 = law.atom_tail_power_sum(cut - 1, 4);
  double c2 = dn * (dn - 1.0) / 2.0;
  double c3 = c2 * (dn - 2.0) / 3.0;
  double c4 = c3 * (dn - 3.0) / 4.0;
  value += dn * t1 - c2 * s2 + c3 * s3;
  return {value, c4 * s4 + 1e-13 * value};
}

ExpectationResult expected_spectrum(const RegularLaw& law, std::uint64_t n,
                                    std::uint64_t k) {
  if (k == 0) throw std::invalid_argument("expected_spectrum: k must be >= 1");
  if (k > n) return {0.0, 0.0};
  const double dn = static_cast<double>(n);
  const double dk = static_cast<double>(k);
  double value = k == 1 ? dn * law.diffuse_mass() : 0.0;
  if (law.atom_mass() == 0.0) return {value, 0.0};

  const double lc = log_choose(dn, dk);
  long double acc = 0.0;
  std::uint64_t cut = walk_atoms(law, n, [&](double p, std::uint64_t count) {
    acc += static_cast<double>(count) *
           std::exp(lc + dk * std::log(p) + (dn - dk) * std::log1p(-p));
  });
  value += static_cast<double>(acc);

  if (!law.exact_tail()) return {value, 0.0};

  // C(n,k) p^k (1-p)^(n-k) = C(n,k) (p^k - (n-k) p^(k+1) + ...) on the tail.
  double sk = law.atom_tail_power_sum(cut - 1, static_cast<int>(k));
  double sk1 = law.atom_tail_power_sum(cut - 1, static_cast<int>(k) + 1);
  double sk2 = law.atom_tail_power_sum(cut - 1, static_cast<int>(k) + 2);
  double cnk = std::exp(lc);
  value += cnk * (sk - (dn - dk) * sk1);
  double err = cnk * (dn - dk) * (dn - dk - 1.0) / 2.0 * sk2;
  return {value, err + 1e-13 * value};
}

} // namespace occ
