#ifndef OCC_EXPECTATION_HPP
#define OCC_EXPECTATION_HPP

#include <cstdint>

#include "occ/law.hpp"

namespace occ {

/// An exact expectation together with a bound on the numerical error of its
/// evaluation (series remainders past the analytic cutoff; 0 where the sum
/// is finite and evaluated in full).
struct ExpectationResult {
  double value;
  double error_bound;
};

/// E R_n under i.i.d. sampling from the law:
///   n * diffuse_mass + sum_j (1 - (1 - p_j)^n).
/// Atoms with n * p_j below an interior cutoff are folded into analytic
/// tail power sums, with the first omitted series term reported as the
/// error bound. Returns 0 for n = 0.
ExpectationResult expected_range(const RegularLaw& law, std::uint64_t n);

/// E R_{n,k}: sum_j C(n,k) p_j^k (1-p_j)^(n-k), plus n * diffuse_mass when
/// k = 1 (diffuse draws are always singletons). Returns 0 when k > n.
ExpectationResult expected_spectrum(const RegularLaw& law, std::uint64_t n,
                                    std::uint64_t k);

} // namespace occ

#endif
