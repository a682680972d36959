#pragma once

// Conversion of sieve terms to multidimensional integrals against the
// Buchstab function, and a deterministic adaptive quadrature over the
// constrained exponent polytopes. A k-variable term contributes
//
//   int_D omega((1 - u_1 - ... - u_k)/beta) (1/beta) prod du_i/u_i,
//
// with beta = u_k for a last-variable inner sieve and beta = 1-6s for a
// z-cut; the no-subproduct ("bad") conditions appear as forbidden slabs
// over subset sums, and "good" terms require some subset sum inside the
// slabs (decomposed internally into disjoint conjunctive pieces). The
// integrator runs nested adaptive Gauss-Kronrod, one variable per level;
// every condition activates at its highest variable, so each level's
// admissible set is an exact union of intervals and the only adaptive work
// is near kink loci of the inner integrals. Fully deterministic.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "psq/buchstab.hpp"
#include "psq/sieve.hpp"

namespace psq {

struct IntegralSpec {
  int dim = 0;
  std::vector<ExponentConstraint> constraints;  // rhs in exponent space
  uint32_t forbidden_vars = 0;  // no subset sum of these vars may hit a slab
  uint32_t good_vars = 0;       // some subset sum of these vars must hit a slab
  double slab_lo1 = 0, slab_hi1 = 0, slab_lo2 = 0, slab_hi2 = 0;
  double beta_const = 0;        // used when !beta_is_last (z-cut / k = 0)
  bool beta_is_last = false;
  std::array<double, 5> box_lo{}, box_hi{};
  double sigma = 0;
  std::string label;
};

struct QuadratureResult {
  double value = 0;
  double err_estimate = 0;
  uint64_t evaluations = 0;
  bool budget_exhausted = false;
  bool empty_region = false;
  bool omega_clipped = false;  // some evaluation hit (1-sum)/beta < 1
};

IntegralSpec term_to_integral(const SieveTerm& t, const SieveParams& params);

QuadratureResult integrate(const IntegralSpec& spec, const BuchstabTable& omega,
                           double tol, uint64_t max_evals = 400'000'000);

}  // namespace psq
