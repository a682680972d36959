#pragma once

// Per-term integration of the decomposition and assembly of the sieve
// constants: C_1 (rho_1 = g1), C_2 (rho_2 = g2), C_3 (rho_3 = b1), plus the
// b2/b3 constants used by the exactness cross-checks
// C_1 - C_3 + C(b2) = 1 and C_2 - C(b3) = 1.

#include <string>
#include <vector>

#include "psq/integrate.hpp"
#include "psq/sieve.hpp"

namespace psq {

struct TermContribution {
  std::string id;
  std::string list;  // g1 / b1 / b2 / g2 / b3
  int sign = 0;
  double value = 0;
  double err = 0;
  bool empty_region = false;
  bool omega_clipped = false;
  bool budget_exhausted = false;
};

struct ConstantsReport {
  double sigma = 0;
  double C1 = 0, C2 = 0, C3 = 0;
  double err1 = 0, err2 = 0, err3 = 0;
  double Cb2 = 0, Cb3 = 0;
  double err_b2 = 0, err_b3 = 0;
  double margin = 0;  // C1 - C2*C3
  std::vector<TermContribution> per_term;
  bool any_budget_exhausted = false;
};

// tol is the error budget per constant. Good-tagged terms are integrated as
// whole - bad (two conjunctive integrals); integrate() still supports the
// direct disjunctive route, which the tests use as a cross-check.
ConstantsReport compute_constants(const Decomposition& d,
                                  const BuchstabTable& omega, double tol,
                                  unsigned jobs = 1);

}  // namespace psq
