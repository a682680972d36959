#pragma once

// Circle-method quantities: arc dissections and the Delta weight, the
// exponential sums f_j(alpha) over I with the sieve weights, quadratic
// Gauss sums, the singular series via local densities (with the slowly
// convergent q-sum as an independent cross-check), the singular integral
// in two independent evaluations, and the minor-arc / exponential-sum
// experiments. All sampling is seeded and reproducible.

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "psq/arith.hpp"
#include "psq/sieve.hpp"

namespace psq {

struct ArcClassification {
  bool major = false;
  int64_t a = 0;
  uint64_t q = 1;
  // Delta(alpha) = 1/(q + N|q alpha - a|) relative to the auxiliary
  // dissection N(P^{2/3}); 0 when alpha has no such approximation
  double delta = 0;
  bool in_aux = false;  // alpha lies in M(P^{2/3})
};

// Major iff |alpha - a/q| <= Q/(q P^2) for some q <= Q, (a,q) = 1; the
// candidate comes from the continued-fraction approximation with
// denominator bound P^2/Q. N = 9P^2/4 throughout (P = (2/3) sqrt(N)).
ArcClassification classify_arc(double alpha, double P, double Q);

// Weight values of rho_j on the integer interval I = [P/2, P): index i
// holds rho_j(m_lo + i). j = 0 is the prime indicator.
std::vector<int32_t> rho_values(const TermEvaluator& ev, int j);

// f_j(alpha) = sum_{m in I} rho_j(m) e(m^2 alpha), direct summation.
std::complex<double> exp_sum(const std::vector<int32_t>& rho, uint64_t m_lo,
                             double alpha);

struct GaussSumValue {
  uint64_t q = 1;
  int64_t a = 0;
  std::complex<double> value;
};

// S(q, a) = sum over units r mod q of e_q(a r^2).
GaussSumValue gauss_sum(uint64_t q, int64_t a);

struct SingularSeriesValue {
  uint64_t n = 0;
  double euler_value = 0;  // prod_{p <= p_max} sigma_p
  double qsum_value = 0;   // sum_{q <= q_max} A(q)
  uint32_t p_max = 0, q_max = 0;
  double sigma2 = 0, sigma3 = 0;
  double tail_estimate = 0;  // heuristic bound on the neglected Euler tail
  double agreement_gap = 0;  // |euler - qsum|
};

// Local density sigma_p computed by counting unit-tuple solutions of
// x1^2+..+x4^2 = n mod p^k (k = 1 odd p, k = 3 for p = 2), normalized by
// p^{3k} (p^k/phi(p^k))^4. Returns the truncated Euler product and q-sum.
SingularSeriesValue singular_series(uint64_t n, uint32_t p_max, uint32_t q_max,
                                    const PrimeTable& pt);

// local density at one prime with chosen exponent k (stabilization checks)
double local_density(uint64_t n, uint64_t p, int k);

// The singular integral: density at t of the fourfold sum of squares of
// uniform [1/3, 2/3] variables. Supported on [4/9, 16/9], total mass 1/81.
// Convolution route (authoritative): g2 = pushforward density convolved
// once has the closed form (asin sqrt(t_hi/s) - asin sqrt(t_lo/s))/2, and
// one numeric convolution of g2 with itself gives the value.
double singular_integral(double t);
// Oscillatory route: finite-window quadrature of the defining double
// integral after the substitution s = x^2 (linear phase).
double singular_integral_osc(double t, double gamma_max = 400.0);

class SingularIntegralFn {
 public:
  SingularIntegralFn() = default;
  explicit SingularIntegralFn(size_t grid_points);
  double operator()(double t) const;
  double total_mass() const;

 private:
  double lo_ = 0, hi_ = 0, step_ = 0;
  std::vector<double> values_;
};

SingularIntegralFn build_singular_integral(size_t grid_points = 4097);

struct MinorArcScan {
  int j = 0;
  double P = 0;
  uint64_t samples = 0;
  uint64_t seed = 0;
  double max_ratio = 0;    // max |f_j| / P^{1-sigma}
  double max_abs = 0;
  double arg_max = 0;      // maximizing alpha
  double mean_ratio = 0;
  uint64_t rejected = 0;   // samples that landed in N(P^{2/3})
};

// Samples alpha from the minor set n (rejecting members of N = M(P^{2/3}))
// using a seeded low-discrepancy sequence, and records |f_j|/P^{1-sigma}.
MinorArcScan minor_arc_scan(const TermEvaluator& ev, int j, uint64_t n_samples,
                            uint64_t seed);

// Empirical check of the pointwise bound |f_0| <= c (P Delta^{1/2} + P^{5/6})
// over seeded samples of the auxiliary major arcs; reports the fitted c.
struct PointwiseBoundFit {
  double c = 0;
  double worst_alpha = 0;
  uint64_t samples = 0;
};
PointwiseBoundFit fit_f0_bound(const TermEvaluator& ev, uint64_t n_samples,
                               uint64_t seed);

enum class LemmaKind { L31, L32, L33, L34, Count31 };

struct LemmaConfig {
  double X = 1 << 14;
  double R = 0, S = 0, U = 0;  // dyadic block starts; 0 picks a default
  double z = 0;                // rough cut for L34
  uint64_t samples = 100;
  uint64_t seed = 0;
};

struct LemmaReport {
  std::string kind;
  double X = 0, R = 0, S = 0, U = 0, z = 0;
  double rhs = 0;          // the comparison scale of the statement
  double max_ratio = 0;    // max over sampled alpha of lhs/rhs
  double mean_ratio = 0;
  double worst_alpha = 0;
  uint64_t samples = 0;
  uint64_t seed = 0;
};

// Direct evaluation of each exponential-sum statement over seeded samples
// of the sigma-minor arcs (Q = X^{4 sigma}); parameter ranges violating the
// stated hypotheses raise a domain error naming the condition.
LemmaReport lemma_experiment(LemmaKind kind, const LemmaConfig& cfg,
                             double sigma, const PrimeTable& pt);

}  // namespace psq
