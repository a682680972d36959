#pragma once

// The Harman-style sieve decomposition: symbolic terms psi_1..psi_29 with
// their good/bad splits, exact integer evaluation of every weight, the
// rho_1/rho_2/rho_3 combinations, and machine verification of the two
// decomposition identities and the two-variable sieve inequality.
//
// Each term is a sum over strictly decreasing tuples of prime divisors
// (p_1 > p_2 > ... > p_k) subject to linear constraints in exponent space
// (log_P p_i), with an inner rough-number cut on the cofactor. Constraints
// carry dual semantics: exact integer comparison of prime products against
// P^(c0 + cs*sigma), and the corresponding linear inequality over
// u_i = log p_i / log P. One shared threshold value per constraint keeps
// complementary terms an exact partition.

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "psq/arith.hpp"

namespace psq {

struct SieveParams {
  double sigma = 0;
  double P = 0;
  double z = 0, V = 0, W = 0, Y = 0;  // P^{1-6s}, P^{2s}, P^{1-4s}, P^{1-3s}
  double sqrtP = 0, sqrtY = 0;
  // good subproduct ranges [V, W] and [P^{4s}, P^{1-2s}] (= [P/W, P/V])
  double good_lo1 = 0, good_hi1 = 0, good_lo2 = 0, good_hi2 = 0;
  double interval_lo = 0, interval_hi = 0;  // I = [P/2, P)
  double logP = 0;
  bool degenerate_z = false;  // z < 2: rough cut is vacuous, identities still exact

  uint64_t m_lo() const { return static_cast<uint64_t>(std::ceil(interval_lo)); }
  uint64_t m_hi() const { return static_cast<uint64_t>(std::ceil(interval_hi)); }
  double threshold(double c0, double cs) const;
};

// sigma must lie in (3/20, 1/6); P >= 16.
SieveParams make_params(double sigma, double P);

enum class Rel : uint8_t { Lt, Le, Ge, Gt };

// sum_i coeff[i] * u_i  <rel>  c0 + cs*sigma, interpreted at the integer
// level as prod p_i^coeff[i] <rel> P^(c0 + cs*sigma).
struct ExponentConstraint {
  std::array<int8_t, 5> coeff{};
  double c0 = 0, cs = 0;
  Rel rel = Rel::Le;
  double thr = 0;       // pow(P, c0 + cs*sigma), filled by build_decomposition
  int max_var = 0;      // highest variable index with nonzero coefficient

  double exponent_rhs(double sigma) const { return c0 + cs * sigma; }
};

enum class Inner : uint8_t { None, ZCut, LastVar };
enum class Gb : uint8_t { Whole, Good, Bad };

struct SieveTerm {
  std::string id;
  int arity = 0;
  std::vector<ExponentConstraint> constraints;
  Inner inner = Inner::None;
  Gb gb = Gb::Whole;   // subproduct tag over all arity variables
  int bad_over = 0;    // inherited: no subproduct among the first bad_over
                       // variables may lie in the good ranges
};

struct SignedTerm {
  int term_index;  // into Decomposition::catalog
  int sign;        // +1 or -1
};

struct Decomposition {
  SieveParams params;
  std::vector<SieveTerm> catalog;
  std::vector<SignedTerm> g1, b1, b2, g2, b3;

  const SieveTerm& term(const std::string& id) const;
  int term_index(const std::string& id) const;
  // rho_1 = g1, rho_2 = g2, rho_3 = b1
  const std::vector<SignedTerm>& rho(int j) const;
};

Decomposition build_decomposition(const SieveParams& params);

// JSON document with every term's id, sign usage, constraints in exponent
// form, inner sieve and good/bad tags (audit + downstream consumption).
std::string decomposition_to_json(const Decomposition& d);

// Exact evaluation against a prepared prime table (primes up to sqrt of the
// largest m evaluated).
class TermEvaluator {
 public:
  TermEvaluator(const Decomposition& d, const PrimeTable& pt)
      : d_(d), pt_(pt) {}

  // Unsigned tuple count for one term (sign not applied).
  int64_t eval_term(const SieveTerm& t, uint64_t m) const;
  int64_t eval_term(const std::string& id, uint64_t m) const;
  int64_t eval_list(const std::vector<SignedTerm>& list, uint64_t m) const;
  int64_t eval_rho(int j, uint64_t m) const;
  // psi(m, P^{1/2}): the prime indicator on I
  int eval_psi_sqrtP(uint64_t m) const;

  // One factorization, all five final lists (plus psi): the workhorse of
  // the range scans.
  struct ListValues {
    int psi = 0;
    int64_t g1 = 0, b1 = 0, b2 = 0, g2 = 0, b3 = 0;
  };
  ListValues eval_all_lists(uint64_t m) const;

  const Decomposition& decomposition() const { return d_; }
  const PrimeTable& table() const { return pt_; }

 private:
  struct Factors {
    std::array<uint64_t, 16> prime{};
    std::array<int, 16> exp{};
    int count = 0;
  };
  Factors factor(uint64_t m) const;
  int64_t eval_with_factors(const SieveTerm& t, uint64_t m, const Factors& f) const;

  const Decomposition& d_;
  const PrimeTable& pt_;
};

struct IdentityReport {
  uint64_t checked = 0;
  uint64_t violations_eq0 = 0;
  uint64_t violations_eq0a = 0;
  uint64_t violations_nonneg = 0;
  std::vector<uint64_t> sample_violations;  // first few offending m
  bool ok() const {
    return violations_eq0 == 0 && violations_eq0a == 0 && violations_nonneg == 0;
  }
};

// Checks psi(m,P^{1/2}) = g1 - b1 + b2 and = g2 - b3 pointwise over
// [m_lo, m_hi), plus b_i >= 0. Exact; any violation is a bug.
IdentityReport verify_identities(const TermEvaluator& ev, uint64_t m_lo,
                                 uint64_t m_hi, unsigned jobs = 1);

struct InequalityReport {
  uint64_t checked = 0;
  uint64_t violations = 0;
  std::vector<std::pair<uint64_t, uint64_t>> sample_violations;
};

// psi(m)psi(k) >= rho1(m)psi(k) - rho3(m)rho2(k) over random pairs from I.
InequalityReport verify_inequality(const TermEvaluator& ev, uint64_t n_pairs,
                                   uint64_t seed);

struct DensitySum {
  int64_t sum = 0;
  double main_term = 0;  // C_j * (v - u) / log P
  double ratio = 0;
};

// Exact sum of rho_j over (u, v], compared against the asymptotic main term
// with the constant supplied by the caller (j = 0 uses the prime indicator
// and C_0 = 1).
DensitySum density_sum(const TermEvaluator& ev, int j, uint64_t u, uint64_t v,
                       double Cj, unsigned jobs = 1);

struct CharSum {
  std::complex<double> sum;
  double trivial_bound = 0;  // v - u
  double ratio = 0;          // |sum| / trivial bound
};

CharSum char_sum_check(const TermEvaluator& ev, int j,
                       const DirichletCharacter& chi, uint64_t u, uint64_t v);

// min/max of a linear functional over a term's linear-constraint polytope
// in exponent space (vertex enumeration; good/bad slab conditions excluded,
// so the range is conservative for split terms).
struct LinRange {
  double lo = 0, hi = 0;
};
LinRange exponent_range(const SieveTerm& t, const SieveParams& p,
                        const std::array<int, 5>& objective);

// Type I / type II classification of every term of rho_j in the sense of
// the bilinear-sum hypothesis: a term is type II when some subproduct of
// its prime variables (or its rough cofactor) is provably confined to
// [P^0.06, P^0.94]; z-cut terms additionally expose a type I branch with
// long smooth variable v >= P^0.94.
struct BilinearClass {
  std::string term_id;
  bool type2 = false;
  std::string witness;      // e.g. "p1*p2" or "cofactor"
  double range_lo = 0, range_hi = 0;  // exponent range of the witness
  bool type1_branch = false;          // Moebius-expansion branch with v >= P^0.94
};

std::vector<BilinearClass> bilinear_split(const Decomposition& d, int j);

}  // namespace psq
