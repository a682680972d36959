#pragma once

// Prime tables, factorization, multiplicative functions, Dirichlet
// characters for small moduli, and continued-fraction rational
// approximation. Everything here is exact integer arithmetic; all
// containers are immutable after construction and safe to share
// across threads.

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace psq {

struct CapacityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bit-indexed primality table plus the ascending prime list, built with a
// segmented sieve (segment size 2^20 entries to stay cache-resident).
class PrimeTable {
 public:
  explicit PrimeTable(uint64_t limit, uint64_t max_limit = uint64_t(1) << 34);

  bool is_prime(uint64_t n) const {
    if (n > limit_) throw CapacityError("PrimeTable: query beyond limit");
    return (bits_[n >> 6] >> (n & 63)) & 1;
  }
  const std::vector<uint64_t>& primes() const { return primes_; }
  uint64_t limit() const { return limit_; }
  uint64_t count() const { return primes_.size(); }
  // pi(x) for x <= limit
  uint64_t pi(uint64_t x) const;

 private:
  uint64_t limit_;
  std::vector<uint64_t> bits_;
  std::vector<uint64_t> primes_;
};

struct Factorization {
  uint64_t n = 1;
  std::vector<std::pair<uint64_t, int>> factors;  // (prime, exponent), ascending

  uint64_t smallest_prime() const { return factors.empty() ? 0 : factors.front().first; }
};

// Trial division over the table's primes up to sqrt(n); the remaining
// cofactor, if any, is prime. Valid for n <= table.limit()^2.
Factorization factorize(uint64_t n, const PrimeTable& pt);

// Smallest prime factor; 0 for n = 1. Same range contract as factorize.
uint64_t smallest_prime_factor(uint64_t n, const PrimeTable& pt);

// psi(n, z): 1 iff integer n has no prime factor < z (n = 1 included).
// The real-argument overload returns 0 for non-integer n.
int rough_indicator(uint64_t n, double z, const PrimeTable& pt);
int rough_indicator(double n, double z, const PrimeTable& pt);

int mobius(uint64_t n, const PrimeTable& pt);
uint64_t euler_phi(uint64_t n, const PrimeTable& pt);
uint64_t tau(uint64_t n, const PrimeTable& pt);

struct RationalApprox {
  int64_t a = 0;
  uint64_t q = 1;
  double err = 0;  // alpha - a/q
};

// Best rational approximation via continued-fraction convergents:
// 1 <= q <= Q, gcd(a,q) = 1, |alpha*q - a| <= 1/Q (Dirichlet's theorem).
RationalApprox diophantine_approx(double alpha, uint64_t Q);

// A Dirichlet character mod q, stored as a generator-exponent table:
// chi(m) = e(expo[m % q] / order) for (m,q) = 1, with expo in [0, order),
// so equality and principality tests are exact integer comparisons.
class DirichletCharacter {
 public:
  uint32_t modulus() const { return q_; }
  uint32_t order() const { return order_; }
  bool is_principal() const { return principal_; }
  // exponent k with chi(m) = e(k/order), or -1 when gcd(m,q) > 1
  int64_t exponent_at(uint64_t m) const { return expo_[m % q_]; }
  std::complex<double> operator()(uint64_t m) const;

 private:
  friend std::vector<DirichletCharacter> characters_mod(uint32_t q);
  uint32_t q_ = 1;
  uint32_t order_ = 1;
  bool principal_ = true;
  std::vector<int64_t> expo_;
};

// All phi(q) characters mod q; exactly one is principal (listed first).
std::vector<DirichletCharacter> characters_mod(uint32_t q);

}  // namespace psq
