#include "psq/arith.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace psq {

namespace {
constexpr uint64_t kSegmentBits = uint64_t(1) << 20;
}

PrimeTable::PrimeTable(uint64_t limit, uint64_t max_limit) : limit_(limit) {
  if (limit < 2 || limit > max_limit)
    throw CapacityError("PrimeTable: limit out of range");

  bits_.assign(limit / 64 + 1, 0);
  const uint64_t root = static_cast<uint64_t>(std::sqrt(static_cast<double>(limit))) + 1;

  // small sieve up to sqrt(limit)
  std::vector<uint8_t> small(root + 1, 1);
  small[0] = 0;
  if (root >= 1) small[1] = 0;
  for (uint64_t i = 2; i * i <= root; ++i)
    if (small[i])
      for (uint64_t j = i * i; j <= root; j += i) small[j] = 0;
  std::vector<uint64_t> base;
  for (uint64_t i = 2; i <= root; ++i)
    if (small[i]) base.push_back(i);

  std::vector<uint8_t> seg(kSegmentBits);
  for (uint64_t low = 0; low <= limit; low += kSegmentBits) {
    const uint64_t high = std::min(low + kSegmentBits - 1, limit);
    std::fill(seg.begin(), seg.begin() + (high - low + 1), 1);
    for (uint64_t p : base) {
      if (p * p > high) break;
      uint64_t start = std::max(p * p, (low + p - 1) / p * p);
      for (uint64_t j = start; j <= high; j += p) seg[j - low] = 0;
    }
    if (low == 0) { seg[0] = 0; if (high >= 1) seg[1] = 0; }
    for (uint64_t n = low; n <= high; ++n)
      if (seg[n - low]) {
        bits_[n >> 6] |= uint64_t(1) << (n & 63);
        primes_.push_back(n);
      }
  }
}

uint64_t PrimeTable::pi(uint64_t x) const {
  if (x > limit_) throw CapacityError("PrimeTable: pi query beyond limit");
  return std::upper_bound(primes_.begin(), primes_.end(), x) - primes_.begin();
}

Factorization factorize(uint64_t n, const PrimeTable& pt) {
  if (n == 0) throw std::domain_error("factorize: n must be positive");
  if (pt.limit() * pt.limit() < n)
    throw CapacityError("factorize: n exceeds table range");
  Factorization f;
  f.n = n;
  uint64_t rem = n;
  for (uint64_t p : pt.primes()) {
    if (p * p > rem) break;
    if (rem % p == 0) {
      int e = 0;
      do { rem /= p; ++e; } while (rem % p == 0);
      f.factors.emplace_back(p, e);
    }
  }
  if (rem > 1) f.factors.emplace_back(rem, 1);
  return f;
}

uint64_t smallest_prime_factor(uint64_t n, const PrimeTable& pt) {
  if (n <= 1) return 0;
  if (pt.limit() * pt.limit() < n)
    throw CapacityError("smallest_prime_factor: n exceeds table range");
  for (uint64_t p : pt.primes()) {
    if (p * p > n) break;
    if (n % p == 0) return p;
  }
  return n;
}

int rough_indicator(uint64_t n, double z, const PrimeTable& pt) {
  if (n == 0) throw std::domain_error("rough_indicator: n must be >= 1");
  if (n == 1) return 1;
  for (uint64_t p : pt.primes()) {
    if (static_cast<double>(p) >= z) return 1;
    if (p * p > n) break;
    if (n % p == 0) return 0;
  }
  // n is prime here (no factor <= sqrt(n) below z)
  return static_cast<double>(n) >= z ? 1 : 0;
}

int rough_indicator(double n, double z, const PrimeTable& pt) {
  if (n < 1) throw std::domain_error("rough_indicator: n must be >= 1");
  if (n != std::floor(n) || n > 9.007199254740992e15) return 0;
  return rough_indicator(static_cast<uint64_t>(n), z, pt);
}

int mobius(uint64_t n, const PrimeTable& pt) {
  auto f = factorize(n, pt);
  for (auto& [p, e] : f.factors)
    if (e > 1) return 0;
  return f.factors.size() % 2 == 0 ? 1 : -1;
}

uint64_t euler_phi(uint64_t n, const PrimeTable& pt) {
  auto f = factorize(n, pt);
  uint64_t r = n;
  for (auto& [p, e] : f.factors) r = r / p * (p - 1);
  return r;
}

uint64_t tau(uint64_t n, const PrimeTable& pt) {
  auto f = factorize(n, pt);
  uint64_t r = 1;
  for (auto& [p, e] : f.factors) r *= static_cast<uint64_t>(e + 1);
  return r;
}

RationalApprox diophantine_approx(double alpha, uint64_t Q) {
  if (Q < 1) throw std::domain_error("diophantine_approx: Q >= 1 required");
  // convergents of the continued fraction of alpha
  int64_t p_prev = 1, p_cur = 0;   // numerators  (p_{-1}=1, p_0=a0 after first step)
  int64_t q_prev = 0, q_cur = 1;   // denominators
  double x = alpha;
  int64_t best_a = static_cast<int64_t>(std::llround(alpha));
  uint64_t best_q = 1;
  for (int it = 0; it < 64; ++it) {
    double fl = std::floor(x);
    if (fl > 9e17 || fl < -9e17) break;
    int64_t ai = static_cast<int64_t>(fl);
    int64_t p_next = ai * p_cur + p_prev;
    int64_t q_next = ai * q_cur + q_prev;
    if (q_next <= 0) break;  // overflow guard
    if (static_cast<uint64_t>(q_next) > Q) break;
    p_prev = p_cur; p_cur = p_next;
    q_prev = q_cur; q_cur = q_next;
    best_a = p_cur;
    best_q = static_cast<uint64_t>(q_cur);
    double frac = x - fl;
    if (frac < 1e-15) break;  // alpha is (numerically) rational, expansion done
    x = 1.0 / frac;
  }
  int64_t g = std::gcd(std::abs(best_a), static_cast<int64_t>(best_q));
  if (g > 1) { best_a /= g; best_q /= static_cast<uint64_t>(g); }
  RationalApprox r;
  r.a = best_a;
  r.q = best_q;
  r.err = alpha - static_cast<double>(best_a) / static_cast<double>(best_q);
  return r;
}

std::complex<double> DirichletCharacter::operator()(uint64_t m) const {
  int64_t k = expo_[m % q_];
  if (k < 0) return {0.0, 0.0};
  double theta = 2.0 * M_PI * static_cast<double>(k) / static_cast<double>(order_);
  return {std::cos(theta), std::sin(theta)};
}

namespace {

// (Z/p^e)^* structure: generator list + component orders. Odd p^e is cyclic;
// 2^e (e >= 3) is <-1> x <5>; 4 is <3>; 2 is trivial.
struct UnitGroup {
  uint64_t mod = 1;
  std::vector<uint64_t> gens;
  std::vector<uint64_t> orders;
};

uint64_t powmod(uint64_t b, uint64_t e, uint64_t m) {
  unsigned __int128 r = 1, x = b % m;
  while (e) {
    if (e & 1) r = r * x % m;
    x = x * x % m;
    e >>= 1;
  }
  return static_cast<uint64_t>(r);
}

uint64_t primitive_root(uint64_t p, uint64_t pe, uint64_t phi, const PrimeTable& pt) {
  auto fac = factorize(phi, pt);
  for (uint64_t g = 2; g < pe; ++g) {
    if (g % p == 0) continue;
    bool ok = true;
    for (auto& [q, e] : fac.factors)
      if (powmod(g, phi / q, pe) == 1) { ok = false; break; }
    if (ok) return g;
  }
  throw std::logic_error("primitive_root: none found");
}

}  // namespace

std::vector<DirichletCharacter> characters_mod(uint32_t q) {
  if (q < 1 || q > 100000) throw CapacityError("characters_mod: q out of range");
  PrimeTable pt(std::max<uint64_t>(q, 4));

  std::vector<UnitGroup> comps;
  auto fq = factorize(q, pt);
  for (auto& [p, e] : fq.factors) {
    uint64_t pe = 1;
    for (int i = 0; i < e; ++i) pe *= p;
    UnitGroup g;
    g.mod = pe;
    if (p == 2) {
      if (e == 1) {
        // trivial group
      } else if (e == 2) {
        g.gens = {3};
        g.orders = {2};
      } else {
        g.gens = {pe - 1, 5};
        g.orders = {2, pe / 4};
      }
    } else {
      uint64_t phi = pe / p * (p - 1);
      g.gens = {primitive_root(p, pe, phi, pt)};
      g.orders = {phi};
    }
    comps.push_back(std::move(g));
  }

  // discrete logs per component, by direct enumeration of generator powers
  struct DlogTable {
    uint64_t mod;
    std::vector<uint64_t> orders;
    std::vector<std::vector<uint32_t>> dlog;  // dlog[gen_index][residue]
  };
  std::vector<DlogTable> tables;
  for (auto& g : comps) {
    DlogTable t;
    t.mod = g.mod;
    t.orders = g.orders;
    if (g.gens.empty()) { tables.push_back(std::move(t)); continue; }
    if (g.gens.size() == 1) {
      t.dlog.assign(1, std::vector<uint32_t>(g.mod, 0));
      uint64_t x = 1;
      for (uint64_t k = 0; k < g.orders[0]; ++k) {
        t.dlog[0][x] = static_cast<uint32_t>(k);
        x = x * g.gens[0] % g.mod;
      }
    } else {
      // 2^e, e >= 3: every unit is (-1)^s * 5^k
      t.dlog.assign(2, std::vector<uint32_t>(g.mod, 0));
      uint64_t x = 1;
      for (uint64_t k = 0; k < g.orders[1]; ++k) {
        t.dlog[0][x] = 0; t.dlog[1][x] = static_cast<uint32_t>(k);
        uint64_t y = g.mod - x;
        t.dlog[0][y] = 1; t.dlog[1][y] = static_cast<uint32_t>(k);
        x = x * 5 % g.mod;
      }
    }
    tables.push_back(std::move(t));
  }

  // component orders flattened, in a fixed order
  std::vector<uint64_t> orders;
  for (auto& t : tables)
    for (uint64_t o : t.orders) orders.push_back(o);
  uint64_t order_lcm = 1;
  for (uint64_t o : orders) order_lcm = std::lcm(order_lcm, o);
  const uint64_t ncomp = orders.size();

  uint64_t phi_q = 1;
  for (uint64_t o : orders) phi_q *= o;

  // exponent vector of each unit residue
  std::vector<std::vector<uint32_t>> unit_dlog(q);
  for (uint32_t m = 0; m < q; ++m) {
    if (std::gcd<uint64_t>(m, q) != 1) continue;
    std::vector<uint32_t> v;
    for (auto& t : tables)
      for (size_t gi = 0; gi < t.orders.size(); ++gi)
        v.push_back(t.dlog[gi][m % t.mod]);
    unit_dlog[m] = std::move(v);
  }
  if (q == 1) unit_dlog.assign(1, std::vector<uint32_t>{});

  std::vector<DirichletCharacter> out;
  out.reserve(phi_q);
  std::vector<uint64_t> cvec(ncomp, 0);
  for (uint64_t idx = 0; idx < phi_q; ++idx) {
    DirichletCharacter chi;
    chi.q_ = std::max<uint32_t>(q, 1);
    chi.order_ = static_cast<uint32_t>(order_lcm);
    chi.expo_.assign(chi.q_, -1);
    bool principal = true;
    for (uint64_t c : cvec)
      if (c != 0) principal = false;
    chi.principal_ = principal;
    for (uint32_t m = 0; m < chi.q_; ++m) {
      if (q > 1 && std::gcd<uint64_t>(m, q) != 1) continue;
      uint64_t k = 0;
      const auto& v = unit_dlog[q == 1 ? 0 : m];
      for (uint64_t ci = 0; ci < ncomp; ++ci)
        k = (k + (cvec[ci] * v[ci] % orders[ci]) * (order_lcm / orders[ci])) % order_lcm;
      chi.expo_[m] = static_cast<int64_t>(k);
    }
    out.push_back(std::move(chi));
    // next exponent tuple
    for (uint64_t ci = 0; ci < ncomp; ++ci) {
      if (++cvec[ci] < orders[ci]) break;
      cvec[ci] = 0;
    }
  }
  // principal character first
  std::stable_partition(out.begin(), out.end(),
                        [](const DirichletCharacter& c) { return c.is_principal(); });
  return out;
}

}  // namespace psq
