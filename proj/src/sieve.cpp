#include "psq/sieve.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>

#include "json.hpp"
#include "psq/parallel.hpp"

namespace psq {

double SieveParams::threshold(double c0, double cs) const {
  return std::pow(P, c0 + cs * sigma);
}

SieveParams make_params(double sigma, double P) {
  if (!(sigma > 0.15 && sigma < 1.0 / 6.0))
    throw std::domain_error("make_params: sigma must lie in (3/20, 1/6)");
  if (!(P >= 16))
    throw std::domain_error("make_params: P >= 16 required");
  SieveParams s;
  s.sigma = sigma;
  s.P = P;
  s.z = std::pow(P, 1 - 6 * sigma);
  s.V = std::pow(P, 2 * sigma);
  s.W = std::pow(P, 1 - 4 * sigma);
  s.Y = std::pow(P, 1 - 3 * sigma);
  s.sqrtP = std::pow(P, 0.5);
  s.sqrtY = std::pow(P, 0.5 - 1.5 * sigma);
  s.good_lo1 = s.V;
  s.good_hi1 = s.W;
  s.good_lo2 = std::pow(P, 4 * sigma);
  s.good_hi2 = std::pow(P, 1 - 2 * sigma);
  s.interval_lo = P / 2;
  s.interval_hi = P;
  s.logP = std::log(P);
  s.degenerate_z = s.z < 2;
  return s;
}

namespace {

ExponentConstraint lf(std::initializer_list<int> coeffs, Rel rel, double c0,
                      double cs) {
  ExponentConstraint c;
  int i = 0;
  for (int v : coeffs) c.coeff[i++] = static_cast<int8_t>(v);
  c.rel = rel;
  c.c0 = c0;
  c.cs = cs;
  for (int j = 0; j < 5; ++j)
    if (c.coeff[j]) c.max_var = j;
  return c;
}

// threshold exponents
constexpr double Z0 = 1, ZS = -6;        // z = P^{1-6s}
constexpr double V0 = 0, VS = 2;         // V = P^{2s}
constexpr double W0 = 1, WS = -4;        // W = P^{1-4s}
constexpr double Y0 = 1, YS = -3;        // Y = P^{1-3s}
constexpr double H0 = 0.5, HS = 0;       // P^{1/2}
constexpr double SY0 = 0.5, SYS = -1.5;  // Y^{1/2}

SieveTerm make_term(std::string id, int arity, Inner inner,
                    std::vector<ExponentConstraint> extra, Gb gb = Gb::Whole,
                    int bad_over = 0) {
  SieveTerm t;
  t.id = std::move(id);
  t.arity = arity;
  t.inner = inner;
  t.gb = gb;
  t.bad_over = bad_over;
  for (int i = 0; i < arity; ++i) {
    ExponentConstraint c;  // u_i >= 1 - 6s  (p_i >= z)
    c.coeff[i] = 1;
    c.rel = Rel::Ge;
    c.c0 = Z0;
    c.cs = ZS;
    c.max_var = i;
    t.constraints.push_back(c);
  }
  for (int i = 1; i < arity; ++i) {
    ExponentConstraint c;  // u_i < u_{i-1}
    c.coeff[i] = 1;
    c.coeff[i - 1] = -1;
    c.rel = Rel::Lt;
    c.c0 = 0;
    c.cs = 0;
    c.max_var = i;
    t.constraints.push_back(c);
  }
  for (auto& c : extra) t.constraints.push_back(c);
  return t;
}

}  // namespace

const SieveTerm& Decomposition::term(const std::string& id) const {
  return catalog[term_index(id)];
}

int Decomposition::term_index(const std::string& id) const {
  for (size_t i = 0; i < catalog.size(); ++i)
    if (catalog[i].id == id) return static_cast<int>(i);
  throw std::out_of_range("Decomposition: unknown term id " + id);
}

const std::vector<SignedTerm>& Decomposition::rho(int j) const {
  switch (j) {
    case 1: return g1;
    case 2: return g2;
    case 3: return b1;
  }
  throw std::out_of_range("rho index must be 1, 2 or 3");
}

Decomposition build_decomposition(const SieveParams& params) {
  Decomposition d;
  d.params = params;
  auto& cat = d.catalog;

  // base decomposition of psi(m, P^{1/2})
  cat.push_back(make_term("psi1", 0, Inner::None, {}));
  cat.push_back(make_term("psi2", 1, Inner::LastVar, {lf({1}, Rel::Lt, V0, VS)}));
  cat.push_back(make_term("psi3", 1, Inner::LastVar,
                          {lf({1}, Rel::Ge, V0, VS), lf({1}, Rel::Le, W0, WS)}));
  cat.push_back(make_term("psi4", 1, Inner::LastVar,
                          {lf({1}, Rel::Gt, W0, WS), lf({1}, Rel::Lt, H0, HS)}));

  // psi2 = psi5 - psi6; psi6 split by p1*p2 ranges
  cat.push_back(make_term("psi5", 1, Inner::ZCut, {lf({1}, Rel::Lt, V0, VS)}));
  cat.push_back(make_term("psi6", 2, Inner::LastVar, {lf({1}, Rel::Lt, V0, VS)}));
  cat.push_back(make_term("psi7", 2, Inner::LastVar,
                          {lf({1}, Rel::Lt, V0, VS), lf({1, 1}, Rel::Lt, V0, VS)}));
  cat.push_back(make_term("psi8", 2, Inner::LastVar,
                          {lf({1}, Rel::Lt, V0, VS), lf({1, 1}, Rel::Ge, V0, VS),
                           lf({1, 1}, Rel::Le, W0, WS)}));
  cat.push_back(make_term("psi9", 2, Inner::LastVar,
                          {lf({1}, Rel::Lt, V0, VS), lf({1, 1}, Rel::Gt, W0, WS),
                           lf({1, 1}, Rel::Le, Y0, YS)}));
  cat.push_back(make_term("psi10", 2, Inner::LastVar,
                          {lf({1}, Rel::Lt, V0, VS), lf({1, 1}, Rel::Gt, Y0, YS)}));

  // psi7 = psi11 - psi12 + psi13
  std::vector<ExponentConstraint> c7 = {lf({1}, Rel::Lt, V0, VS),
                                        lf({1, 1}, Rel::Lt, V0, VS)};
  cat.push_back(make_term("psi11", 2, Inner::ZCut, c7));
  cat.push_back(make_term("psi12", 3, Inner::ZCut, c7));
  cat.push_back(make_term("psi13", 4, Inner::LastVar, c7));
  cat.push_back(make_term("psi13g", 4, Inner::LastVar, c7, Gb::Good));
  cat.push_back(make_term("psi13b", 4, Inner::LastVar, c7, Gb::Bad));

  // psi9 = psi14 - psi15 - psi16
  std::vector<ExponentConstraint> c9 = {lf({1}, Rel::Lt, V0, VS),
                                        lf({1, 1}, Rel::Gt, W0, WS),
                                        lf({1, 1}, Rel::Le, Y0, YS)};
  cat.push_back(make_term("psi14", 2, Inner::ZCut, c9));
  std::vector<ExponentConstraint> c15 = c9;
  c15.push_back(lf({1, 1, 1}, Rel::Le, Y0, YS));
  cat.push_back(make_term("psi15", 3, Inner::LastVar, c15));
  std::vector<ExponentConstraint> c16 = c9;
  c16.push_back(lf({1, 1, 1}, Rel::Gt, Y0, YS));
  cat.push_back(make_term("psi16", 3, Inner::LastVar, c16));
  cat.push_back(make_term("psi16g", 3, Inner::LastVar, c16, Gb::Good));
  cat.push_back(make_term("psi16b", 3, Inner::LastVar, c16, Gb::Bad));

  // psi15 = psi17 + psi18 - psi19 (split at p2*p3 vs V)
  std::vector<ExponentConstraint> c17 = c15;
  c17.push_back(lf({0, 1, 1}, Rel::Ge, V0, VS));
  cat.push_back(make_term("psi17", 3, Inner::LastVar, c17));
  std::vector<ExponentConstraint> c18 = c15;
  c18.push_back(lf({0, 1, 1}, Rel::Lt, V0, VS));
  cat.push_back(make_term("psi18", 3, Inner::ZCut, c18));
  cat.push_back(make_term("psi19", 4, Inner::LastVar, c18));
  cat.push_back(make_term("psi19g", 4, Inner::LastVar, c18, Gb::Good));
  cat.push_back(make_term("psi19b", 4, Inner::LastVar, c18, Gb::Bad));

  // second route: psi2 = psi20 + psi21
  cat.push_back(make_term("psi20", 1, Inner::LastVar, {lf({1}, Rel::Le, SY0, SYS)}));
  cat.push_back(make_term("psi21", 1, Inner::LastVar,
                          {lf({1}, Rel::Gt, SY0, SYS), lf({1}, Rel::Lt, V0, VS)}));

  // psi20 = psi22 - psi23 + psi24
  std::vector<ExponentConstraint> c20 = {lf({1}, Rel::Le, SY0, SYS)};
  cat.push_back(make_term("psi22", 1, Inner::ZCut, c20));
  cat.push_back(make_term("psi23", 2, Inner::ZCut, c20));
  cat.push_back(make_term("psi24", 3, Inner::LastVar, c20));
  cat.push_back(make_term("psi24g", 3, Inner::LastVar, c20, Gb::Good));
  cat.push_back(make_term("psi24b", 3, Inner::LastVar, c20, Gb::Bad));

  // psi24^b = psi25 + psi26 (split at p1*p2*p3^2 vs Y); the bad condition
  // over p1,p2,p3 is inherited by everything derived from psi25
  std::vector<ExponentConstraint> c25 = c20;
  c25.push_back(lf({1, 1, 2}, Rel::Le, Y0, YS));
  cat.push_back(make_term("psi25", 3, Inner::LastVar, c25, Gb::Whole, 3));
  std::vector<ExponentConstraint> c26 = c20;
  c26.push_back(lf({1, 1, 2}, Rel::Gt, Y0, YS));
  cat.push_back(make_term("psi26", 3, Inner::LastVar, c26, Gb::Whole, 3));
  cat.push_back(make_term("psi26g", 3, Inner::LastVar, c26, Gb::Good, 3));
  cat.push_back(make_term("psi26b", 3, Inner::LastVar, c26, Gb::Bad, 3));

  // psi25 = psi27 - psi28 + psi29
  cat.push_back(make_term("psi27", 3, Inner::ZCut, c25, Gb::Whole, 3));
  cat.push_back(make_term("psi28", 4, Inner::ZCut, c25, Gb::Whole, 3));
  cat.push_back(make_term("psi29", 5, Inner::LastVar, c25, Gb::Whole, 3));
  cat.push_back(make_term("psi29g", 5, Inner::LastVar, c25, Gb::Good, 3));
  cat.push_back(make_term("psi29b", 5, Inner::LastVar, c25, Gb::Bad, 3));

  for (auto& t : cat)
    for (auto& c : t.constraints) c.thr = params.threshold(c.c0, c.cs);

  auto at = [&](const char* id, int sign) {
    return SignedTerm{d.term_index(id), sign};
  };
  d.g1 = {at("psi1", +1),  at("psi3", -1),   at("psi5", -1),  at("psi8", +1),
          at("psi11", +1), at("psi12", -1),  at("psi13g", +1), at("psi14", +1),
          at("psi16g", -1), at("psi17", -1), at("psi18", -1), at("psi19g", +1)};
  d.b1 = {at("psi4", +1), at("psi16b", +1)};
  d.b2 = {at("psi10", +1), at("psi13b", +1), at("psi19b", +1)};
  // psi26g is identically zero (its good tag contradicts the inherited bad
  // condition over the same three variables); kept for structural fidelity
  d.g2 = {at("psi1", +1),  at("psi3", -1),  at("psi22", -1),
          at("psi23", +1), at("psi24g", -1), at("psi26g", -1),
          at("psi27", -1), at("psi28", +1), at("psi29g", -1)};
  d.b3 = {at("psi4", +1), at("psi21", +1), at("psi26b", +1), at("psi29b", +1)};
  return d;
}

namespace {

inline bool rel_holds(long double lhs, long double rhs, Rel rel) {
  switch (rel) {
    case Rel::Lt: return lhs < rhs;
    case Rel::Le: return lhs <= rhs;
    case Rel::Ge: return lhs >= rhs;
    case Rel::Gt: return lhs > rhs;
  }
  return false;
}

inline bool check_constraint(const ExponentConstraint& c,
                             const std::array<uint64_t, 5>& p) {
  long double lhs = 1.0L, rhsm = 1.0L;
  for (int i = 0; i <= c.max_var; ++i) {
    int a = c.coeff[i];
    while (a > 0) { lhs *= static_cast<long double>(p[i]); --a; }
    while (a < 0) { rhsm *= static_cast<long double>(p[i]); ++a; }
  }
  return rel_holds(lhs, static_cast<long double>(c.thr) * rhsm, c.rel);
}

inline bool in_good_ranges(double x, const SieveParams& pp) {
  return (x >= pp.good_lo1 && x <= pp.good_hi1) ||
         (x >= pp.good_lo2 && x <= pp.good_hi2);
}

// true iff some nonempty subproduct of p[0..nvars) lies in the good ranges
inline bool any_good_subproduct(const std::array<uint64_t, 5>& p, int nvars,
                                const SieveParams& pp) {
  const int nmask = (1 << nvars) - 1;
  for (int mask = 1; mask <= nmask; ++mask) {
    uint64_t prod = 1;
    for (int i = 0; i < nvars; ++i)
      if (mask & (1 << i)) prod *= p[i];
    if (in_good_ranges(static_cast<double>(prod), pp)) return true;
  }
  return false;
}

}  // namespace

TermEvaluator::Factors TermEvaluator::factor(uint64_t m) const {
  if (pt_.limit() * pt_.limit() < m)
    throw CapacityError("TermEvaluator: m exceeds factorable range");
  Factors f;
  uint64_t rem = m;
  for (uint64_t p : pt_.primes()) {
    if (p * p > rem) break;
    if (rem % p == 0) {
      int e = 0;
      do { rem /= p; ++e; } while (rem % p == 0);
      f.prime[f.count] = p;
      f.exp[f.count] = e;
      ++f.count;
    }
  }
  if (rem > 1) {
    f.prime[f.count] = rem;
    f.exp[f.count] = 1;
    ++f.count;
  }
  return f;
}

int64_t TermEvaluator::eval_with_factors(const SieveTerm& t, uint64_t m,
                                         const Factors& f) const {
  const SieveParams& pp = d_.params;
  if (t.arity == 0) {
    // psi(m, z)
    if (m == 1) return 1;
    return static_cast<double>(f.prime[0]) >= pp.z ? 1 : 0;
  }
  if (f.count < t.arity) return 0;

  int64_t count = 0;
  std::array<uint64_t, 5> chosen{};
  std::array<int, 5> chosen_idx{};

  // choose strictly decreasing prime divisors; descending index order in the
  // ascending factor list keeps the chain constraints automatic
  auto rec = [&](auto&& self, int level, int max_idx) -> void {
    if (level == t.arity) {
      if (t.bad_over > 0 && any_good_subproduct(chosen, t.bad_over, pp)) return;
      if (t.gb != Gb::Whole) {
        bool good = any_good_subproduct(chosen, t.arity, pp);
        if ((t.gb == Gb::Good) != good) return;
      }
      uint64_t used = m;
      for (int i = 0; i < t.arity; ++i) used /= chosen[i];
      // smallest prime factor of the cofactor
      uint64_t spf = 0;
      if (used > 1) {
        for (int i = 0; i < f.count; ++i) {
          int rem_exp = f.exp[i];
          for (int l = 0; l < t.arity; ++l)
            if (chosen_idx[l] == i) --rem_exp;
          if (rem_exp > 0) { spf = f.prime[i]; break; }
        }
      }
      bool pass;
      if (used == 1) {
        pass = true;
      } else if (t.inner == Inner::ZCut) {
        pass = static_cast<double>(spf) >= pp.z;
      } else {  // LastVar
        pass = spf >= chosen[t.arity - 1];
      }
      if (pass) ++count;
      return;
    }
    for (int idx = max_idx; idx >= t.arity - 1 - level; --idx) {
      chosen[level] = f.prime[idx];
      chosen_idx[level] = idx;
      bool ok = true;
      for (const auto& c : t.constraints)
        if (c.max_var == level && !check_constraint(c, chosen)) { ok = false; break; }
      if (!ok) continue;
      self(self, level + 1, idx - 1);
    }
  };
  rec(rec, 0, f.count - 1);
  return count;
}

int64_t TermEvaluator::eval_term(const SieveTerm& t, uint64_t m) const {
  return eval_with_factors(t, m, factor(m));
}

int64_t TermEvaluator::eval_term(const std::string& id, uint64_t m) const {
  return eval_term(d_.term(id), m);
}

int64_t TermEvaluator::eval_list(const std::vector<SignedTerm>& list,
                                 uint64_t m) const {
  auto f = factor(m);
  int64_t s = 0;
  for (const auto& st : list)
    s += st.sign * eval_with_factors(d_.catalog[st.term_index], m, f);
  return s;
}

int64_t TermEvaluator::eval_rho(int j, uint64_t m) const {
  return eval_list(d_.rho(j), m);
}

int TermEvaluator::eval_psi_sqrtP(uint64_t m) const {
  if (m == 1) return 1;
  auto f = factor(m);
  return static_cast<double>(f.prime[0]) >= d_.params.sqrtP ? 1 : 0;
}

TermEvaluator::ListValues TermEvaluator::eval_all_lists(uint64_t m) const {
  ListValues v;
  const SieveParams& pp = d_.params;
  auto f = factor(m);
  double spf = m == 1 ? pp.P : static_cast<double>(f.prime[0]);
  v.psi = (m == 1 || spf >= pp.sqrtP) ? 1 : 0;
  if (m > 1 && spf < pp.z) return v;  // every weight vanishes off z-rough support

  std::array<int64_t, 64> memo;
  std::array<bool, 64> have{};
  auto term_val = [&](const SignedTerm& st) {
    if (!have[st.term_index]) {
      memo[st.term_index] = eval_with_factors(d_.catalog[st.term_index], m, f);
      have[st.term_index] = true;
    }
    return st.sign * memo[st.term_index];
  };
  for (const auto& st : d_.g1) v.g1 += term_val(st);
  for (const auto& st : d_.b1) v.b1 += term_val(st);
  for (const auto& st : d_.b2) v.b2 += term_val(st);
  for (const auto& st : d_.g2) v.g2 += term_val(st);
  for (const auto& st : d_.b3) v.b3 += term_val(st);
  return v;
}

IdentityReport verify_identities(const TermEvaluator& ev, uint64_t m_lo,
                                 uint64_t m_hi, unsigned jobs) {
  IdentityReport total;
  if (jobs == 0) jobs = 1;
  std::vector<IdentityReport> parts(jobs);
  parallel_chunks(m_lo, m_hi, jobs, [&](unsigned c, uint64_t lo, uint64_t hi) {
    IdentityReport& r = parts[c];
    for (uint64_t m = lo; m < hi; ++m) {
      auto v = ev.eval_all_lists(m);
      ++r.checked;
      bool bad = false;
      if (v.psi != v.g1 - v.b1 + v.b2) { ++r.violations_eq0; bad = true; }
      if (v.psi != v.g2 - v.b3) { ++r.violations_eq0a; bad = true; }
      if (v.b1 < 0 || v.b2 < 0 || v.b3 < 0) { ++r.violations_nonneg; bad = true; }
      if (bad && r.sample_violations.size() < 16) r.sample_violations.push_back(m);
    }
  });
  for (auto& r : parts) {
    total.checked += r.checked;
    total.violations_eq0 += r.violations_eq0;
    total.violations_eq0a += r.violations_eq0a;
    total.violations_nonneg += r.violations_nonneg;
    for (uint64_t m : r.sample_violations)
      if (total.sample_violations.size() < 16) total.sample_violations.push_back(m);
  }
  return total;
}

InequalityReport verify_inequality(const TermEvaluator& ev, uint64_t n_pairs,
                                   uint64_t seed) {
  const SieveParams& pp = ev.decomposition().params;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<uint64_t> dist(pp.m_lo(), pp.m_hi() - 1);
  InequalityReport rep;
  for (uint64_t i = 0; i < n_pairs; ++i) {
    uint64_t m = dist(rng), k = dist(rng);
    auto vm = ev.eval_all_lists(m);
    auto vk = ev.eval_all_lists(k);
    int64_t lhs = static_cast<int64_t>(vm.psi) * vk.psi;
    int64_t rhs = vm.g1 * vk.psi - vm.b1 * vk.g2;
    ++rep.checked;
    if (lhs < rhs) {
      ++rep.violations;
      if (rep.sample_violations.size() < 16) rep.sample_violations.emplace_back(m, k);
    }
  }
  return rep;
}

DensitySum density_sum(const TermEvaluator& ev, int j, uint64_t u, uint64_t v,
                       double Cj, unsigned jobs) {
  if (jobs == 0) jobs = 1;
  std::vector<int64_t> parts(jobs, 0);
  parallel_chunks(u + 1, v + 1, jobs, [&](unsigned c, uint64_t lo, uint64_t hi) {
    int64_t s = 0;
    for (uint64_t m = lo; m < hi; ++m) {
      if (j == 0) {
        s += ev.eval_psi_sqrtP(m);
      } else {
        auto vals = ev.eval_all_lists(m);
        s += j == 1 ? vals.g1 : (j == 2 ? vals.g2 : vals.b1);
      }
    }
    parts[c] = s;
  });
  DensitySum out;
  for (int64_t s : parts) out.sum += s;
  out.main_term = Cj * static_cast<double>(v - u) / ev.decomposition().params.logP;
  out.ratio = out.main_term != 0 ? static_cast<double>(out.sum) / out.main_term : 0;
  return out;
}

CharSum char_sum_check(const TermEvaluator& ev, int j,
                       const DirichletCharacter& chi, uint64_t u, uint64_t v) {
  CharSum out;
  std::complex<double> s{0, 0};
  for (uint64_t m = u + 1; m <= v; ++m) {
    int64_t w;
    if (j == 0) {
      w = ev.eval_psi_sqrtP(m);
    } else {
      auto vals = ev.eval_all_lists(m);
      w = j == 1 ? vals.g1 : (j == 2 ? vals.g2 : vals.b1);
    }
    if (w != 0) s += static_cast<double>(w) * chi(m);
  }
  out.sum = s;
  out.trivial_bound = static_cast<double>(v - u);
  out.ratio = std::abs(s) / out.trivial_bound;
  return out;
}

// ---------------------------------------------------------------------------
// exponent-polytope ranges via vertex enumeration (dimensions <= 5)

namespace {

struct HalfSpace {
  std::array<double, 5> a{};
  double b = 0;  // a . u <= b
};

std::vector<HalfSpace> half_spaces(const SieveTerm& t, const SieveParams& pp) {
  std::vector<HalfSpace> hs;
  for (const auto& c : t.constraints) {
    HalfSpace h;
    double rhs = c.exponent_rhs(pp.sigma);
    bool flip = (c.rel == Rel::Ge || c.rel == Rel::Gt);
    for (int i = 0; i < 5; ++i)
      h.a[i] = flip ? -static_cast<double>(c.coeff[i]) : static_cast<double>(c.coeff[i]);
    h.b = flip ? -rhs : rhs;
    hs.push_back(h);
  }
  for (int i = 0; i < t.arity; ++i) {
    HalfSpace up;  up.a[i] = 1;  up.b = 1;
    HalfSpace dn;  dn.a[i] = -1; dn.b = 0;
    hs.push_back(up);
    hs.push_back(dn);
  }
  return hs;
}

std::vector<std::array<double, 5>> polytope_vertices(const SieveTerm& t,
                                                     const SieveParams& pp) {
  const int dim = t.arity;
  auto hs = half_spaces(t, pp);
  const int m = static_cast<int>(hs.size());
  std::vector<std::array<double, 5>> verts;
  std::vector<int> pick(dim);

  auto try_combo = [&](const std::vector<int>& idx) {
    double A[5][6];
    for (int r = 0; r < dim; ++r) {
      for (int c = 0; c < dim; ++c) A[r][c] = hs[idx[r]].a[c];
      A[r][dim] = hs[idx[r]].b;
    }
    // Gaussian elimination with partial pivoting
    for (int col = 0; col < dim; ++col) {
      int piv = col;
      for (int r = col + 1; r < dim; ++r)
        if (std::fabs(A[r][col]) > std::fabs(A[piv][col])) piv = r;
      if (std::fabs(A[piv][col]) < 1e-12) return;
      for (int c = 0; c <= dim; ++c) std::swap(A[col][c], A[piv][c]);
      for (int r = 0; r < dim; ++r) {
        if (r == col) continue;
        double f = A[r][col] / A[col][col];
        for (int c = col; c <= dim; ++c) A[r][c] -= f * A[col][c];
      }
    }
    std::array<double, 5> x{};
    for (int r = 0; r < dim; ++r) x[r] = A[r][dim] / A[r][r];
    for (const auto& h : hs) {
      double s = 0;
      for (int i = 0; i < dim; ++i) s += h.a[i] * x[i];
      if (s > h.b + 1e-9) return;
    }
    verts.push_back(x);
  };

  auto rec = [&](auto&& self, int start, int depth) -> void {
    if (depth == dim) {
      try_combo(pick);
      return;
    }
    for (int i = start; i < m; ++i) {
      pick[depth] = i;
      self(self, i + 1, depth + 1);
    }
  };
  if (dim > 0) rec(rec, 0, 0);
  return verts;
}

}  // namespace

LinRange exponent_range(const SieveTerm& t, const SieveParams& p,
                        const std::array<int, 5>& objective) {
  auto verts = polytope_vertices(t, p);
  if (verts.empty()) return {0, 0};
  double lo = 1e300, hi = -1e300;
  for (const auto& v : verts) {
    double s = 0;
    for (int i = 0; i < t.arity; ++i) s += objective[i] * v[i];
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  return {lo, hi};
}

std::vector<BilinearClass> bilinear_split(const Decomposition& d, int j) {
  std::vector<BilinearClass> out;
  const auto& pp = d.params;
  for (const auto& st : d.rho(j)) {
    const SieveTerm& t = d.catalog[st.term_index];
    BilinearClass bc;
    bc.term_id = t.id;
    auto verts = polytope_vertices(t, pp);

    auto mask_range = [&](int mask) {
      double lo = 1e300, hi = -1e300;
      for (const auto& v : verts) {
        double s = 0;
        for (int i = 0; i < t.arity; ++i)
          if (mask & (1 << i)) s += v[i];
        lo = std::min(lo, s);
        hi = std::max(hi, s);
      }
      return std::pair<double, double>{lo, hi};
    };

    // prefer the largest subproduct provably inside [P^0.06, P^0.94]
    if (!verts.empty()) {
      for (int size = t.arity; size >= 1 && !bc.type2; --size) {
        for (int mask = 1; mask < (1 << t.arity); ++mask) {
          if (std::popcount(static_cast<unsigned>(mask)) != size) continue;
          auto [lo, hi] = mask_range(mask);
          if (lo >= 0.06 && hi <= 0.94) {
            bc.type2 = true;
            bc.range_lo = lo;
            bc.range_hi = hi;
            std::string w;
            for (int i = 0; i < t.arity; ++i)
              if (mask & (1 << i)) {
                if (!w.empty()) w += "*";
                w += "p" + std::to_string(i + 1);
              }
            bc.witness = w;
            break;
          }
        }
      }
      if (!bc.type2 && t.inner == Inner::LastVar) {
        // the rough cofactor as the confined factor
        auto [slo, shi] = mask_range((1 << t.arity) - 1);
        double clo = 1.0 - shi - std::log(2.0) / pp.logP;
        double chi = 1.0 - slo;
        if (clo >= 0.06 && chi <= 0.94) {
          bc.type2 = true;
          bc.witness = "cofactor";
          bc.range_lo = clo;
          bc.range_hi = chi;
        }
      }
    }
    if (!bc.type2 && (t.inner == Inner::ZCut || t.inner == Inner::None)) {
      // Moebius expansion over the z-smooth part: the d <= P^0.06 branch is
      // type I with v >= P^0.94 (up to the dyadic width of I); larger d admit
      // a z-granular divisor window inside [P^0.06, P^0.94]
      double sum_hi = 0;
      if (!verts.empty()) {
        for (const auto& v : verts) {
          double s = 0;
          for (int i = 0; i < t.arity; ++i) s += v[i];
          sum_hi = std::max(sum_hi, s);
        }
      }
      bc.type1_branch = (1.0 - sum_hi - 0.06 - std::log(2.0) / pp.logP >= 0.9);
      bc.witness = "moebius-smooth-window";
      bc.range_lo = 0.06;
      bc.range_hi = 0.06 + (1 - 6 * pp.sigma);
      bc.type2 = !bc.type1_branch;  // windowed branches are type II
    }
    out.push_back(bc);
  }
  return out;
}

std::string decomposition_to_json(const Decomposition& d) {
  nlohmann::json root;
  root["sigma"] = d.params.sigma;
  root["P"] = d.params.P;
  root["thresholds"] = {{"z", d.params.z}, {"V", d.params.V},
                        {"W", d.params.W}, {"Y", d.params.Y}};
  auto rel_name = [](Rel r) {
    switch (r) {
      case Rel::Lt: return "<";
      case Rel::Le: return "<=";
      case Rel::Ge: return ">=";
      case Rel::Gt: return ">";
    }
    return "?";
  };
  auto inner_name = [](Inner i) {
    switch (i) {
      case Inner::None: return "none";
      case Inner::ZCut: return "z_cut";
      case Inner::LastVar: return "last_var";
    }
    return "?";
  };
  auto gb_name = [](Gb g) {
    switch (g) {
      case Gb::Whole: return "whole";
      case Gb::Good: return "good";
      case Gb::Bad: return "bad";
    }
    return "?";
  };
  auto dump_list = [&](const std::vector<SignedTerm>& list) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& st : list) {
      const SieveTerm& t = d.catalog[st.term_index];
      nlohmann::json jt;
      jt["id"] = t.id;
      jt["sign"] = st.sign;
      jt["arity"] = t.arity;
      jt["inner"] = inner_name(t.inner);
      jt["gb"] = gb_name(t.gb);
      jt["bad_over"] = t.bad_over;
      nlohmann::json cons = nlohmann::json::array();
      for (const auto& c : t.constraints) {
        nlohmann::json jc;
        std::vector<int> coeff(c.coeff.begin(), c.coeff.begin() + t.arity);
        jc["coeff"] = coeff;
        jc["rel"] = rel_name(c.rel);
        jc["c0"] = c.c0;
        jc["c_sigma"] = c.cs;
        cons.push_back(jc);
      }
      jt["constraints"] = cons;
      arr.push_back(jt);
    }
    return arr;
  };
  root["g1"] = dump_list(d.g1);
  root["b1"] = dump_list(d.b1);
  root["b2"] = dump_list(d.b2);
  root["g2"] = dump_list(d.g2);
  root["b3"] = dump_list(d.b3);
  return root.dump(2);
}

}  // namespace psq
