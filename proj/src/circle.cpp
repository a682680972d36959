#include "psq/circle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace psq {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

inline std::complex<double> e_of(long double x) {
  long double f = fmodl(x, 1.0L);
  if (f < 0) f += 1.0L;
  double th = static_cast<double>(f) * kTwoPi;
  return {std::cos(th), std::sin(th)};
}

// Gauss-Legendre nodes/weights on [-1,1] by Newton iteration
void gl_nodes(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0);
  w.assign(n, 0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double p0, p1, dp;
    for (int it = 0; it < 100; ++it) {
      p0 = 1;
      p1 = t;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (t * p1 - p0) / (t * t - 1);
      double dt = p1 / dp;
      t -= dt;
      if (std::fabs(dt) < 1e-15) break;
    }
    x[i] = -t;
    x[n - 1 - i] = t;
    w[i] = w[n - 1 - i] = 2.0 / ((1 - t * t) * dp * dp);
  }
}

const std::vector<double>& gl16_x() {
  static std::vector<double> x, w;
  if (x.empty()) gl_nodes(16, x, w);
  return x;
}
const std::vector<double>& gl16_w() {
  static std::vector<double> x, w;
  if (w.empty()) gl_nodes(16, x, w);
  return w;
}

template <typename F>
double gl16(F&& f, double a, double b) {
  const auto& x = gl16_x();
  const auto& w = gl16_w();
  double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double s = 0;
  for (int i = 0; i < 16; ++i) s += w[i] * f(mid + half * x[i]);
  return s * half;
}

}  // namespace

ArcClassification classify_arc(double alpha, double P, double Q) {
  ArcClassification out;
  const double P2 = P * P;
  uint64_t denom_bound = static_cast<uint64_t>(std::max(1.0, P2 / Q));
  RationalApprox ap = diophantine_approx(alpha, denom_bound);
  out.a = ap.a;
  out.q = ap.q;
  double qd = static_cast<double>(ap.q);
  if (qd <= Q && std::fabs(ap.err) <= Q / (qd * P2)) out.major = true;

  // auxiliary dissection N = M(P^{2/3}) and the Delta weight
  const double Q2 = std::pow(P, 2.0 / 3.0);
  RationalApprox ap2 = diophantine_approx(
      alpha, static_cast<uint64_t>(std::max(1.0, std::pow(P, 4.0 / 3.0))));
  double q2 = static_cast<double>(ap2.q);
  double qerr = std::fabs(ap2.err) * q2;  // |q alpha - a|
  if (q2 <= Q2 && qerr <= std::pow(P, -4.0 / 3.0)) {
    out.in_aux = true;
    double N = 2.25 * P * P;
    out.delta = 1.0 / (q2 + N * qerr);
  }
  return out;
}

std::vector<int32_t> rho_values(const TermEvaluator& ev, int j) {
  const SieveParams& pp = ev.decomposition().params;
  uint64_t lo = pp.m_lo(), hi = pp.m_hi();
  std::vector<int32_t> out(hi - lo);
  for (uint64_t m = lo; m < hi; ++m) {
    if (j == 0) {
      out[m - lo] = static_cast<int32_t>(ev.eval_psi_sqrtP(m));
    } else {
      auto v = ev.eval_all_lists(m);
      int64_t w = j == 1 ? v.g1 : (j == 2 ? v.g2 : v.b1);
      out[m - lo] = static_cast<int32_t>(w);
    }
  }
  return out;
}

std::complex<double> exp_sum(const std::vector<int32_t>& rho, uint64_t m_lo,
                             double alpha) {
  std::complex<double> s{0, 0};
  for (size_t i = 0; i < rho.size(); ++i) {
    if (rho[i] == 0) continue;
    uint64_t m = m_lo + i;
    long double phase = static_cast<long double>(m) * m * alpha;
    s += static_cast<double>(rho[i]) * e_of(phase);
  }
  return s;
}

GaussSumValue gauss_sum(uint64_t q, int64_t a) {
  GaussSumValue out;
  out.q = q;
  out.a = a;
  if (q == 1) {
    out.value = {1, 0};
    return out;
  }
  int64_t am = a % static_cast<int64_t>(q);
  if (am < 0) am += static_cast<int64_t>(q);
  std::complex<double> s{0, 0};
  for (uint64_t r = 1; r <= q; ++r) {
    if (std::gcd(r, q) != 1) continue;
    uint64_t t = static_cast<uint64_t>(am) % q * (r % q) % q * (r % q) % q;
    double th = kTwoPi * static_cast<double>(t) / static_cast<double>(q);
    s += std::complex<double>(std::cos(th), std::sin(th));
  }
  out.value = s;
  return out;
}

double local_density(uint64_t n, uint64_t p, int k) {
  uint64_t pk = 1;
  for (int i = 0; i < k; ++i) pk *= p;
  // counts of squares of units
  std::vector<uint64_t> r1(pk, 0);
  for (uint64_t x = 1; x < pk; ++x) {
    if (x % p == 0) continue;
    r1[x * x % pk] += 1;
  }
  std::vector<uint64_t> r2(pk, 0);
  for (uint64_t a = 0; a < pk; ++a) {
    if (!r1[a]) continue;
    for (uint64_t b = 0; b < pk; ++b) {
      if (!r1[b]) continue;
      r2[(a + b) % pk] += r1[a] * r1[b];
    }
  }
  uint64_t target = n % pk;
  unsigned __int128 count = 0;
  for (uint64_t a = 0; a < pk; ++a) {
    if (!r2[a]) continue;
    uint64_t b = (target + pk - a) % pk;
    count += static_cast<unsigned __int128>(r2[a]) * r2[b];
  }
  double phi_pk = static_cast<double>(pk) / p * (p - 1);
  double norm = std::pow(static_cast<double>(pk) / phi_pk, 4.0) /
                std::pow(static_cast<double>(p), 3.0 * k);
  return static_cast<double>(count) * norm;
}

SingularSeriesValue singular_series(uint64_t n, uint32_t p_max, uint32_t q_max,
                                    const PrimeTable& pt) {
  SingularSeriesValue out;
  out.n = n;
  out.p_max = p_max;
  out.q_max = q_max;

  double euler = 1.0;
  for (uint64_t p : pt.primes()) {
    if (p > p_max) break;
    double sp = local_density(n, p, p == 2 ? 3 : 1);
    if (p == 2) out.sigma2 = sp;
    if (p == 3) out.sigma3 = sp;
    euler *= sp;
  }
  out.euler_value = euler;
  out.tail_estimate = 8.0 / static_cast<double>(p_max);

  // independent route: A(q) = phi(q)^{-4} sum_{(a,q)=1} S(q,a)^4 e_q(-a n)
  double qsum = 0;
  for (uint64_t q = 1; q <= q_max; ++q) {
    // square counts over units mod q
    std::vector<uint32_t> sq(q, 0);
    uint64_t phi = 0;
    for (uint64_t r = 1; r <= q; ++r)
      if (std::gcd(r, q) == 1) {
        sq[r * r % q] += 1;
        ++phi;
      }
    std::vector<std::complex<double>> root(q);
    for (uint64_t t = 0; t < q; ++t) {
      double th = kTwoPi * static_cast<double>(t) / static_cast<double>(q);
      root[t] = {std::cos(th), std::sin(th)};
    }
    double contrib = 0;
    for (uint64_t a = 1; a <= q; ++a) {
      if (std::gcd(a, q) != 1) continue;
      std::complex<double> S{0, 0};
      for (uint64_t t = 0; t < q; ++t)
        if (sq[t]) S += static_cast<double>(sq[t]) * root[a * t % q];
      std::complex<double> S4 = S * S * S * S;
      uint64_t an = a % q * (n % q) % q;
      contrib += (S4 * std::conj(root[an])).real();
    }
    double phid = static_cast<double>(phi);
    qsum += contrib / (phid * phid * phid * phid);
  }
  out.qsum_value = qsum;
  out.agreement_gap = std::fabs(out.euler_value - out.qsum_value);
  return out;
}

namespace {

// density of x^2 with x uniform(ish) on [1/3, 2/3]: g(s) = 1/(2 sqrt s) on
// [1/9, 4/9]; g2 = g*g has a closed form via asin
double g2_density(double s) {
  constexpr double a = 1.0 / 9.0, b = 4.0 / 9.0;
  if (s <= 2 * a || s >= 2 * b) return 0;
  double tlo = std::max(a, s - b);
  double thi = std::min(b, s - a);
  if (thi <= tlo) return 0;
  double rhi = std::sqrt(std::min(1.0, thi / s));
  double rlo = std::sqrt(std::max(0.0, tlo / s));
  return 0.5 * (std::asin(rhi) - std::asin(rlo));
}

}  // namespace

double singular_integral(double t) {
  constexpr double lo = 2.0 / 9.0, hi = 8.0 / 9.0, mid = 5.0 / 9.0;
  double a = std::max(lo, t - hi);
  double b = std::min(hi, t - lo);
  if (b <= a) return 0;
  // panel breakpoints: kinks of g2 at {2/9, 5/9, 8/9} for both factors
  double pts[8] = {a, b, mid, t - mid, lo, hi, t - lo, t - hi};
  std::vector<double> bp;
  for (double x : pts)
    if (x >= a - 1e-15 && x <= b + 1e-15) bp.push_back(std::min(std::max(x, a), b));
  std::sort(bp.begin(), bp.end());
  bp.erase(std::unique(bp.begin(), bp.end(),
                       [](double x, double y) { return std::fabs(x - y) < 1e-14; }),
           bp.end());
  double s = 0;
  for (size_t i = 0; i + 1 < bp.size(); ++i)
    s += gl16([&](double tau) { return g2_density(tau) * g2_density(t - tau); },
              bp[i], bp[i + 1]);
  return s;
}

namespace {

// Fourier transform of g: ghat(gamma) = int g(s) e(s gamma) ds, composite
// GL with enough panels to resolve the (linear) phase
std::complex<double> g_hat(double gamma) {
  constexpr double a = 1.0 / 9.0, b = 4.0 / 9.0;
  int panels = 8 + static_cast<int>(std::fabs(gamma) * (b - a) * 3);
  std::complex<double> s{0, 0};
  const auto& x = gl16_x();
  const auto& w = gl16_w();
  double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    double lo = a + p * h;
    double mid = lo + 0.5 * h, half = 0.5 * h;
    for (int i = 0; i < 16; ++i) {
      double sv = mid + half * x[i];
      s += w[i] * half / (2 * std::sqrt(sv)) * e_of(sv * gamma);
    }
  }
  return s;
}

struct OscCache {
  double gamma_max = 0;
  std::vector<double> node_gamma, node_weight;
  std::vector<std::complex<double>> ghat4;
};

const OscCache& osc_cache(double gamma_max) {
  static OscCache cache;
  if (cache.gamma_max != gamma_max) {
    cache.gamma_max = gamma_max;
    cache.node_gamma.clear();
    cache.node_weight.clear();
    cache.ghat4.clear();
    const double panel = 0.25;
    int npan = static_cast<int>(std::ceil(gamma_max / panel));
    const auto& x = gl16_x();
    const auto& w = gl16_w();
    for (int p = 0; p < npan; ++p) {
      double lo = p * panel, hi = std::min(gamma_max, lo + panel);
      double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
      for (int i = 0; i < 16; ++i) {
        double g = mid + half * x[i];
        cache.node_gamma.push_back(g);
        cache.node_weight.push_back(w[i] * half);
        std::complex<double> gh = g_hat(g);
        std::complex<double> gh2 = gh * gh;
        cache.ghat4.push_back(gh2 * gh2);
      }
    }
  }
  return cache;
}

}  // namespace

double singular_integral_osc(double t, double gamma_max) {
  const OscCache& c = osc_cache(gamma_max);
  double s = 0;
  for (size_t i = 0; i < c.node_gamma.size(); ++i) {
    std::complex<double> term = c.ghat4[i] * e_of(-t * c.node_gamma[i]);
    s += c.node_weight[i] * term.real();
  }
  return 2 * s;  // the integrand is conjugate-symmetric in gamma
}

SingularIntegralFn::SingularIntegralFn(size_t grid_points) {
  lo_ = 4.0 / 9.0;
  hi_ = 16.0 / 9.0;
  values_.resize(grid_points);
  step_ = (hi_ - lo_) / static_cast<double>(grid_points - 1);
  for (size_t i = 0; i < grid_points; ++i)
    values_[i] = singular_integral(lo_ + static_cast<double>(i) * step_);
}

double SingularIntegralFn::operator()(double t) const {
  if (t <= lo_ || t >= hi_) return 0;
  double x = (t - lo_) / step_;
  size_t i = static_cast<size_t>(x);
  if (i + 1 >= values_.size()) return values_.back();
  double f = x - static_cast<double>(i);
  return values_[i] * (1 - f) + values_[i + 1] * f;
}

double SingularIntegralFn::total_mass() const {
  // composite Simpson over an odd prefix, trapezoid on a leftover interval
  size_t n = values_.size();
  size_t m = (n % 2 == 1) ? n : n - 1;
  double s = values_[0] + values_[m - 1];
  for (size_t i = 1; i + 1 < m; ++i) s += values_[i] * (i % 2 ? 4.0 : 2.0);
  double mass = s * step_ / 3.0;
  if (m != n) mass += 0.5 * step_ * (values_[n - 2] + values_[n - 1]);
  return mass;
}

SingularIntegralFn build_singular_integral(size_t grid_points) {
  return SingularIntegralFn(grid_points);
}

MinorArcScan minor_arc_scan(const TermEvaluator& ev, int j, uint64_t n_samples,
                            uint64_t seed) {
  if (j != 1 && j != 2)
    throw std::domain_error("minor_arc_scan: j must be 1 or 2");
  const SieveParams& pp = ev.decomposition().params;
  MinorArcScan out;
  out.j = j;
  out.P = pp.P;
  out.samples = n_samples;
  out.seed = seed;

  std::vector<int32_t> rho = rho_values(ev, j);
  const uint64_t m_lo = pp.m_lo();
  const double scale = std::pow(pp.P, 1 - pp.sigma);
  const double edge = std::pow(pp.P, -4.0 / 3.0);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double golden = 0.6180339887498948482;
  double offset = unif(rng);
  double ratio_sum = 0;
  uint64_t used = 0;
  for (uint64_t i = 0; i < n_samples; ++i) {
    double x = offset + golden * static_cast<double>(i);
    x -= std::floor(x);
    double alpha = edge + x;  // low-discrepancy point in the unit window
    auto cls = classify_arc(alpha, pp.P, std::pow(pp.P, 2.0 / 3.0));
    if (cls.in_aux) {
      ++out.rejected;
      continue;
    }
    double fa = std::abs(exp_sum(rho, m_lo, alpha));
    double ratio = fa / scale;
    ratio_sum += ratio;
    ++used;
    if (ratio > out.max_ratio) {
      out.max_ratio = ratio;
      out.max_abs = fa;
      out.arg_max = alpha;
    }
  }
  out.mean_ratio = used ? ratio_sum / static_cast<double>(used) : 0;
  return out;
}

PointwiseBoundFit fit_f0_bound(const TermEvaluator& ev, uint64_t n_samples,
                               uint64_t seed) {
  const SieveParams& pp = ev.decomposition().params;
  PointwiseBoundFit out;
  out.samples = n_samples;
  std::vector<int32_t> rho = rho_values(ev, 0);
  const uint64_t m_lo = pp.m_lo();
  std::mt19937_64 rng(seed);
  const double q_max = std::pow(pp.P, 2.0 / 3.0);
  const double arc_half = std::pow(pp.P, -4.0 / 3.0);
  std::uniform_int_distribution<uint64_t> qdist(1, static_cast<uint64_t>(q_max));
  std::uniform_real_distribution<double> ddist(-arc_half, arc_half);
  const double scale1 = pp.P;
  const double scale2 = std::pow(pp.P, 5.0 / 6.0);
  for (uint64_t i = 0; i < n_samples; ++i) {
    uint64_t q = qdist(rng);
    std::uniform_int_distribution<uint64_t> adist(1, q);
    uint64_t a = adist(rng);
    while (std::gcd(a, q) != 1) a = adist(rng);
    double delta = ddist(rng);
    double alpha = static_cast<double>(a) / static_cast<double>(q) +
                   delta / static_cast<double>(q);
    auto cls = classify_arc(alpha, pp.P, std::pow(pp.P, 2.0 / 3.0));
    if (!cls.in_aux) continue;
    double fa = std::abs(exp_sum(rho, m_lo, alpha));
    double bound = scale1 * std::sqrt(cls.delta) + scale2;
    double c = fa / bound;
    if (c > out.c) {
      out.c = c;
      out.worst_alpha = alpha;
    }
  }
  return out;
}

namespace {

void require(bool ok, const char* condition) {
  if (!ok)
    throw std::domain_error(std::string("lemma_experiment: violated ") + condition);
}

}  // namespace

LemmaReport lemma_experiment(LemmaKind kind, const LemmaConfig& cfg, double sigma,
                             const PrimeTable& pt) {
  LemmaReport rep;
  const double X = cfg.X;
  const double Q = std::pow(X, 4 * sigma);
  double R = cfg.R, S = cfg.S, U = cfg.U, z = cfg.z;

  switch (kind) {
    case LemmaKind::Count31:
      rep.kind = "COUNT31";
      if (R == 0) R = 0.5 * std::pow(X, 1 - 3 * sigma);
      if (U == 0) U = 0.5 * std::pow(X, 2 * sigma);
      require(U <= std::pow(X, 2 * sigma), "U <= X^{2 sigma}");
      require(std::pow(X, 2 * sigma) <= R, "X^{2 sigma} <= R");
      require(R <= std::pow(X, 1 - 3 * sigma), "R <= X^{1-3 sigma}");
      rep.rhs = R * std::sqrt(U) * std::pow(X, -sigma);
      break;
    case LemmaKind::L31:
      rep.kind = "L31";
      if (R == 0) R = 0.5 * std::pow(X, 1 - 3 * sigma);
      require(R <= std::pow(X, 1 - 3 * sigma), "R <= X^{1-3 sigma}");
      rep.rhs = std::pow(X, 1 - sigma);
      break;
    case LemmaKind::L32:
      rep.kind = "L32";
      if (R == 0) R = 0.5 * std::pow(X, 1 - 3 * sigma);
      if (S == 0) S = 0.45 * std::sqrt(0.1 * std::pow(X, 1 - 2 * sigma) / R);
      require(R <= std::pow(X, 1 - 3 * sigma), "R <= X^{1-3 sigma}");
      require(R * (2 * S) * (2 * S) <= 0.1 * std::pow(X, 1 - 2 * sigma) * 4.0,
              "R S^2 <= 0.1 X^{1-2 sigma}");
      rep.rhs = std::pow(X, 1 - sigma);
      break;
    case LemmaKind::L33:
      rep.kind = "L33";
      if (R == 0) R = std::pow(X, 0.5 - sigma);
      require(std::pow(X, 2 * sigma) <= R, "X^{2 sigma} <= R");
      require(R <= std::pow(X, 1 - 4 * sigma), "R <= X^{1-4 sigma}");
      rep.rhs = std::pow(X, 1 - sigma);
      break;
    case LemmaKind::L34:
      rep.kind = "L34";
      if (R == 0) R = 0.5 * std::pow(X, 2 * sigma);
      if (S == 0) S = std::min(0.5 * std::pow(X, 2 * sigma),
                               0.25 * std::pow(X, 1 - 3 * sigma) / R);
      if (z == 0) z = std::pow(X, 1 - 6 * sigma);
      require(R <= std::pow(X, 2 * sigma), "R <= X^{2 sigma}");
      require(S <= std::pow(X, 2 * sigma), "S <= X^{2 sigma}");
      require(R * S <= std::pow(X, 1 - 3 * sigma), "R S <= X^{1-3 sigma}");
      require(z <= std::pow(X, 1 - 6 * sigma), "z <= X^{1-6 sigma}");
      rep.rhs = std::pow(X, 1 - sigma);
      break;
  }
  rep.X = X;
  rep.R = R;
  rep.S = S;
  rep.U = U;
  rep.z = z;
  rep.samples = cfg.samples;
  rep.seed = cfg.seed;

  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double edge = Q / (X * X);

  // seeded unimodular coefficient stream (|xi| = 1), splitmix-style hash so
  // coefficients depend only on (seed, index)
  const uint64_t coeff_seed = cfg.seed ^ 0x9e3779b97f4a7c15ull;
  auto xi = [coeff_seed](uint64_t index) {
    uint64_t h = (index + coeff_seed) * 0x9e3779b97f4a7c15ull;
    h ^= h >> 29;
    h *= 0xbf58476d1ce4e5b9ull;
    h ^= h >> 32;
    double th = kTwoPi * static_cast<double>(h >> 11) / 9007199254740992.0;
    return std::complex<double>(std::cos(th), std::sin(th));
  };

  double ratio_sum = 0;
  uint64_t used = 0;
  for (uint64_t it = 0; it < cfg.samples; ++it) {
    double alpha = edge + unif(rng);
    if (classify_arc(alpha, X, Q).major) continue;  // not in the minor set
    double lhs = 0;
    switch (kind) {
      case LemmaKind::Count31: {
        uint64_t cnt = 0;
        const double thr = R * R * std::pow(X, 2 * sigma - 2);
        for (uint64_t r = static_cast<uint64_t>(R) + 1; r <= 2 * R; ++r)
          for (uint64_t u = static_cast<uint64_t>(U) + 1; u <= 2 * U; ++u) {
            long double x = static_cast<long double>(u) * r * r * alpha;
            long double fr = fmodl(x, 1.0L);
            if (fr < 0) fr += 1.0L;
            double dist = static_cast<double>(fr > 0.5L ? 1.0L - fr : fr);
            if (dist < thr) ++cnt;
          }
        lhs = static_cast<double>(cnt);
        break;
      }
      case LemmaKind::L31: {
        std::complex<double> sum{0, 0};
        for (uint64_t r = static_cast<uint64_t>(R) + 1; r <= 2 * R; ++r) {
          std::complex<double> inner{0, 0};
          uint64_t mlo = static_cast<uint64_t>(X / r) + 1;
          uint64_t mhi = static_cast<uint64_t>(2 * X / r);
          for (uint64_t m = mlo; m <= mhi; ++m) {
            long double t = static_cast<long double>(r) * r * m * m * alpha;
            inner += e_of(t);
          }
          sum += xi(r) * inner;
        }
        lhs = std::abs(sum);
        break;
      }
      case LemmaKind::L32: {
        std::complex<double> sum{0, 0};
        for (uint64_t r = static_cast<uint64_t>(R) + 1; r <= 2 * R; ++r)
          for (uint64_t s = static_cast<uint64_t>(S) + 1; s <= 2 * S; ++s) {
            std::complex<double> inner{0, 0};
            uint64_t rs = r * s;
            uint64_t mlo = static_cast<uint64_t>(X / rs) + 1;
            uint64_t mhi = static_cast<uint64_t>(2 * X / rs);
            for (uint64_t m = mlo; m <= mhi; ++m) {
              long double t =
                  static_cast<long double>(rs) * rs * m * m * alpha;
              inner += e_of(t);
            }
            sum += xi(r * 65537 + s) * inner;
          }
        lhs = std::abs(sum);
        break;
      }
      case LemmaKind::L33: {
        std::complex<double> sum{0, 0};
        for (uint64_t r = static_cast<uint64_t>(R) + 1; r <= 2 * R; ++r) {
          std::complex<double> inner{0, 0};
          uint64_t slo = static_cast<uint64_t>(X / r) + 1;
          uint64_t shi = static_cast<uint64_t>(2 * X / r);
          for (uint64_t s = slo; s <= shi; ++s) {
            long double t = static_cast<long double>(r) * r * s * s * alpha;
            inner += xi(s ^ 0xabcdef12345ull) * e_of(t);
          }
          sum += xi(r) * inner;
        }
        lhs = std::abs(sum);
        break;
      }
      case LemmaKind::L34: {
        std::complex<double> sum{0, 0};
        for (uint64_t r = static_cast<uint64_t>(R) + 1; r <= 2 * R; ++r)
          for (uint64_t s = static_cast<uint64_t>(S) + 1; s <= 2 * S; ++s) {
            std::complex<double> inner{0, 0};
            uint64_t rs = r * s;
            uint64_t mlo = static_cast<uint64_t>(X / rs) + 1;
            uint64_t mhi = static_cast<uint64_t>(2 * X / rs);
            for (uint64_t m = mlo; m <= mhi; ++m) {
              if (!rough_indicator(m, z, pt)) continue;
              long double t =
                  static_cast<long double>(rs) * rs * m * m * alpha;
              inner += e_of(t);
            }
            sum += xi(r) * xi(s ^ 0xabcdef12345ull) * inner;
          }
        lhs = std::abs(sum);
        break;
      }
    }
    double ratio = lhs / rep.rhs;
    ratio_sum += ratio;
    ++used;
    if (ratio > rep.max_ratio) {
      rep.max_ratio = ratio;
      rep.worst_alpha = alpha;
    }
  }
  rep.mean_ratio = used ? ratio_sum / static_cast<double>(used) : 0;
  return rep;
}

}  // namespace psq
