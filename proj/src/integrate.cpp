#include "psq/integrate.hpp"

#include <algorithm>
#include <cmath>

namespace psq {

IntegralSpec term_to_integral(const SieveTerm& t, const SieveParams& params) {
  IntegralSpec s;
  s.dim = t.arity;
  s.sigma = params.sigma;
  s.label = t.id;
  s.constraints = t.constraints;
  s.slab_lo1 = 2 * params.sigma;
  s.slab_hi1 = 1 - 4 * params.sigma;
  s.slab_lo2 = 4 * params.sigma;
  s.slab_hi2 = 1 - 2 * params.sigma;
  if (t.bad_over > 0) s.forbidden_vars = (1u << t.bad_over) - 1;
  if (t.gb == Gb::Good) s.good_vars = (1u << t.arity) - 1;
  if (t.gb == Gb::Bad) s.forbidden_vars |= (1u << t.arity) - 1;
  if (t.inner == Inner::LastVar) {
    s.beta_is_last = true;
  } else {
    s.beta_const = 1 - 6 * params.sigma;
  }

  const double zexp = 1 - 6 * params.sigma;
  for (int i = 0; i < t.arity; ++i) {
    s.box_lo[i] = zexp;
    s.box_hi[i] = 0.5;  // p_i < P^{1/2} always
  }
  for (const auto& c : t.constraints) {
    int nz = 0, var = -1;
    for (int i = 0; i < 5; ++i)
      if (c.coeff[i] != 0) { ++nz; var = i; }
    if (nz != 1 || c.coeff[var] != 1) continue;
    double rhs = c.exponent_rhs(params.sigma);
    if (c.rel == Rel::Lt || c.rel == Rel::Le)
      s.box_hi[var] = std::min(s.box_hi[var], rhs);
    else
      s.box_lo[var] = std::max(s.box_lo[var], rhs);
  }
  for (int i = 1; i < t.arity; ++i)
    s.box_hi[i] = std::min(s.box_hi[i], s.box_hi[i - 1]);
  return s;
}

namespace {

// Gauss-Kronrod 7-15 pair on [-1, 1]; even indices are the Gauss-7 nodes.
constexpr int kN = 15;
constexpr double kX[kN] = {
    -0.9914553711208126, -0.9491079123427585, -0.8648644233597691,
    -0.7415311855993945, -0.5860872354676911, -0.4058451513773972,
    -0.2077849550078985, 0.0,                 0.2077849550078985,
    0.4058451513773972,  0.5860872354676911,  0.7415311855993945,
    0.8648644233597691,  0.9491079123427585,  0.9914553711208126};
constexpr double kWk[kN] = {
    0.0229353220105292, 0.0630920926299786, 0.1047900103222502,
    0.1406532597155259, 0.1690047266392679, 0.1903505780647854,
    0.2044329400752989, 0.2094821410847278, 0.2044329400752989,
    0.1903505780647854, 0.1690047266392679, 0.1406532597155259,
    0.1047900103222502, 0.0630920926299786, 0.0229353220105292};
constexpr double kWg[7] = {0.1294849661688697, 0.2797053914892766,
                           0.3818300505051189, 0.4179591836734694,
                           0.3818300505051189, 0.2797053914892766,
                           0.1294849661688697};

struct Avoid {
  uint32_t mask;
  double lo, hi;  // sum over mask must stay outside [lo, hi]
  int level;      // max variable in mask
};

struct ValErr {
  double v = 0, e = 0;
};

struct Segment {
  double a, b;
};

constexpr int kMaxSegs = 72;

// One conjunctive integration problem: linear constraints plus avoid
// intervals on subset sums. Integrated innermost-last by nested adaptive
// Gauss-Kronrod; every condition activates at its highest variable, so
// each level's admissible set is an exact union of intervals.
struct NestedEngine {
  int dim = 0;
  double sigma = 0;
  bool beta_is_last = false;
  double beta_const = 0;
  const BuchstabTable* om = nullptr;
  std::array<double, 5> box_lo{}, box_hi{};
  std::vector<std::vector<const ExponentConstraint*>> cons_by_level;
  std::vector<std::vector<Avoid>> avoid_by_level;
  std::array<double, 5> u{};
  uint64_t evals = 0;
  uint64_t max_evals = 0;
  bool clipped = false;
  bool budget_hit = false;

  double f_inner() {
    ++evals;
    double sum = 0, inv = 1;
    for (int i = 0; i < dim; ++i) {
      sum += u[i];
      inv /= u[i];
    }
    double beta = beta_is_last ? u[dim - 1] : beta_const;
    double arg = (1.0 - sum) / beta;
    if (arg < 1.0) { clipped = true; return 0.0; }
    return om->omega(arg) / beta * inv;
  }

  // admissible u_level segments for the current prefix
  int segments(int level, Segment out[kMaxSegs]) {
    double lo = box_lo[level], hi = box_hi[level];
    for (const auto* c : cons_by_level[level]) {
      double partial = 0;
      for (int i = 0; i < level; ++i) partial += c->coeff[i] * u[i];
      double aj = c->coeff[level];
      double rhs = c->exponent_rhs(sigma);
      double bound = (rhs - partial) / aj;
      bool upper = (c->rel == Rel::Lt || c->rel == Rel::Le);
      if (aj < 0) upper = !upper;
      if (upper) hi = std::min(hi, bound);
      else lo = std::max(lo, bound);
    }
    if (!(lo < hi)) return 0;
    double cut_lo[64], cut_hi[64];
    int ncut = 0;
    for (const auto& av : avoid_by_level[level]) {
      double base = 0;
      for (int i = 0; i < level; ++i)
        if (av.mask & (1u << i)) base += u[i];
      double elo = av.lo - base, ehi = av.hi - base;
      if (ehi <= lo || elo >= hi) continue;
      if (elo <= lo && ehi >= hi) return 0;
      cut_lo[ncut] = std::max(elo, lo);
      cut_hi[ncut] = std::min(ehi, hi);
      ++ncut;
    }
    Segment work[kMaxSegs];
    int n = 1;
    work[0] = {lo, hi};
    for (int c = 0; c < ncut; ++c) {
      Segment next[kMaxSegs];
      int nn = 0;
      for (int s = 0; s < n; ++s) {
        double a = work[s].a, b = work[s].b;
        if (cut_hi[c] <= a || cut_lo[c] >= b) {
          next[nn++] = work[s];
          continue;
        }
        if (cut_lo[c] > a) next[nn++] = {a, cut_lo[c]};
        if (cut_hi[c] < b) next[nn++] = {cut_hi[c], b};
      }
      n = nn;
      std::copy(next, next + n, work);
      if (n == 0) return 0;
    }
    std::copy(work, work + n, out);
    return n;
  }

  ValErr node(int level, double tol_density) {
    if (level == dim) return {f_inner(), 0.0};
    return integrate_level(level, tol_density);
  }

  // Kronrod value + embedded Gauss value + inner error, one 15-node sweep
  void panel(int level, double a, double b, double inner_density, double& K,
             double& G, double& einner) {
    double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    K = G = einner = 0;
    for (int i = 0; i < kN; ++i) {
      u[level] = mid + half * kX[i];
      ValErr in = node(level + 1, inner_density);
      K += kWk[i] * in.v;
      einner += kWk[i] * in.e;
      if (i % 2 == 1) G += kWg[i / 2] * in.v;
    }
    K *= half;
    G *= half;
    einner *= half;
  }

  ValErr adapt(int level, double a, double b, double tol_abs,
               double inner_density, int depth) {
    double K, G, einner;
    panel(level, a, b, inner_density, K, G, einner);
    double disc = std::abs(K - G);
    if (disc <= tol_abs || depth >= 40 || b - a < 1e-12 || evals >= max_evals) {
      if (evals >= max_evals && disc > tol_abs) budget_hit = true;
      return {K, disc + einner};
    }
    double mid = 0.5 * (a + b);
    ValErr L = adapt(level, a, mid, 0.5 * tol_abs, inner_density, depth + 1);
    ValErr R = adapt(level, mid, b, 0.5 * tol_abs, inner_density, depth + 1);
    return {L.v + R.v, L.e + R.e};
  }

  // tol_density: allowed absolute error per unit length at this level
  ValErr integrate_level(int level, double tol_density) {
    Segment segs[kMaxSegs];
    int n = segments(level, segs);
    ValErr total;
    for (int s = 0; s < n; ++s) {
      double w = segs[s].b - segs[s].a;
      if (w <= 0) continue;
      ValErr r = adapt(level, segs[s].a, segs[s].b, 0.5 * tol_density * w,
                       0.5 * tol_density, 0);
      total.v += r.v;
      total.e += r.e;
    }
    return total;
  }
};

void expand_avoids(uint32_t vars_mask, const IntegralSpec& s,
                   std::vector<Avoid>& out) {
  for (uint32_t m = 1; m < (1u << s.dim); ++m) {
    if ((m & vars_mask) != m) continue;
    int lvl = 0;
    for (int i = 0; i < s.dim; ++i)
      if (m & (1u << i)) lvl = i;
    out.push_back({m, s.slab_lo1, s.slab_hi1, lvl});
    out.push_back({m, s.slab_lo2, s.slab_hi2, lvl});
  }
}

QuadratureResult run_conjunctive(const IntegralSpec& spec,
                                 const std::vector<ExponentConstraint>& extra_cons,
                                 const std::vector<Avoid>& avoids,
                                 const BuchstabTable& omega, double tol,
                                 uint64_t max_evals) {
  QuadratureResult out;
  NestedEngine eng;
  eng.dim = spec.dim;
  eng.sigma = spec.sigma;
  eng.beta_is_last = spec.beta_is_last;
  eng.beta_const = spec.beta_const;
  eng.om = &omega;
  eng.box_lo = spec.box_lo;
  eng.box_hi = spec.box_hi;
  eng.max_evals = max_evals;
  eng.cons_by_level.assign(spec.dim, {});
  eng.avoid_by_level.assign(spec.dim, {});
  for (const auto& c : spec.constraints)
    eng.cons_by_level[c.max_var].push_back(&c);
  for (const auto& c : extra_cons)
    eng.cons_by_level[c.max_var].push_back(&c);
  for (const auto& a : avoids) eng.avoid_by_level[a.level].push_back(a);

  double width0 = spec.box_hi[0] - spec.box_lo[0];
  if (width0 <= 0) {
    out.empty_region = true;
    return out;
  }
  double density = 0.25 * tol / std::max(width0, 1e-6);
  ValErr r{0, 2 * tol};
  for (int pass = 0; pass < 3 && r.e > tol; ++pass) {
    eng.evals = 0;
    eng.budget_hit = false;
    r = eng.integrate_level(0, density);
    out.evaluations += eng.evals;
    if (r.e > tol) density *= std::max(0.05, 0.4 * tol / r.e);
    if (eng.budget_hit) break;
  }
  out.value = r.v;
  out.err_estimate = r.e;
  out.budget_exhausted = eng.budget_hit;
  out.omega_clipped = eng.clipped;
  return out;
}

}  // namespace

QuadratureResult integrate(const IntegralSpec& spec, const BuchstabTable& omega,
                           double tol, uint64_t max_cells) {
  QuadratureResult out;
  if (spec.dim == 0) {
    double beta = spec.beta_const;
    double arg = 1.0 / beta;
    out.value = arg >= 1.0 ? omega.omega(arg) / beta : 0.0;
    out.evaluations = 1;
    return out;
  }
  for (int i = 0; i < spec.dim; ++i)
    if (!(spec.box_lo[i] < spec.box_hi[i])) {
      out.empty_region = true;
      return out;
    }

  std::vector<Avoid> base_avoids;
  expand_avoids(spec.forbidden_vars, spec, base_avoids);

  if (spec.good_vars == 0) {
    out = run_conjunctive(spec, {}, base_avoids, omega, tol, max_cells);
    if (out.value == 0 && out.evaluations == 0) out.empty_region = true;
    return out;
  }

  // "some subset sum hits a slab": decompose by the first (mask, slab) hit,
  // so the pieces are disjoint and each piece is conjunctive
  std::vector<std::pair<uint32_t, int>> hits;  // (mask, slab index)
  for (uint32_t m = 1; m < (1u << spec.dim); ++m)
    if ((m & spec.good_vars) == m) {
      hits.emplace_back(m, 0);
      hits.emplace_back(m, 1);
    }

  const double slab_lo[2] = {spec.slab_lo1, spec.slab_lo2};
  const double slab_hi[2] = {spec.slab_hi1, spec.slab_hi2};
  double tol_piece = tol / static_cast<double>(hits.size());
  bool all_empty = true;
  for (size_t h = 0; h < hits.size(); ++h) {
    auto [mask, slab] = hits[h];
    int lvl = 0;
    for (int i = 0; i < spec.dim; ++i)
      if (mask & (1u << i)) lvl = i;
    std::vector<ExponentConstraint> band;
    ExponentConstraint clo, chi;
    for (int i = 0; i < spec.dim; ++i) {
      clo.coeff[i] = (mask & (1u << i)) ? 1 : 0;
      chi.coeff[i] = clo.coeff[i];
    }
    clo.max_var = chi.max_var = lvl;
    // slab bounds in (c0, cs) form: [2s, 1-4s] and [4s, 1-2s]
    if (slab == 0) {
      clo.c0 = 0; clo.cs = 2; clo.rel = Rel::Ge;
      chi.c0 = 1; chi.cs = -4; chi.rel = Rel::Le;
    } else {
      clo.c0 = 0; clo.cs = 4; clo.rel = Rel::Ge;
      chi.c0 = 1; chi.cs = -2; chi.rel = Rel::Le;
    }
    band.push_back(clo);
    band.push_back(chi);
    std::vector<Avoid> avoids = base_avoids;
    for (size_t e = 0; e < h; ++e) {
      auto [m2, s2] = hits[e];
      int l2 = 0;
      for (int i = 0; i < spec.dim; ++i)
        if (m2 & (1u << i)) l2 = i;
      avoids.push_back({m2, slab_lo[s2], slab_hi[s2], l2});
    }
    QuadratureResult piece = run_conjunctive(spec, band, avoids, omega,
                                             tol_piece, max_cells);
    out.value += piece.value;
    out.err_estimate += piece.err_estimate;
    out.evaluations += piece.evaluations;
    out.budget_exhausted |= piece.budget_exhausted;
    out.omega_clipped |= piece.omega_clipped;
    if (!(piece.value == 0 && piece.evaluations == 0)) all_empty = false;
  }
  out.empty_region = all_empty;
  return out;
}

}  // namespace psq
