#include "psq/buchstab.hpp"

#include <cmath>
#include <stdexcept>

namespace psq {

BuchstabTable build_buchstab(double u_max, double h) {
  if (h > 1e-3 || h <= 0) throw std::domain_error("build_buchstab: need 0 < h <= 1e-3");
  if (u_max < 4) throw std::domain_error("build_buchstab: need u_max >= 4");
  BuchstabTable t;
  const uint64_t per_unit = static_cast<uint64_t>(std::llround(1.0 / h));
  t.h_ = 1.0 / static_cast<double>(per_unit);
  const uint64_t n = static_cast<uint64_t>(std::ceil((u_max - 1.0) * per_unit)) + 1;
  t.u_max_ = 1.0 + static_cast<double>(n - 1) * t.h_;
  t.F_.assign(n, 1.0);  // F = u*omega = 1 on [1, 2]

  // Heun step for F'(u) = F(u-1)/(u-1); the delay lands exactly on the grid
  auto G = [&](uint64_t i) {  // F'(u_i) for u_i >= 2
    uint64_t j = i - per_unit;
    double uj = 1.0 + static_cast<double>(j) * t.h_;
    return t.F_[j] / uj;
  };
  for (uint64_t i = per_unit; i + 1 < n; ++i) {
    double g0 = G(i);
    double g1 = G(i + 1);
    t.F_[i + 1] = t.F_[i] + 0.5 * t.h_ * (g0 + g1);
  }
  return t;
}

double BuchstabTable::omega(double u) const {
  if (u < 1.0) return 0.0;
  if (u <= 2.0) return 1.0 / u;
  if (u >= u_max_) return limit_value();
  double x = (u - 1.0) / h_;
  uint64_t i = static_cast<uint64_t>(x);
  if (i + 1 >= F_.size()) return F_.back() / u;
  double frac = x - static_cast<double>(i);
  double F = F_[i] * (1.0 - frac) + F_[i + 1] * frac;
  return F / u;
}

}  // namespace psq
