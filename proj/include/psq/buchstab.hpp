#pragma once

// Buchstab's function omega(u): omega(u) = 1/u on [1,2] and
// (u*omega(u))' = omega(u-1) for u > 2. Solved on a uniform grid by
// integrating F(u) = u*omega(u) forward with the delay term read from
// already-computed values; omega -> e^{-gamma} as u grows.

#include <cstdint>
#include <vector>

namespace psq {

class BuchstabTable {
 public:
  double omega(double u) const;   // 0 for u < 1; linear interpolation on grid
  double step() const { return h_; }
  double u_max() const { return u_max_; }
  static double limit_value() { return 0.56145948356688516982; }  // e^{-gamma}

 private:
  friend BuchstabTable build_buchstab(double u_max, double h);
  double h_ = 0;
  double u_max_ = 0;
  std::vector<double> F_;  // F[i] = u_i * omega(u_i), u_i = 1 + i*h
};

// h must divide 1 exactly (it is snapped to 1/round(1/h)); h <= 1e-3,
// u_max >= 4.
BuchstabTable build_buchstab(double u_max, double h);

}  // namespace psq
