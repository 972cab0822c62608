#pragma once

#include <cmath>

namespace tfa {

// C^infinity transition 0 -> 1 on [0,1]
inline double smooth_step(double s) {
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  double a = std::exp(-1.0 / s);
  double b = std::exp(-1.0 / (1.0 - s));
  return a / (a + b);
}

// smooth plateau bump: 0 outside (a,b), 1 on [a+r, b-r], ramps of width r
inline double plateau(double x, double a, double b, double r) {
  if (x <= a || x >= b) return 0.0;
  return smooth_step((x - a) / r) * smooth_step((b - x) / r);
}

inline double log3(double x) { return std::log(x) / std::log(3.0); }

// Band profile with support (1/3, 3): partition of unity over triadic
// dilates, sum_k band_profile(3^{-k} r) = 1 for every r > 0.
inline double band_profile(double r) {
  if (r <= 1.0 / 3.0 || r >= 3.0) return 0.0;
  double u = log3(r);
  return smooth_step(u + 1.0) - smooth_step(u);
}

// Radial annulus window, support strictly inside (1, 3), values in [0,1].
inline double annulus_window(double r) {
  if (r <= 1.0 || r >= 3.0) return 0.0;
  double u = log3(r);  // in (0,1)
  return smooth_step(4.0 * u) * smooth_step(4.0 * (1.0 - u));
}

// <x> = sqrt(1+|x|^2) raised to -M
inline double japanese_bracket_pow(double norm_sq, int M) {
  return std::pow(1.0 + norm_sq, -0.5 * double(M));
}

}  // namespace tfa
