#pragma once

#include <cmath>
#include <vector>

#include "tfa/bump.hpp"
#include "tfa/field.hpp"

namespace tfa {

// Frequency-side windows: the radial annulus cutoff, the cone cutoff
// sandwiched between the sharp cones, and the vertical band partition.
struct WindowBank {
  double eps = 0.5;  // non-degeneracy parameter of the cone windows

  // annulus window: support strictly inside 1 < r < 3
  static double zeta(double r) { return annulus_window(r); }

  // band partition member: support (1/3, 3), sums to 1 over triadic dilates
  static double band(double r) { return band_profile(r); }

  // squared cap distance of a frequency to the pole: 1 - xi_n / |xi|
  static double cap_dist_sq(const std::vector<double>& xi) {
    double s = 0.0;
    for (double c : xi) s += c * c;
    if (s == 0.0) return 0.0;
    return 1.0 - xi.back() / std::sqrt(s);
  }

  // cone cutoff: 1 on { ||xi' - e_n|| < 1-eps }, 0 off { ||.|| < sqrt(1-eps) }
  double cone(const std::vector<double>& xi) const {
    double t = cap_dist_sq(xi);  // = ||xi' - e_n||^2
    double lo = (1.0 - eps) * (1.0 - eps);
    double hi = 1.0 - eps;
    if (t <= lo) return 1.0;
    if (t >= hi) return 0.0;
    return smooth_step((hi - t) / (hi - lo));
  }

  bool inside_sharp_cone(const std::vector<double>& xi) const {
    return cap_dist_sq(xi) < (1.0 - eps) * (1.0 - eps);
  }
  bool outside_wide_cone(const std::vector<double>& xi) const {
    return cap_dist_sq(xi) >= 1.0 - eps;
  }
};

inline std::vector<double> lattice_freq(const TorusGrid& g,
                                        const std::array<int, 3>& ix) {
  std::vector<double> xi(g.n);
  for (int i = 0; i < g.n; ++i) xi[i] = double(g.freq(ix[i]));
  return xi;
}

// pointwise spectral multiplication by w(xi)
template <typename W>
DiscreteField spectral_apply(const DiscreteField& f, W&& w) {
  DiscreteField out = f.as_spectral();
  size_t cells = out.grid.cells();
  for (size_t id = 0; id < cells; ++id) {
    auto ix = out.grid.unflat(id);
    out.a[id] *= w(lattice_freq(out.grid, ix));
  }
  return out;
}

// P_k: radial annulus projection at scale 3^k
inline DiscreteField proj_band(int k, const DiscreteField& f) {
  double s = std::pow(3.0, -double(k));
  return spectral_apply(f, [s](const std::vector<double>& xi) {
    double r = 0.0;
    for (double c : xi) r += c * c;
    return WindowBank::zeta(std::sqrt(r) * s);
  });
}

// cone projection with the eps-dependent cutoff
inline DiscreteField proj_cone(double eps, const DiscreteField& f) {
  WindowBank wb;
  wb.eps = eps;
  return spectral_apply(
      f, [wb](const std::vector<double>& xi) { return wb.cone(xi); });
}

// smooth band restriction in the last frequency coordinate
inline DiscreteField smooth_band(double ann, const DiscreteField& f) {
  return spectral_apply(f, [ann](const std::vector<double>& xi) {
    double t = std::abs(xi.back());
    if (t == 0.0) return 0.0;
    return WindowBank::band(t / ann);
  });
}

}  // namespace tfa
