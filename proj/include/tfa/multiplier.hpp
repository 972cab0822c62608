#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tfa/direction.hpp"
#include "tfa/field.hpp"
#include "tfa/windows.hpp"

namespace tfa {

// Symbol on R^d with a declared derivative order for the Mihlin-type norm.
// Homogeneous symbols take the value 0 at the origin: every test function in
// the pipelines is band-limited away from 0, so the DC mode never matters.
struct MultiplierSpec {
  std::string tag = "identity";  // identity | riesz-component | hilbert-sign
                                 // | homogeneous-M | custom
  int order = 2;                 // declared A
  std::function<cplx(const std::vector<double>&)> symbol;

  cplx eval(const std::vector<double>& eta) const {
    cplx v = symbol(eta);
    if (std::isnan(v.real()) || std::isnan(v.imag()))
      throw std::domain_error("symbol-domain-error: NaN at sampled frequency");
    return v;
  }
};

inline MultiplierSpec multiplier_identity() {
  MultiplierSpec m;
  m.tag = "identity";
  m.symbol = [](const std::vector<double>&) { return cplx(1.0, 0.0); };
  return m;
}

inline MultiplierSpec multiplier_riesz(int component = 0) {
  MultiplierSpec m;
  m.tag = "riesz-component";
  m.symbol = [component](const std::vector<double>& eta) {
    double s = 0.0;
    for (double c : eta) s += c * c;
    if (s == 0.0) return cplx(0.0);
    return cplx(eta[component] / std::sqrt(s), 0.0);
  };
  return m;
}

inline MultiplierSpec multiplier_hilbert_sign() {
  MultiplierSpec m;
  m.tag = "hilbert-sign";
  m.symbol = [](const std::vector<double>& eta) {
    if (eta[0] == 0.0) return cplx(0.0);
    return cplx(0.0, eta[0] > 0.0 ? -1.0 : 1.0);
  };
  return m;
}

// M(eta) = m(eta_1..eta_{d-1}) * phi(eta_d / |eta_1..eta_{d-1}|) with a bump
// phi between the indicators of [-1/2,1/2] and [-1,1]
inline MultiplierSpec multiplier_homogeneous_from(const MultiplierSpec& inner) {
  MultiplierSpec m;
  m.tag = "homogeneous-M";
  auto base = inner.symbol;
  m.symbol = [base](const std::vector<double>& eta) {
    int d = (int)eta.size();
    std::vector<double> head(eta.begin(), eta.end() - 1);
    double s = 0.0;
    for (double c : head) s += c * c;
    if (s == 0.0) return cplx(0.0);
    double ratio = std::abs(eta[d - 1]) / std::sqrt(s);
    double phi = ratio <= 0.5 ? 1.0
                 : ratio >= 1.0
                     ? 0.0
                     : smooth_step((1.0 - ratio) / 0.5);
    return base(head) * phi;
  };
  return m;
}

// oscillatory, non dilation invariant sample symbol for the 2d harness
inline MultiplierSpec multiplier_oscillatory() {
  MultiplierSpec m;
  m.tag = "custom";
  m.symbol = [](const std::vector<double>& eta) {
    double r = std::abs(eta[0]);
    if (r == 0.0) return cplx(0.0);
    double phase = std::cos(2.0 * std::numbers::pi * std::log2(1.0 + r));
    return cplx(phase * eta[0] / r, 0.0);
  };
  return m;
}

// Family sigma -> m_sigma with a log-Hoelder modulus hook.
struct MultiplierFamily {
  std::function<MultiplierSpec(const Direction&)> pick;

  static MultiplierFamily constant(const MultiplierSpec& m) {
    MultiplierFamily f;
    f.pick = [m](const Direction&) { return m; };
    return f;
  }
};

// ---- Mihlin-type norms -------------------------------------------------------

namespace detail {

// 4th-order central difference along axis, step h
inline cplx diff_axis(const std::function<cplx(std::vector<double>&)>& f,
                      std::vector<double>& x, int axis, double h) {
  auto at = [&](double off) {
    x[axis] += off;
    cplx v = f(x);
    x[axis] -= off;
    return v;
  };
  return (-at(2 * h) + 8.0 * at(h) - 8.0 * at(-h) + at(-2 * h)) / (12.0 * h);
}

inline cplx apply_multi(const MultiplierSpec& m, std::vector<double> x,
                        const std::vector<int>& beta, double h) {
  std::function<cplx(std::vector<double>&)> f =
      [&m](std::vector<double>& y) { return m.eval(y); };
  // nest central differences per axis order
  std::function<cplx(std::vector<double>&)> cur = f;
  for (int axis = 0; axis < (int)beta.size(); ++axis) {
    for (int k = 0; k < beta[axis]; ++k) {
      auto prev = cur;
      cur = [prev, axis, h](std::vector<double>& y) {
        return diff_axis(prev, y, axis, h);
      };
    }
  }
  return cur(x);
}

inline void multi_indices(int d, int maxtotal, std::vector<std::vector<int>>& out) {
  std::vector<int> beta(d, 0);
  std::function<void(int, int)> rec = [&](int axis, int left) {
    if (axis == d) {
      out.push_back(beta);
      return;
    }
    for (int k = 0; k <= left; ++k) {
      beta[axis] = k;
      rec(axis + 1, left - k);
    }
    beta[axis] = 0;
  };
  rec(0, maxtotal);
}

}  // namespace detail

// sup over sampled lattice points of |eta|^{|beta|} |D^beta m|, |beta| <= A;
// central 4th-order differences with step = spacing / 8
inline double mihlin_norm(const MultiplierSpec& m, int A, const TorusGrid& g,
                          int d) {
  std::vector<std::vector<int>> betas;
  detail::multi_indices(d, A, betas);
  double best = 0.0;
  double h = 1.0 / 8.0;  // step = lattice spacing / 8
  int half = g.N / 2;
  std::vector<double> pt(d);
  std::function<void(int)> sweep = [&](int axis) {
    if (axis == d) {
      double r2 = 0.0;
      for (double c : pt) r2 += c * c;
      if (r2 == 0.0) return;
      double r = std::sqrt(r2);
      for (const auto& beta : betas) {
        int order = 0;
        for (int b : beta) order += b;
        cplx der = detail::apply_multi(m, pt, beta, h);
        best = std::max(best, std::pow(r, order) * std::abs(der));
      }
      return;
    }
    for (int k = -half; k < half; ++k) {
      pt[axis] = double(k);
      sweep(axis + 1);
    }
  };
  sweep(0);
  return best;
}

// adds the log-Hoelder difference term over sampled direction pairs
inline double family_norm(const MultiplierFamily& fam,
                          const std::vector<Direction>& samples, int A,
                          const TorusGrid& g, int d) {
  double best = 0.0;
  for (size_t i = 0; i < samples.size(); ++i) {
    MultiplierSpec mi = fam.pick(samples[i]);
    best = std::max(best, mihlin_norm(mi, A, g, d));
    for (size_t j = i + 1; j < samples.size(); ++j) {
      MultiplierSpec mj = fam.pick(samples[j]);
      double dist = grassmann_dist(samples[i], samples[j]);
      if (dist == 0.0) continue;
      MultiplierSpec diff;
      auto si = mi.symbol, sj = mj.symbol;
      diff.symbol = [si, sj](const std::vector<double>& eta) {
        return si(eta) - sj(eta);
      };
      double w = std::log(std::numbers::e + 1.0 / dist);
      best = std::max(best, w * mihlin_norm(diff, A, g, d));
    }
  }
  return best;
}

// ---- directional application --------------------------------------------------

// T_m f along the hyperplane normal to v: multiply the spectrum by
// m(V Pi xi) where Pi projects onto the hyperplane and V rotates it to R^d.
inline DiscreteField apply_directional(const MultiplierSpec& m,
                                       const Direction& v,
                                       const DiscreteField& f) {
  Rotation R = rotation_to_pole(v);
  return spectral_apply(f, [&](const std::vector<double>& xi) {
    auto eta = project_rotate(R, v, xi);
    return m.eval(eta);
  });
}

// Direction field on the first d coordinates: a label per d-cell plus the
// palette of quantized directions (exact eta per value).
struct DirectionField {
  TorusGrid dgrid;                  // dimension d
  std::vector<int> label;           // per d-cell index into values
  std::vector<Direction> values;
  double eps = 0.0;                 // declared non-degeneracy margin

  int K() const { return (int)values.size(); }

  // every value inside the non-degeneracy region when eps > 0
  bool check_nondegenerate() const {
    if (eps <= 0.0) return true;
    for (const auto& v : values) {
      std::vector<double> en(v.v.size(), 0.0);
      en.back() = 1.0;
      Direction pole = direction_from_vector(en);
      if (!(grassmann_dist(v, pole) < 1.0 - eps + 1e-12)) return false;
    }
    return true;
  }
};

// Linearized application: one full transform per distinct direction value,
// then pointwise selection by the label of the first d coordinates.
inline DiscreteField apply_linearized(const DirectionField& sigma,
                                      const MultiplierFamily& fam,
                                      const DiscreteField& f) {
  if (sigma.dgrid.n != f.grid.n - 1 || sigma.dgrid.N != f.grid.N)
    throw std::invalid_argument("apply_linearized: direction grid mismatch");
  DiscreteField out(f.grid, false);
  std::vector<DiscreteField> pieces;
  pieces.reserve(sigma.values.size());
  for (const auto& v : sigma.values) {
    MultiplierSpec m = fam.pick(v);
    pieces.push_back(apply_directional(m, v, f).as_space());
  }
  int n = f.grid.n;
  size_t cells = f.grid.cells();
  for (size_t id = 0; id < cells; ++id) {
    auto ix = f.grid.unflat(id);
    std::array<int, 3> dx{0, 0, 0};
    for (int i = 0; i + 1 < n; ++i) dx[i] = ix[i];
    int lab = sigma.label[sigma.dgrid.flat(dx)];
    out.a[id] = pieces[lab].a[id];
  }
  return out;
}

// selection by an arbitrary per-cell label field (used for the argmax
// consistency identity; the linearized operator restricts to labels that
// are constant in the last coordinate)
inline DiscreteField apply_selected(const std::vector<int>& label,
                                    const std::vector<Direction>& dirs,
                                    const MultiplierFamily& fam,
                                    const DiscreteField& f) {
  DiscreteField out(f.grid, false);
  std::vector<DiscreteField> pieces;
  for (const auto& v : dirs) {
    MultiplierSpec m = fam.pick(v);
    pieces.push_back(apply_directional(m, v, f).as_space());
  }
  for (size_t id = 0; id < out.a.size(); ++id)
    out.a[id] = pieces[label[id]].a[id];
  return out;
}

// pointwise sup over a finite direction set; returns |.| as a real field
inline DiscreteField apply_maximal(const std::vector<Direction>& dirs,
                                   const MultiplierFamily& fam,
                                   const DiscreteField& f,
                                   std::vector<int>* argmax = nullptr) {
  DiscreteField out(f.grid, false);
  if (argmax) argmax->assign(f.grid.cells(), 0);
  bool first = true;
  for (size_t k = 0; k < dirs.size(); ++k) {
    MultiplierSpec m = fam.pick(dirs[k]);
    DiscreteField piece = apply_directional(m, dirs[k], f).as_space();
    for (size_t id = 0; id < out.a.size(); ++id) {
      double mag = std::abs(piece.a[id]);
      if (first || mag > out.a[id].real()) {
        out.a[id] = cplx(mag, 0.0);
        if (argmax) (*argmax)[id] = (int)k;
      }
    }
    first = false;
  }
  return out;
}

}  // namespace tfa
