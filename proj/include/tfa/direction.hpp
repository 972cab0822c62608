#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "tfa/grid.hpp"
#include "tfa/rational.hpp"

namespace tfa {

// Unit vector in S^d (n = d+1 components). Directions built from a grid cube
// keep the exact gnomonic parameter eta with v = (eta, 1)/|(eta, 1)|, so all
// cap combinatorics reduce to exact cube tests in eta-space.
struct Direction {
  std::vector<double> v;               // n components, unit
  std::optional<TriadicCube> source;   // grid cube when quantized
  RatVec eta;                          // exact parameter; empty if unavailable

  int n() const { return (int)v.size(); }
};

inline Direction direction_from_eta(const RatVec& eta) {
  Direction d;
  d.eta = eta;
  double s = 1.0;
  for (auto& e : eta) s += e.to_double() * e.to_double();
  double inv = 1.0 / std::sqrt(s);
  d.v.resize(eta.size() + 1);
  for (size_t i = 0; i < eta.size(); ++i) d.v[i] = eta[i].to_double() * inv;
  d.v.back() = inv;
  return d;
}

inline Direction direction_from_cube(const TriadicCube& q) {
  Direction d = direction_from_eta(q.center_vec());
  d.source = q;
  return d;
}

inline Direction direction_from_vector(std::vector<double> v) {
  double s = 0.0;
  for (double c : v) s += c * c;
  if (s <= 0.0) throw std::invalid_argument("direction: zero vector");
  double inv = 1.0 / std::sqrt(s);
  for (double& c : v) c *= inv;
  Direction d;
  d.v = std::move(v);
  return d;
}

inline void require_unit(const Direction& d) {
  double s = 0.0;
  for (double c : d.v) s += c * c;
  if (std::abs(s - 1.0) > 1e-12)
    throw std::invalid_argument("direction: not a unit vector");
}

// sqrt(1 - cos(angle)) = |v - v'| / sqrt(2); zero iff equal, sqrt(2) for
// antipodal pairs.
inline double grassmann_dist(const Direction& a, const Direction& b) {
  require_unit(a);
  require_unit(b);
  double s = 0.0;
  for (size_t i = 0; i < a.v.size(); ++i) {
    double t = a.v[i] - b.v[i];
    s += t * t;
  }
  return std::sqrt(s / 2.0);
}

// Geodesic rotation in span{v, e_n} taking v to e_n, identity on the
// orthogonal complement. Undefined at v = -e_n.
struct Rotation {
  int n = 0;
  std::array<double, 9> m{};  // row-major n x n

  std::vector<double> apply(const std::vector<double>& x) const {
    std::vector<double> y(n, 0.0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) y[i] += m[i * n + j] * x[j];
    return y;
  }
};

inline Rotation rotation_to_pole(const Direction& dir) {
  require_unit(dir);
  int n = dir.n();
  double c = dir.v[n - 1];  // cos angle to e_n
  if (c < -1.0 + 1e-14)
    throw std::domain_error("rotation: singular at v = -e_n");
  Rotation R;
  R.n = n;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) R.m[i * n + j] = (i == j) ? 1.0 : 0.0;
  // r = e_n - c v, s = |r| = sin angle
  std::vector<double> r(n);
  double s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    r[i] = (i == n - 1 ? 1.0 : 0.0) - c * dir.v[i];
    s2 += r[i] * r[i];
  }
  double s = std::sqrt(s2);
  if (s < 1e-300) return R;  // v == e_n
  for (auto& ri : r) ri /= s;
  // R x = x + ((c-1)(v.x) - s(r.x)) v + (s(v.x) + (c-1)(r.x)) r
  for (int j = 0; j < n; ++j) {
    double vj = dir.v[j], rj = r[j];
    for (int i = 0; i < n; ++i) {
      R.m[i * n + j] += ((c - 1.0) * vj - s * rj) * dir.v[i] +
                        (s * vj + (c - 1.0) * rj) * r[i];
    }
  }
  return R;
}

// coordinates of the projection onto the hyperplane normal to dir, expressed
// in R^d through the geodesic rotation
inline std::vector<double> project_rotate(const Rotation& R,
                                          const Direction& dir,
                                          const std::vector<double>& xi) {
  int n = dir.n();
  double ip = 0.0;
  for (int i = 0; i < n; ++i) ip += xi[i] * dir.v[i];
  std::vector<double> p(n);
  for (int i = 0; i < n; ++i) p[i] = xi[i] - ip * dir.v[i];
  std::vector<double> y = R.apply(p);
  y.pop_back();  // last coordinate vanishes
  return y;
}

// Anisotropic rescaling of a spanning vector u: divides the first d
// coordinates by lambda and renormalizes; returns the pair (u_rescaled, A).
inline std::pair<std::vector<double>, double> rescale_spanning(
    const std::vector<double>& u, double lambda) {
  if (lambda <= 0.0) throw std::invalid_argument("rescale: lambda must be > 0");
  int n = (int)u.size();
  std::vector<double> w(u);
  for (int i = 0; i + 1 < n; ++i) w[i] /= lambda;
  double A = 0.0;
  for (double c : w) A += c * c;
  A = std::sqrt(A);
  for (double& c : w) c /= A;
  return {w, A};
}

// The induced map on hyperplane normals: (v_1..v_d, v_n) -> normalize(lambda
// v_1..lambda v_d, v_n). Shrinking lambda drives normals toward e_n.
inline Direction rescale_normal(const Direction& dir, double lambda) {
  if (lambda <= 0.0) throw std::invalid_argument("rescale: lambda must be > 0");
  std::vector<double> w(dir.v);
  for (size_t i = 0; i + 1 < w.size(); ++i) w[i] *= lambda;
  return direction_from_vector(std::move(w));
}

// rescale every value of a palette of normals
inline std::vector<Direction> rescale_normals(const std::vector<Direction>& v,
                                              double lambda) {
  std::vector<Direction> out;
  out.reserve(v.size());
  for (const auto& d : v) out.push_back(rescale_normal(d, lambda));
  return out;
}

}  // namespace tfa
