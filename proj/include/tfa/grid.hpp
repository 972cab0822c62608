#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "tfa/rational.hpp"

namespace tfa {

// A separated triadic grid: level-j cells have side 3^{-j*kappa}, optionally
// translated by a global rational shift per axis. The shift must keep the
// nesting property across levels, which holds for any global translation.
struct GridConfig {
  int dim = 1;
  int kappa = 2;
  RatVec shift;  // size dim, components in [0,1)

  GridConfig() = default;
  GridConfig(int d, int k, RatVec s = {}) : dim(d), kappa(k), shift(std::move(s)) {
    if (kappa < 1) throw std::invalid_argument("GridConfig: kappa must be >= 1");
    if (shift.empty()) shift.assign(dim, Rat(0));
    if ((int)shift.size() != dim)
      throw std::invalid_argument("GridConfig: shift size mismatch");
    for (auto& c : shift)
      if (c < Rat(0) || c >= Rat(1))
        throw std::invalid_argument("GridConfig: shift outside [0,1)");
  }

  Rat cell_side(int level) const { return pow3(-level * kappa); }
  long long branching() const {  // children per axis
    long long b = 1;
    for (int i = 0; i < kappa; ++i) b *= 3;
    return b;
  }

  bool operator==(const GridConfig& o) const {
    return dim == o.dim && kappa == o.kappa && shift == o.shift;
  }
};

// One cell of a triadic grid: level j and integer index per axis.
// Cell = prod_i [shift_i + idx_i * s, shift_i + (idx_i+1) * s), s = 3^{-j*kappa}.
struct TriadicCube {
  const GridConfig* cfg = nullptr;
  int level = 0;
  std::array<long long, 3> idx{0, 0, 0};

  TriadicCube() = default;
  TriadicCube(const GridConfig& c, int lvl, std::array<long long, 3> i)
      : cfg(&c), level(lvl), idx(i) {}

  int dim() const { return cfg->dim; }
  Rat side() const { return cfg->cell_side(level); }
  Rat low(int axis) const { return cfg->shift[axis] + Rat(idx[axis]) * side(); }
  Rat high(int axis) const { return cfg->shift[axis] + Rat(idx[axis] + 1) * side(); }
  Rat center(int axis) const {
    return cfg->shift[axis] + (Rat(idx[axis]) + Rat(1, 2)) * side();
  }
  RatVec center_vec() const {
    RatVec c(dim());
    for (int i = 0; i < dim(); ++i) c[i] = center(i);
    return c;
  }

  // half-open membership
  bool contains_point(const RatVec& x) const {
    for (int i = 0; i < dim(); ++i)
      if (x[i] < low(i) || x[i] >= high(i)) return false;
    return true;
  }

  bool same_grid(const TriadicCube& o) const { return *cfg == *o.cfg; }

  // this contains o (requires same grid); equality counts as containment
  bool contains(const TriadicCube& o) const {
    if (o.level < level) return false;
    TriadicCube a = o.ancestor(o.level - level);
    return a.idx == idx;
  }

  bool meets(const TriadicCube& o) const {
    return level <= o.level ? contains(o) : o.contains(*this);
  }

  bool operator==(const TriadicCube& o) const {
    return level == o.level && idx == o.idx && same_grid(o);
  }

  TriadicCube ancestor(int steps) const {
    TriadicCube a = *this;
    long long b = cfg->branching();
    for (int s = 0; s < steps; ++s) {
      a.level -= 1;
      for (int i = 0; i < dim(); ++i) {
        long long q = a.idx[i] / b;
        if (a.idx[i] % b != 0 && a.idx[i] < 0) --q;
        a.idx[i] = q;
      }
    }
    return a;
  }
  TriadicCube parent() const { return ancestor(1); }

  // the concentric child, one grid level down; exists since 3^kappa is odd
  TriadicCube center_child() const {
    TriadicCube c = *this;
    c.level += 1;
    long long b = cfg->branching();
    for (int i = 0; i < dim(); ++i) c.idx[i] = idx[i] * b + (b - 1) / 2;
    return c;
  }

  // peripheral children enumerated 1..(3^{kappa*dim}-1) in a universal
  // (position-relative) lexicographic order that skips the center
  TriadicCube peripheral_child(long long tau) const {
    long long b = cfg->branching();
    long long total = 1;
    for (int i = 0; i < dim(); ++i) total *= b;
    long long centre_rank = 0;
    {
      long long mid = (b - 1) / 2, w = 1;
      for (int i = dim() - 1; i >= 0; --i) { centre_rank += mid * w; w *= b; }
    }
    if (tau < 1 || tau >= total)
      throw std::invalid_argument("peripheral_child: tau out of range");
    long long rank = (tau - 1) < centre_rank ? (tau - 1) : tau;  // skip center
    TriadicCube c = *this;
    c.level += 1;
    for (int i = dim() - 1; i >= 0; --i) {
      c.idx[i] = idx[i] * b + rank % b;
      rank /= b;
    }
    return c;
  }

  long long peripheral_count() const {
    long long total = 1;
    for (int i = 0; i < dim(); ++i) total *= cfg->branching();
    return total - 1;
  }

  // child offset pattern relative to own low corner, in units of child side
  std::array<long long, 3> child_relpos(long long tau) const {
    TriadicCube c = peripheral_child(tau);
    long long b = cfg->branching();
    std::array<long long, 3> r{0, 0, 0};
    for (int i = 0; i < dim(); ++i) r[i] = c.idx[i] - idx[i] * b;
    return r;
  }

  std::string key() const {
    std::string k = "L" + std::to_string(level);
    for (int i = 0; i < dim(); ++i) k += ":" + std::to_string(idx[i]);
    return k;
  }
};

// cell of the grid at `level` containing x
inline TriadicCube cell_at(const GridConfig& g, int level, const RatVec& x) {
  TriadicCube c;
  c.cfg = &g;
  c.level = level;
  Rat s = g.cell_side(level);
  for (int i = 0; i < g.dim; ++i) c.idx[i] = floor_div(x[i] - g.shift[i], s);
  return c;
}

// lexicographic total order used for deterministic tie-breaking
inline bool cube_less(const TriadicCube& a, const TriadicCube& b) {
  if (a.level != b.level) return a.level < b.level;
  for (int i = 0; i < a.dim(); ++i)
    if (a.idx[i] != b.idx[i]) return a.idx[i] < b.idx[i];
  return false;
}

}  // namespace tfa
