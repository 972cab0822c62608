#pragma once

#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <vector>

#include "tfa/rng.hpp"
#include "tfa/tile.hpp"

namespace tfa {

// Parameters of a desk-scale tile universe living over the unit box.
struct UniverseParams {
  int d = 1;
  int kappa = 1;
  int ann_level = 2;      // vertical level: |I| = 3^{-ann_level*kappa}
  int L_level_min = 0;    // coarsest horizontal level (side 3^{-min*kappa})
  int L_level_max = 2;    // finest
  int dir_level_min = -4; // coarsest admissible direction cube
  Rat cap_radius = Rat(130);  // admissibility neighborhood
  Rat gen_radius = Rat(3, 2); // window directions are actually drawn from
  int k_n = 3;            // containment constant exponent (calibrated)
};

// Owns the grid configs (stable address) plus helpers to sample admissible
// tiles and enumerate tree-top candidates.
class TileUniverse {
 public:
  explicit TileUniverse(const UniverseParams& p) : p_(p) {
    grids_ = std::make_unique<TileGrids>();
    grids_->space = GridConfig(p.d, p.kappa);
    grids_->height = GridConfig(1, p.kappa);
    grids_->dirs = GridConfig(p.d, p.kappa);
    grids_->gc.d = p.d;
    grids_->gc.k_n = p.k_n;
    grids_->cap_radius = p.cap_radius;
    grids_->dir_level_min = p.dir_level_min;
  }

  const TileGrids& grids() const { return *grids_; }
  const UniverseParams& params() const { return p_; }
  int ann_exp() const { return p_.ann_level * p_.kappa; }

  long long cells_per_axis(int level) const {
    long long c = 1;
    for (int i = 0; i < level * p_.kappa; ++i) c *= 3;
    return c;  // number of level-cells per unit length (level >= 0)
  }

  // direction-cube index window at a level, restricted to the narrow
  // generation window (admissibility itself uses the wide cap)
  std::pair<long long, long long> dir_index_range(int level) const {
    Rat side = grids_->dirs.cell_side(level);
    long long m = floor_div(p_.gen_radius, side);
    if (m < 1) m = 1;
    return {-m, m - 1};
  }

  Tile random_tile(Rng& rng) const {
    for (int attempt = 0; attempt < 256; ++attempt) {
      int jL = (int)rng.range(p_.L_level_min, p_.L_level_max);
      int jQ = p_.ann_level - jL;
      if (jQ < p_.dir_level_min) continue;
      TriadicCube L{grids_->space, jL, {0, 0, 0}};
      long long nL = cells_per_axis(jL);
      for (int i = 0; i < p_.d; ++i) L.idx[i] = rng.range(0, nL - 1);
      TriadicCube I{grids_->height, p_.ann_level, {0, 0, 0}};
      I.idx[0] = rng.range(0, cells_per_axis(p_.ann_level) - 1);
      auto [qlo, qhi] = dir_index_range(jQ);
      TriadicCube Q{grids_->dirs, jQ, {0, 0, 0}};
      for (int i = 0; i < p_.d; ++i) Q.idx[i] = rng.range(qlo, qhi);
      try {
        return make_tile(*grids_, L, I, Q);
      } catch (const TileError&) {
        continue;  // cap rejection near the corner of the index window
      }
    }
    throw std::runtime_error("random_tile: no admissible tile found");
  }

  std::vector<Tile> random_tiles(Rng& rng, int count) const {
    std::set<std::string> seen;
    std::vector<Tile> out;
    while ((int)out.size() < count) {
      Tile t = random_tile(rng);
      if (seen.insert(t.key()).second) out.push_back(t);
    }
    return out;
  }

  // nested pair: ecc(t') inside ecc(t), same annulus, spatially nearby
  std::pair<Tile, Tile> random_nested_pair(Rng& rng) const {
    for (int attempt = 0; attempt < 4096; ++attempt) {
      Tile t = random_tile(rng);
      int jQ2 = t.Q.level + (int)rng.range(0, 1);  // equal or one level deeper
      int jL2 = p_.ann_level - jQ2;
      if (jL2 < p_.L_level_min || jL2 > p_.L_level_max) continue;
      TriadicCube Q2 = t.Q;
      if (jQ2 > t.Q.level) {
        long long b = grids_->dirs.branching();
        long long nchild = 1;
        for (int i = 0; i < p_.d; ++i) nchild *= b;
        long long pick = rng.range(0, nchild - 1);
        Q2.level += 1;
        for (int i = p_.d - 1; i >= 0; --i) {
          Q2.idx[i] = t.Q.idx[i] * b + pick % b;
          pick /= b;
        }
      }
      TriadicCube L2{grids_->space, jL2, {0, 0, 0}};
      long long nL = cells_per_axis(jL2);
      // place near t so dilates have a chance to meet
      for (int i = 0; i < p_.d; ++i) {
        long long base = floor_div(t.L.low(i), grids_->space.cell_side(jL2));
        long long span = std::max<long long>(1, nL / 4);
        long long v = base + rng.range(-span, span);
        L2.idx[i] = std::clamp<long long>(v, 0, nL - 1);
      }
      TriadicCube I2 = t.I;
      long long nI = cells_per_axis(p_.ann_level);
      long long vi = I2.idx[0] + rng.range(-2, 2);
      I2.idx[0] = std::clamp<long long>(vi, 0, nI - 1);
      try {
        return {t, make_tile(*grids_, L2, I2, Q2)};
      } catch (const TileError&) {
        continue;
      }
    }
    throw std::runtime_error("random_nested_pair: generation failed");
  }

  // Admissible tiles at the given horizontal level whose direction cube is
  // related (ancestor or descendant) to one of the target cubes and whose
  // slab reaches the given box window. This is the tree-top candidate window:
  // a configured truncation of the full admissible family.
  std::vector<Tile> aligned_tops(int jL, const std::vector<TriadicCube>& targets,
                                 const RatVec& blo, const RatVec& bhi,
                                 const Rat& bilo, const Rat& bihi) const {
    std::vector<Tile> out;
    int jQ = p_.ann_level - jL;
    if (jQ < p_.dir_level_min) return out;
    // related direction cubes at level jQ
    std::vector<TriadicCube> qs;
    std::set<std::string> seen;
    for (const auto& q : targets) {
      if (jQ <= q.level) {
        TriadicCube a = q.ancestor(q.level - jQ);
        if (seen.insert(a.key()).second) qs.push_back(a);
      } else {
        int depth = jQ - q.level;
        if (depth > 2) continue;  // truncate the descent
        long long b = grids_->dirs.branching();
        long long per = 1;
        for (int i = 0; i < p_.d * depth; ++i) per *= b;
        for (long long r = 0; r < per; ++r) {
          TriadicCube c = q;
          long long rr = r;
          for (int s = 0; s < depth; ++s) {
            c.level += 1;
            std::array<long long, 3> nidx{0, 0, 0};
            for (int i = p_.d - 1; i >= 0; --i) {
              nidx[i] = c.idx[i] * b + rr % b;
              rr /= b;
            }
            c.idx = nidx;
          }
          if (seen.insert(c.key()).second) qs.push_back(c);
        }
      }
    }
    Rat sL = grids_->space.cell_side(jL);
    Rat sI = grids_->height.cell_side(p_.ann_level);
    std::vector<long long> lo(p_.d), hi(p_.d);
    for (int i = 0; i < p_.d; ++i) {
      lo[i] = floor_div(blo[i], sL);
      hi[i] = floor_div(bhi[i], sL);
    }
    std::array<long long, 3> li{0, 0, 0};
    std::function<void(int)> rec = [&](int axis) {
      if (axis == p_.d) {
        TriadicCube L{grids_->space, jL, li};
        for (const auto& Q : qs) {
          if (!grids_->dir_cube_admissible(Q)) continue;
          RatVec eta = Q.center_vec();
          Rat m(0), M(0);
          for (int i = 0; i < p_.d; ++i) {
            Rat a = eta[i] * L.low(i), b = eta[i] * L.high(i);
            if (a < b) { m += a; M += b; } else { m += b; M += a; }
          }
          long long iwlo = floor_div(bilo + m, sI) - 1;
          long long iwhi = floor_div(bihi + M, sI) + 1;
          for (long long ii = iwlo; ii <= iwhi; ++ii) {
            TriadicCube I{grids_->height, p_.ann_level, {ii, 0, 0}};
            try {
              out.push_back(make_tile(*grids_, L, I, Q));
            } catch (const TileError&) {
            }
          }
        }
        return;
      }
      for (long long v = lo[axis]; v <= hi[axis]; ++v) {
        li[axis] = v;
        rec(axis + 1);
      }
    };
    rec(0);
    return out;
  }

  // All admissible tiles at the given horizontal level whose space component
  // meets the closed box spanned by [blo, bhi] x [bilo, bihi]; used to
  // enumerate tree-top candidates.
  std::vector<Tile> tops_at_level(int jL, const RatVec& blo, const RatVec& bhi,
                                  const Rat& bilo, const Rat& bihi) const {
    std::vector<Tile> out;
    int jQ = p_.ann_level - jL;
    if (jQ < p_.dir_level_min) return out;
    Rat sL = grids_->space.cell_side(jL);
    Rat sI = grids_->height.cell_side(p_.ann_level);
    std::vector<long long> lo(p_.d), hi(p_.d);
    for (int i = 0; i < p_.d; ++i) {
      lo[i] = floor_div(blo[i], sL);
      hi[i] = floor_div(bhi[i], sL);
    }
    auto [qlo, qhi] = dir_index_range(jQ);

    std::array<long long, 3> li{0, 0, 0};
    std::function<void(int)> rec = [&](int axis) {
      if (axis == p_.d) {
        TriadicCube L{grids_->space, jL, li};
        for (long long q0 = qlo; q0 <= qhi; ++q0) {
          std::array<long long, 3> qi{q0, 0, 0};
          long long q1lo = p_.d > 1 ? qlo : 0, q1hi = p_.d > 1 ? qhi : 0;
          for (long long q1 = q1lo; q1 <= q1hi; ++q1) {
            qi[1] = q1;
            TriadicCube Q{grids_->dirs, jQ, qi};
            if (!grids_->dir_cube_admissible(Q)) continue;
            // shear range of <x, eta> over the cube L
            RatVec eta = Q.center_vec();
            Rat m(0), M(0);
            for (int i = 0; i < p_.d; ++i) {
              Rat a = eta[i] * L.low(i), b = eta[i] * L.high(i);
              if (a < b) { m += a; M += b; } else { m += b; M += a; }
            }
            long long iwlo = floor_div(bilo + m, sI) - 1;
            long long iwhi = floor_div(bihi + M, sI) + 1;
            for (long long ii = iwlo; ii <= iwhi; ++ii) {
              TriadicCube I{grids_->height, p_.ann_level, {ii, 0, 0}};
              try {
                out.push_back(make_tile(*grids_, L, I, Q));
              } catch (const TileError&) {
              }
            }
          }
        }
        return;
      }
      for (long long v = lo[axis]; v <= hi[axis]; ++v) {
        li[axis] = v;
        rec(axis + 1);
      }
    };
    rec(0);
    return out;
  }

 private:
  UniverseParams p_;
  std::unique_ptr<TileGrids> grids_;
};

inline void sort_tiles(std::vector<Tile>& v) {
  std::sort(v.begin(), v.end());
}

}  // namespace tfa
