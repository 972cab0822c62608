#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tfa/direction.hpp"
#include "tfa/grid.hpp"
#include "tfa/parallelepiped.hpp"
#include "tfa/rational.hpp"

#include <json.hpp>

namespace tfa {

// Dimensional constant of the containment lemmas, K = 3^{k_n}; k_n is
// calibrated per (n, kappa) by randomized adversarial search and pinned in
// calibration.hpp.
struct GeometryConstants {
  int k_n = 2;
  int d = 1;
  int n() const { return d + 1; }
  Rat K() const { return pow3(k_n); }
  Rat K_pow(int p) const { return pow3(k_n * p); }
};

// Grids shared by a tile universe: the horizontal grid in R^d, the vertical
// grid in R, and the direction grid whose cubes parametrize caps around e_n.
struct TileGrids {
  GridConfig space;    // dim d
  GridConfig height;   // dim 1
  GridConfig dirs;     // dim d, centered at 0
  GeometryConstants gc;
  // Admissibility cap around e_n (the fattened neighborhood): generous by
  // design so the scale floor below stays mild. Universes draw directions
  // from a much narrower window.
  Rat cap_radius = Rat(130);
  int dir_level_min = -4;  // coarsest admissible direction cube

  int d() const { return space.dim; }
  int n() const { return space.dim + 1; }

  // largest admissible direction-cube side
  Rat max_dir_side() const { return dirs.cell_side(dir_level_min); }

  bool dir_cube_admissible(const TriadicCube& q) const {
    if (q.level < dir_level_min) return false;
    Rat r2 = cap_radius * cap_radius;
    // all corners of q inside the cap
    long long corners = 1ll << d();
    for (long long c = 0; c < corners; ++c) {
      Rat s(0);
      for (int i = 0; i < d(); ++i) {
        Rat v = (c >> i) & 1 ? q.high(i) : q.low(i);
        s += v * v;
      }
      if (s > r2) return false;
    }
    return true;
  }
};

struct TileError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Time-frequency atom: space component R(L, I, v) and frequency component
// determined by the eccentricity cube Q with l(Q) = l(I)/l(L).
struct Tile {
  const TileGrids* grids = nullptr;
  TriadicCube L;  // horizontal cube in R^d
  TriadicCube I;  // vertical interval
  TriadicCube Q;  // eccentricity cube in direction space

  int d() const { return grids->d(); }

  Rat scl() const { return L.side(); }
  int ann_exp() const { return I.level * I.cfg->kappa; }  // ann = 3^{ann_exp}
  Rat ann() const { return pow3(ann_exp()); }

  RatVec eta() const { return Q.center_vec(); }
  Direction dir() const { return direction_from_cube(Q); }

  Pll space() const { return make_pll(L, I, eta()); }

  TriadicCube ecc() const { return Q; }
  TriadicCube ecc_center() const { return Q.center_child(); }
  TriadicCube alpha(long long tau) const { return Q.peripheral_child(tau); }
  long long alpha_count() const { return Q.peripheral_count(); }

  bool same_annulus(const Tile& o) const { return ann_exp() == o.ann_exp(); }

  bool operator==(const Tile& o) const {
    return L == o.L && I == o.I && Q == o.Q;
  }

  // deterministic total order for tie-breaking
  std::string key() const {
    return L.key() + "|" + I.key() + "|" + Q.key();
  }
  bool operator<(const Tile& o) const {
    if (!(L == o.L)) return cube_less(L, o.L);
    if (!(I == o.I)) return cube_less(I, o.I);
    return cube_less(Q, o.Q);
  }
};

inline Tile make_tile(const TileGrids& g, const TriadicCube& L,
                      const TriadicCube& I, const TriadicCube& Q) {
  // side lengths expressed as powers of three: l(Q) = l(I) / l(L)
  int eL = L.level * L.cfg->kappa;
  int eI = I.level * I.cfg->kappa;
  int eQ = Q.level * Q.cfg->kappa;
  if (eQ != eI - eL)
    throw TileError("invalid-tile: l(Q) != l(I)/l(L)");
  if (!g.dir_cube_admissible(Q))
    throw TileError("inadmissible: eccentricity cube outside the cap");
  // scale floor: l(L) must exceed the reciprocal of the coarsest cap side
  if (!(L.side() * g.max_dir_side() > Rat(1)))
    throw TileError("inadmissible: scale below the direction-resolution floor");
  Tile t;
  t.grids = &g;
  t.L = L;
  t.I = I;
  t.Q = Q;
  return t;
}

// t <=_k t': nested eccentricity and K^{k-1}-fattened spatial contact.
// Defined only within a fixed annulus.
inline bool rel_leq(const Tile& t, const Tile& tp, int k = 1) {
  if (!t.same_annulus(tp))
    throw std::invalid_argument("rel_leq: annuli differ, relation undefined");
  if (!t.Q.contains(tp.Q)) return false;  // ecc(t') subset of ecc(t)
  Pll a = t.space();
  Pll b = tp.space();
  if (k > 1) b = b.dilate(t.grids->gc.K_pow(k - 1));
  return a.meets(b);
}

inline bool incomparable(const Tile& a, const Tile& b) {
  return !rel_leq(a, b) && !rel_leq(b, a);
}

// ---- canonical JSON record, bit-exact on the rational fields ---------------

inline nlohmann::json cube_to_json(const TriadicCube& c) {
  nlohmann::json j;
  j["j"] = c.level;
  std::vector<long long> ix(c.idx.begin(), c.idx.begin() + c.dim());
  j["idx"] = ix;
  return j;
}

inline TriadicCube cube_from_json(const nlohmann::json& j, const GridConfig& g) {
  TriadicCube c;
  c.cfg = &g;
  c.level = j.at("j").get<int>();
  auto ix = j.at("idx").get<std::vector<long long>>();
  if ((int)ix.size() != g.dim) throw TileError("cube: index arity mismatch");
  for (size_t i = 0; i < ix.size(); ++i) c.idx[i] = ix[i];
  return c;
}

inline nlohmann::json tile_to_json(const Tile& t) {
  nlohmann::json j;
  j["kappa"] = t.grids->space.kappa;
  j["L"] = cube_to_json(t.L);
  j["I"] = cube_to_json(t.I);
  j["Q"] = cube_to_json(t.Q);
  nlohmann::json sh = nlohmann::json::array();
  for (const auto& s : t.grids->space.shift)
    sh.push_back({{"num", s.num}, {"den", s.den}});
  j["shift"] = sh;
  return j;
}

inline Tile tile_from_json(const nlohmann::json& j, const TileGrids& g) {
  if (j.at("kappa").get<int>() != g.space.kappa)
    throw TileError("tile: kappa mismatch with grids");
  auto sh = j.at("shift");
  for (int i = 0; i < g.space.dim; ++i) {
    Rat s(sh.at(i).at("num").get<long long>(), sh.at(i).at("den").get<long long>());
    if (s != g.space.shift[i]) throw TileError("tile: shift mismatch with grids");
  }
  return make_tile(g, cube_from_json(j.at("L"), g.space),
                   cube_from_json(j.at("I"), g.height),
                   cube_from_json(j.at("Q"), g.dirs));
}

}  // namespace tfa
