#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tfa/signature.hpp"
#include "tfa/tile.hpp"

#include <json.hpp>

namespace tfa {

enum class TreeKind { generic, lacunary, overlapping };

inline const char* tree_kind_name(TreeKind k) {
  switch (k) {
    case TreeKind::generic: return "generic";
    case TreeKind::lacunary: return "lacunary";
    case TreeKind::overlapping: return "overlapping";
  }
  return "?";
}

// Collection of same-annulus tiles pinned to a top (xi, R). The frequency
// point xi is stored through its exact parameter eta with (eta, 1)' = xi, so
// membership in eccentricities is a cube test.
struct Tree {
  std::vector<Tile> tiles;
  Tile top;        // carries R_T = top.space() and the top eccentricity
  RatVec top_eta;  // exact parameter of xi_T
  int rho = 0;     // spatial slack exponent: tiles meet 3^rho R_T
  TreeKind kind = TreeKind::generic;

  Pll top_space() const { return top.space(); }
  bool empty() const { return tiles.empty(); }
  size_t size() const { return tiles.size(); }

  void sort_canonical() { std::sort(tiles.begin(), tiles.end()); }
};

struct TreeReport {
  bool valid = true;
  std::string violation;  // first failed axiom, e.g. "T2: scale"
};

// eta in Q \ Q-degree (half-open cells; exact)
inline bool eta_in_peripheral(const RatVec& eta, const TriadicCube& Q) {
  if (!Q.contains_point(eta)) return false;
  return !Q.center_child().contains_point(eta);
}

inline TreeReport validate_tree(const Tree& T) {
  TreeReport rep;
  auto fail = [&](const std::string& why) {
    rep.valid = false;
    rep.violation = why;
    return rep;
  };
  if (T.rho < 0) return fail("rho: negative");
  for (const auto& t : T.tiles)
    if (!t.same_annulus(T.top))
      throw std::invalid_argument("validate_tree: mixed annulus");
  Pll RT = T.top_space();
  Pll dil = RT.dilate(pow3(T.rho));
  Rat sclT = RT.scl();
  const Rat K = T.top.grids->gc.K();
  for (const auto& t : T.tiles) {
    Pll Rt = t.space();
    // (T2) scale cap, checked first so oversized tiles report as T2
    if (Rt.scl() > sclT) return fail("T2: scale exceeds top");
    // (T1) frequency pin, refined by kind
    switch (T.kind) {
      case TreeKind::generic:
        if (!t.Q.contains_point(T.top_eta)) return fail("T1: xi outside ecc");
        break;
      case TreeKind::lacunary:
        if (!eta_in_peripheral(T.top_eta, t.Q))
          return fail("T1: xi not in ecc minus center");
        break;
      case TreeKind::overlapping:
        if (!t.Q.center_child().contains_point(T.top_eta))
          return fail("T1: xi outside ecc center");
        break;
    }
    // (T2) spatial contact with the dilated top
    if (!Rt.meets(dil)) return fail("T2: no contact with dilated top");
    // shadow containment, consequence of the containment lemma
    if (!dil.dilate(K).contains(Rt)) return fail("shadow: tile escapes K*3^rho top");
  }
  return rep;
}

// Realize a top tile from a frequency point and the (L, I) placement: the
// eccentricity cube is the cell containing eta at the level forced by
// l(Q) = l(I)/l(L).
inline Tile materialize_top(const TileGrids& g, const RatVec& eta,
                            const TriadicCube& L, const TriadicCube& I) {
  int eL = L.level * L.cfg->kappa;
  int eI = I.level * I.cfg->kappa;
  if ((eI - eL) % g.dirs.kappa != 0)
    throw TileError("materialize_top: no grid level matches l(I)/l(L)");
  int jQ = (eI - eL) / g.dirs.kappa;
  TriadicCube Q = cell_at(g.dirs, jQ, eta);
  return make_tile(g, L, I, Q);
}

// ---- splitting a 3^rho-tree into congruent-top subtrees ---------------------

// Disjoint cover of T by trees whose tops are lattice translates of R_T; each
// tile goes to the lexicographically first translate its space component
// touches. Output trees are valid rho = 0 trees of the same kind.
inline std::vector<Tree> split_tree(const Tree& T) {
  TreeReport rep = validate_tree(T);
  if (!rep.valid)
    throw std::invalid_argument("split_tree: invalid input tree: " + rep.violation);
  if (T.rho == 0) return {T};
  Pll RT = T.top_space();
  int d = RT.d;
  std::map<std::vector<long long>, Tree> parts;
  for (const auto& t : T.tiles) {
    Pll Rt = t.space();
    // candidate horizontal steps: translates of R_T whose box meets the tile
    std::vector<std::vector<long long>> cand = {{}};
    for (int i = 0; i < d; ++i) {
      Rat side = RT.hi[i] - RT.lo[i];
      long long a0 = floor_div(Rt.lo[i] - RT.hi[i], side);
      long long a1 = floor_div(Rt.hi[i] - RT.lo[i], side) + 1;
      std::vector<std::vector<long long>> next;
      for (auto& c : cand)
        for (long long a = a0; a <= a1; ++a) {
          auto cc = c;
          cc.push_back(a);
          next.push_back(cc);
        }
      cand.swap(next);
    }
    std::optional<std::vector<long long>> chosen;
    for (auto& c : cand) {
      Pll shifted = RT.translate_steps(c, 0);
      // common horizontal box; skip translates that miss horizontally
      bool horiz = true;
      RatVec blo(d), bhi(d);
      for (int i = 0; i < d; ++i) {
        blo[i] = std::max(Rt.lo[i], shifted.lo[i],
                          [](const Rat& x, const Rat& y) { return x < y; });
        bhi[i] = std::min(Rt.hi[i], shifted.hi[i],
                          [](const Rat& x, const Rat& y) { return x < y; });
        if (bhi[i] < blo[i]) horiz = false;
      }
      if (!horiz) continue;
      // vertical window from the shear range of <x, eta_T - eta_t> over box
      Rat m(0), M(0);
      for (int i = 0; i < d; ++i) {
        Rat w = RT.eta[i] - Rt.eta[i];
        Rat p = w * blo[i], q = w * bhi[i];
        if (p < q) { m += p; M += q; } else { m += q; M += p; }
      }
      Rat h = RT.height();
      long long b0 = floor_div(Rt.ilo - RT.ihi + m, h) - 1;
      long long b1 = floor_div(Rt.ihi - RT.ilo + M, h) + 1;
      for (long long b = b0; b <= b1; ++b) {
        Pll can = RT.translate_steps(c, b);
        if (Rt.meets(can)) {
          std::vector<long long> key = c;
          key.push_back(b);
          if (!chosen || key < *chosen) chosen = key;
        }
      }
    }
    if (!chosen) throw std::logic_error("split_tree: tile met no translate");
    auto it = parts.find(*chosen);
    if (it == parts.end()) {
      Tree sub;
      std::vector<long long> steps(chosen->begin(), chosen->end() - 1);
      long long bi = chosen->back();
      Tile top = T.top;
      for (int i = 0; i < d; ++i) top.L.idx[i] += steps[i];
      top.I.idx[0] += bi;
      sub.top = top;
      sub.top_eta = T.top_eta;
      sub.rho = 0;
      sub.kind = T.kind;
      it = parts.emplace(*chosen, std::move(sub)).first;
    }
    it->second.tiles.push_back(t);
  }
  std::vector<Tree> out;
  out.reserve(parts.size());
  for (auto& [k, v] : parts) {
    v.sort_canonical();
    out.push_back(std::move(v));
  }
  return out;
}

// ---- strong disjointness -----------------------------------------------------

struct DisjointWitness {
  bool disjoint = true;
  Tile t, tp;   // violating pair (tp's tree differs from t's)
  int tree_t = -1, tree_tp = -1;
};

// Family condition: across distinct trees, strictly nested eccentricities
// force the fatter tile away from the K^2-dilated top of the finer one.
inline DisjointWitness check_strongly_disjoint(const std::vector<Tree>& fam) {
  DisjointWitness w;
  for (size_t a = 0; a < fam.size(); ++a) {
    const Rat K2 = fam[a].top.grids->gc.K_pow(2);
    Pll topA = fam[a].top_space().dilate(K2);
    for (size_t b = 0; b < fam.size(); ++b) {
      if (a == b) continue;
      for (const auto& t : fam[a].tiles) {
        for (const auto& tp : fam[b].tiles) {
          // ecc(t) inside the open center of ecc(tp)
          if (!tp.Q.center_child().contains(t.Q)) continue;
          if (tp.space().meets(topA)) {
            w.disjoint = false;
            w.t = t;
            w.tp = tp;
            w.tree_t = (int)a;
            w.tree_tp = (int)b;
            return w;
          }
        }
      }
    }
  }
  return w;
}

// ---- serialization -----------------------------------------------------------

inline nlohmann::json tree_to_json(const Tree& T) {
  nlohmann::json j;
  nlohmann::json tiles = nlohmann::json::array();
  Tree sorted = T;
  sorted.sort_canonical();
  for (const auto& t : sorted.tiles) tiles.push_back(tile_to_json(t));
  j["tiles"] = tiles;
  nlohmann::json xi = nlohmann::json::array();
  for (const auto& c : T.top_eta) xi.push_back({{"num", c.num}, {"den", c.den}});
  j["top"] = {{"xi", xi}, {"R", tile_to_json(T.top)}};
  j["rho"] = T.rho;
  j["kind"] = tree_kind_name(T.kind);
  return j;
}

}  // namespace tfa
