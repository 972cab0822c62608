#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tfa/gauges.hpp"
#include "tfa/tree.hpp"

#include <json.hpp>

namespace tfa {

// positive-measure intersection test (interiors), exact
inline bool overlaps_positively(const Pll& a, const Pll& b) {
  RatVec blo(a.d), bhi(a.d);
  for (int i = 0; i < a.d; ++i) {
    blo[i] = std::max(a.lo[i], b.lo[i],
                      [](const Rat& x, const Rat& y) { return x < y; });
    bhi[i] = std::min(a.hi[i], b.hi[i],
                      [](const Rat& x, const Rat& y) { return x < y; });
    if (!(blo[i] < bhi[i])) return false;
  }
  Rat lo = b.ilo - a.ihi, hi = b.ihi - a.ilo;  // open target (lo, hi)
  Rat m(0), M(0);
  bool wzero = true;
  for (int i = 0; i < a.d; ++i) {
    Rat w = b.eta[i] - a.eta[i];
    if (!w.is_zero()) wzero = false;
    Rat p = w * blo[i], q = w * bhi[i];
    if (p < q) { m += p; M += q; } else { m += q; M += p; }
  }
  if (wzero) return lo < m && m < hi;
  return std::min(M, hi, [](const Rat& x, const Rat& y) { return x < y; }) >
         std::max(m, lo, [](const Rat& x, const Rat& y) { return x < y; });
}

// ---- sorting into pairwise-incomparable tops --------------------------------

struct IncomparablePart {
  Tile top;
  std::vector<Tile> tiles;
};

// Greedy sorting of a fixed-annulus collection: repeatedly take the tile of
// maximal measure as a top and absorb everything whose mu-dilate touches the
// top's mu-dilate with meeting eccentricities.
inline std::vector<IncomparablePart> decompose_incomparable(
    std::vector<Tile> tiles, int mu) {
  for (size_t i = 1; i < tiles.size(); ++i)
    if (!tiles[i].same_annulus(tiles[0]))
      throw std::invalid_argument("decompose_incomparable: mixed annulus");
  std::sort(tiles.begin(), tiles.end());
  std::vector<IncomparablePart> parts;
  std::vector<char> used(tiles.size(), 0);
  Rat dil = pow3(mu);
  size_t remaining = tiles.size();
  while (remaining > 0) {
    // maximal measure, ties by the canonical tile order
    int best = -1;
    Rat best_vol(0);
    for (size_t i = 0; i < tiles.size(); ++i) {
      if (used[i]) continue;
      Rat v = tiles[i].space().volume();
      if (best < 0 || best_vol < v) {
        best = (int)i;
        best_vol = v;
      }
    }
    IncomparablePart part;
    part.top = tiles[best];
    Pll top_dil = part.top.space().dilate(dil);
    for (size_t i = 0; i < tiles.size(); ++i) {
      if (used[i]) continue;
      if (!tiles[i].Q.meets(part.top.Q)) continue;
      Pll cand = tiles[i].space().dilate(dil);
      if (!cand.meets(top_dil)) continue;
      used[i] = 1;
      --remaining;
      part.tiles.push_back(tiles[i]);
    }
    parts.push_back(std::move(part));
  }
  return parts;
}

struct PostconditionReport {
  bool ok = true;
  std::string what;
};

// The five postconditions of the sorting algorithm, checked exactly.
inline PostconditionReport check_incomparable_postconditions(
    const std::vector<IncomparablePart>& parts, const std::vector<Tile>& input,
    int mu, bool input_incomparable,
    std::optional<TreeKind> input_kind = std::nullopt) {
  PostconditionReport rep;
  auto fail = [&](const std::string& w) {
    rep.ok = false;
    rep.what = w;
    return rep;
  };
  // partition identity
  std::multiset<std::string> in, out;
  for (const auto& t : input) in.insert(t.key());
  for (const auto& p : parts)
    for (const auto& t : p.tiles) out.insert(t.key());
  if (in != out) return fail("partition: multiset mismatch");
  if (parts.empty()) return rep;
  const TileGrids& g = *parts[0].top.grids;
  int kn = g.gc.k_n;
  for (const auto& p : parts) {
    // (i) a K 3^mu tree with top P_j; for mu = 0 additionally a 1-tree
    Tree T;
    T.top = p.top;
    T.top_eta = p.top.Q.center_vec();
    T.rho = kn + mu;
    T.kind = TreeKind::generic;
    T.tiles = p.tiles;
    auto r = validate_tree(T);
    if (!r.valid) return fail("(i) tree: " + r.violation);
    if (mu == 0) {
      T.rho = 0;
      r = validate_tree(T);
      if (!r.valid) return fail("(i) 1-tree: " + r.violation);
    }
    // (iii) shadow inside the dilated top
    Pll shadow = p.top.space().dilate(pow3(mu) * g.gc.K());
    for (const auto& t : p.tiles)
      if (!shadow.contains(t.space())) return fail("(iii) shadow violated");
    // (ii) disjoint space components under incomparable input
    if (input_incomparable) {
      for (size_t i = 0; i < p.tiles.size(); ++i)
        for (size_t j = i + 1; j < p.tiles.size(); ++j)
          if (overlaps_positively(p.tiles[i].space(), p.tiles[j].space()))
            return fail("(ii) overlap inside a part");
    }
    // (v) kind preserved: a common witness region of the declared kind exists
    if (input_kind && !p.tiles.empty()) {
      // eccentricities form a chain; find the smallest
      Tile smallest = p.tiles[0];
      for (const auto& t : p.tiles) {
        if (smallest.Q.contains(t.Q)) smallest = t;
        else if (!t.Q.contains(smallest.Q))
          return fail("(v) eccentricities not nested");
      }
      if (*input_kind == TreeKind::lacunary) {
        // lacunary witness exists iff no member's center swallows the minimum
        bool witness = true;
        for (const auto& t : p.tiles)
          if (!(t.Q == smallest.Q) && t.Q.center_child().contains(smallest.Q))
            witness = false;
        if (!witness) return fail("(v) no lacunary witness");
      } else if (*input_kind == TreeKind::overlapping) {
        for (const auto& t : p.tiles)
          if (!(t.Q == smallest.Q) &&
              !t.Q.center_child().contains(smallest.Q))
            return fail("(v) no overlapping witness");
      }
    }
  }
  // (iv) tops with meeting eccentricities have disjoint dilates
  for (size_t i = 0; i < parts.size(); ++i)
    for (size_t j = i + 1; j < parts.size(); ++j) {
      if (!parts[i].top.Q.meets(parts[j].top.Q)) continue;
      Pll a = parts[i].top.space().dilate(pow3(mu));
      Pll b = parts[j].top.space().dilate(pow3(mu));
      if (overlaps_positively(a, b)) return fail("(iv) top dilates overlap");
    }
  return rep;
}

// ---- density tops -------------------------------------------------------------

struct DensityTops {
  std::vector<Tile> light, heavy;
  std::vector<Tile> tops;                  // pairwise incomparable
  std::map<std::string, int> assignment;   // heavy tile -> top index, <=_2
  double delta = 0.0;                      // densesup of the input
  double top_volume = 0.0;                 // sum of top measures
};

inline DensityTops select_density_tops(const GaugeContext& ctx,
                                       const std::vector<Tile>& P) {
  DensityTops out;
  out.delta = densesup_set(ctx, P);
  if (out.delta <= 0.0) {
    out.light = P;
    std::sort(out.light.begin(), out.light.end());
    return out;
  }
  std::vector<Tile> sorted = P;
  std::sort(sorted.begin(), sorted.end());
  std::map<std::string, Tile> carrier;  // heavy tile -> its dense witness
  for (const auto& s : sorted) {
    if (densesup(ctx, s) > out.delta / 2.0) {
      out.heavy.push_back(s);
      // deterministic witness: maximal dense over the window, ties by key
      Tile best = s;
      double bd = -1.0;
      for (const Tile& cand : density_candidates(ctx, s)) {
        double dv = dense(ctx, cand);
        if (dv > bd || (dv == bd && cand.key() < best.key())) {
          bd = dv;
          best = cand;
        }
      }
      carrier.emplace(s.key(), best);
    } else {
      out.light.push_back(s);
    }
  }
  // maximal elements of the carriers: keep in decreasing measure order
  std::vector<Tile> raw;
  {
    std::set<std::string> seen;
    for (auto& [k, t] : carrier)
      if (seen.insert(t.key()).second) raw.push_back(t);
  }
  std::sort(raw.begin(), raw.end(), [](const Tile& a, const Tile& b) {
    Rat va = a.space().volume(), vb = b.space().volume();
    if (va != vb) return vb < va;
    return a < b;
  });
  std::map<std::string, int> kept_of;  // carrier key -> top index
  for (const auto& t : raw) {
    int dom = -1;
    for (size_t k = 0; k < out.tops.size(); ++k)
      if (rel_leq(t, out.tops[k])) {
        dom = (int)k;
        break;
      }
    if (dom < 0) {
      out.tops.push_back(t);
      kept_of[t.key()] = (int)out.tops.size() - 1;
    } else {
      kept_of[t.key()] = dom;
    }
  }
  for (const auto& s : out.heavy)
    out.assignment[s.key()] = kept_of.at(carrier.at(s.key()).key());
  for (const auto& t : out.tops)
    out.top_volume += t.space().volume().to_double();
  return out;
}

// ---- combined density-size decomposition ----------------------------------------

struct TreePack {
  Tree lacunary;             // the selected tree, minimal-signature witness
  Tree companion;            // its maximal K^2 companion with the same top
  std::vector<Tree> split;   // companion split into congruent-top 1-trees
};

struct CombinedResult {
  std::vector<Tile> light, heavy_small;
  std::vector<TreePack> packs;
  double delta = 0.0;   // densesup of the input
  double sigma = 0.0;   // size of the input
  double sum_tops = 0.0;  // sum over split trees of |R|
  DensityTops density;  // the underlying density stage
};

inline CombinedResult combined_density_size(const GaugeContext& ctx,
                                            const std::vector<Tile>& P) {
  CombinedResult out;
  out.density = select_density_tops(ctx, P);
  out.delta = out.density.delta;
  out.light = out.density.light;
  if (P.empty()) return out;
  out.sigma = size_gauge(ctx, P);
  const std::vector<Tile>& heavy = out.density.heavy;
  if (heavy.empty()) return out;

  SizeEngine eng(ctx, heavy);
  std::vector<char> active(eng.count(), 1);
  double sigma_heavy = eng.size(active, false);
  int kn = ctx.universe->grids().gc.k_n;
  int n = ctx.grid.n;
  double gamma = std::pow(pow3(kn).to_double(), double(n) / 2.0);
  double thresh = sigma_heavy / (2.0 * gamma);
  if (sigma_heavy > 0.0) {
    while (true) {
      auto sel = eng.select_above(active, thresh);
      if (!sel.found) break;
      TreePack pack;
      pack.lacunary = eng.materialize(sel, TreeKind::lacunary, 0, false);
      pack.companion = eng.materialize(sel, TreeKind::generic, 2 * kn, true);
      pack.split = split_tree(pack.companion);
      for (int i : sel.sweep) active[i] = 0;
      for (const auto& sub : pack.split)
        out.sum_tops += sub.top.space().volume().to_double();
      out.packs.push_back(std::move(pack));
    }
  }
  for (size_t i = 0; i < eng.count(); ++i)
    if (active[i]) out.heavy_small.push_back(eng.tiles()[i]);
  // exact halving on the computable gauge; failure means the containment
  // constant is miscalibrated
  double rem = eng.size(active, false);
  if (rem > out.sigma / 2.0)
    throw std::logic_error("combined_density_size: size halving failed");
  return out;
}

// ---- iterative decomposition ------------------------------------------------------

inline int dyadic_level(double v) {
  // integer k with 2^{-k-1} < v <= 2^{-k}
  int k = (int)std::floor(-std::log2(v));
  while (v > std::pow(2.0, -k)) --k;
  while (v <= std::pow(2.0, -k - 1)) ++k;
  return k;
}

struct LevelStats {
  int k = 0, j = 0;
  double sum_R = 0.0;
  int tree_count = 0;
  double bound_density = 0.0, bound_size = 0.0, bound_maximal = 0.0;
};

struct DecompositionResult {
  std::vector<std::tuple<int, int, Tree>> forest;  // (k, j, tree)
  std::vector<Tile> light_leftover;        // zero density
  std::vector<Tile> heavy_small_leftover;  // zero size, positive density
  std::vector<LevelStats> levels;
  double measure_E = 0.0, measure_F = 0.0;
  double eps = 0.5;

  std::vector<Tile> all_tiles() const {
    std::vector<Tile> v = light_leftover;
    v.insert(v.end(), heavy_small_leftover.begin(), heavy_small_leftover.end());
    for (const auto& [k, j, t] : forest)
      v.insert(v.end(), t.tiles.begin(), t.tiles.end());
    return v;
  }
};

inline DecompositionResult iterate_decompose(const GaugeContext& ctx,
                                             const std::vector<Tile>& P,
                                             double eps) {
  if (!(eps > 0.0 && eps < 1.0))
    throw std::invalid_argument("iterate_decompose: eps in (0,1)");
  DecompositionResult res;
  res.eps = eps;
  res.measure_E = ctx.measure_E();
  res.measure_F = ctx.measure_F();
  std::map<std::pair<int, int>, LevelStats> levels;
  std::vector<std::vector<Tile>> stack = {P};
  const double floor_gauge = 1e-13;
  while (!stack.empty()) {
    std::vector<Tile> cur = std::move(stack.back());
    stack.pop_back();
    if (cur.empty()) continue;
    double delta = densesup_set(ctx, cur);
    if (delta <= floor_gauge) {
      res.light_leftover.insert(res.light_leftover.end(), cur.begin(), cur.end());
      continue;
    }
    double sigma = size_gauge(ctx, cur);
    if (sigma <= floor_gauge) {
      res.heavy_small_leftover.insert(res.heavy_small_leftover.end(),
                                      cur.begin(), cur.end());
      continue;
    }
    CombinedResult cr = combined_density_size(ctx, cur);
    int k = dyadic_level(cr.delta), j = dyadic_level(cr.sigma);
    LevelStats& ls = levels[{k, j}];
    ls.k = k;
    ls.j = j;
    for (auto& pack : cr.packs) {
      for (auto& sub : pack.split) {
        ls.sum_R += sub.top.space().volume().to_double();
        ls.tree_count += 1;
        res.forest.emplace_back(k, j, sub);
      }
    }
    stack.push_back(cr.light);
    stack.push_back(cr.heavy_small);
  }
  for (auto& [kj, ls] : levels) {
    if (ls.tree_count == 0) continue;
    double twoK = std::pow(2.0, ls.k), twoJ = std::pow(2.0, ls.j);
    ls.bound_density = twoK * res.measure_E;
    ls.bound_size = twoJ * twoJ * res.measure_F;
    ls.bound_maximal = twoK * std::pow(twoJ, 1.0 + eps) *
                       std::pow(res.measure_F, 1.0 - eps) *
                       std::pow(res.measure_E, eps);
    res.levels.push_back(ls);
  }
  std::sort(res.levels.begin(), res.levels.end(),
            [](const LevelStats& a, const LevelStats& b) {
              return std::tie(a.k, a.j) < std::tie(b.k, b.j);
            });
  return res;
}

// ---- serialization -----------------------------------------------------------------

inline nlohmann::json decomposition_to_json(const DecompositionResult& r) {
  nlohmann::json j;
  j["measure_E"] = r.measure_E;
  j["measure_F"] = r.measure_F;
  j["eps"] = r.eps;
  nlohmann::json forest = nlohmann::json::array();
  for (const auto& [k, jj, t] : r.forest)
    forest.push_back({{"k", k}, {"j", jj}, {"tree", tree_to_json(t)}});
  j["forest"] = forest;
  nlohmann::json light = nlohmann::json::array();
  for (const auto& t : r.light_leftover) light.push_back(tile_to_json(t));
  j["light_leftover"] = light;
  nlohmann::json small = nlohmann::json::array();
  for (const auto& t : r.heavy_small_leftover) small.push_back(tile_to_json(t));
  j["heavy_small_leftover"] = small;
  nlohmann::json levels = nlohmann::json::array();
  for (const auto& ls : r.levels)
    levels.push_back({{"k", ls.k},
                      {"j", ls.j},
                      {"sum_R", ls.sum_R},
                      {"trees", ls.tree_count},
                      {"bound_density", ls.bound_density},
                      {"bound_size", ls.bound_size},
                      {"bound_maximal", ls.bound_maximal}});
  j["levels"] = levels;
  return j;
}

}  // namespace tfa
