#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "tfa/exceptional.hpp"
#include "tfa/gauges.hpp"

namespace tfa {

// All sigma-side measures here are exact cell counts on the horizontal grid;
// the vertical coordinate factors out because the direction field does not
// depend on it.

inline long long ceil_scaled(const Rat& x, int N) {
  // smallest integer k with k >= x * N
  return -(((-x) * Rat(N)).floor());
}

// index range [lo, hi) of grid cells whose sample point lies in [a, b)
inline std::pair<long long, long long> cell_range(const Rat& a, const Rat& b,
                                                  int N) {
  return {ceil_scaled(a, N), ceil_scaled(b, N)};
}

// number of horizontal cells inside a triadic cube
inline long long cube_cell_count(const TriadicCube& L, int N) {
  long long c = 1;
  for (int i = 0; i < L.dim(); ++i) {
    auto [lo, hi] = cell_range(L.low(i), L.high(i), N);
    if (hi <= lo) return 0;
    c *= hi - lo;
  }
  return c;
}

// cells of L whose direction value points into the cap (exact)
inline long long directional_cell_count(const GaugeContext& ctx,
                                        const TriadicCube& L,
                                        const std::vector<char>& cap_mem) {
  const TorusGrid& dg = ctx.sigma.dgrid;
  int d = L.dim();
  std::array<long long, 3> lo{0, 0, 0}, hi{0, 0, 0};
  for (int i = 0; i < d; ++i) {
    auto [a, b] = cell_range(L.low(i), L.high(i), dg.N);
    lo[i] = a;
    hi[i] = b;
    if (b <= a) return 0;
  }
  long long cnt = 0;
  std::array<int, 3> ix{0, 0, 0};
  std::function<void(int)> rec = [&](int axis) {
    if (axis == d) {
      if (cap_mem[ctx.sigma.label[dg.flat(ix)]]) ++cnt;
      return;
    }
    for (long long k = lo[axis]; k < hi[axis]; ++k) {
      ix[axis] = (int)(((k % dg.N) + dg.N) % dg.N);  // periodic wrap
      rec(axis + 1);
    }
  };
  rec(0);
  return cnt;
}

// membership of each direction value in the tau0 peripheral cap of Q
inline std::vector<char> cap_membership(const GaugeContext& ctx,
                                        const TriadicCube& Q) {
  TriadicCube cap = Q.peripheral_child(ctx.packets.tau0);
  std::vector<char> mem(ctx.sigma.values.size(), 0);
  for (size_t k = 0; k < ctx.sigma.values.size(); ++k)
    mem[k] = cap.contains_point(ctx.sigma.values[k].eta) ? 1 : 0;
  return mem;
}

// ---- permissible tables -----------------------------------------------------------

struct PermissibleTable {
  Tile t0;
  double mu = 0.0;
  int level_cap = 0;  // deepest horizontal level in the table
  // per cube: the surviving projected tiles and the Carleson weight
  std::map<std::string, std::vector<Tile>> B;
  std::map<std::string, long long> weight;  // mu_L, exact cell counts
  std::vector<TriadicCube> cubes;           // all table cubes, top-down
};

// Top-down construction: per cube keep the direction caps that are mu-dense
// on the cube and not below any kept cap of a strictly larger cube.
inline PermissibleTable build_permissible(const GaugeContext& ctx,
                                          const Tile& t0, double mu) {
  for (const auto& v : ctx.sigma.values)
    if (v.eta.empty())
      throw std::invalid_argument(
          "build_permissible: direction field must be quantized with exact "
          "parameters (a field varying in the last coordinate is rejected "
          "upstream by construction)");
  PermissibleTable tab;
  tab.t0 = t0;
  tab.mu = mu;
  const TileGrids& g = *t0.grids;
  int jI = t0.I.level;
  // deepest level: cubes at least three cells wide, caps still on the grid
  int cap = t0.L.level;
  while (true) {
    int next = cap + 1;
    Rat side = g.space.cell_side(next);
    if (side * Rat(ctx.sigma.dgrid.N) < Rat(3)) break;
    if (jI - next < g.dirs.kappa * 0 + ctx.universe->params().dir_level_min)
      break;
    cap = next;
  }
  tab.level_cap = cap;

  // enumerate cubes level by level
  std::vector<TriadicCube> frontier = {t0.L};
  long long b = g.space.branching();
  for (int lvl = t0.L.level; lvl <= cap; ++lvl) {
    for (const auto& L : frontier) tab.cubes.push_back(L);
    // process this level
    for (const auto& L : frontier) {
      int jQ = jI - lvl;
      std::vector<Tile> kept;
      // candidate caps: parents of the cells holding each direction value
      std::set<std::string> tried;
      for (const auto& v : ctx.sigma.values) {
        TriadicCube cell = cell_at(g.dirs, jQ + 1, v.eta);
        TriadicCube Q = cell.parent();
        if (!tried.insert(Q.key()).second) continue;
        if (!g.dir_cube_admissible(Q)) continue;
        // the value must sit in the tau0 child for the cap to be countable
        std::vector<char> mem = cap_membership(ctx, Q);
        long long hits = directional_cell_count(ctx, L, mem);
        long long total = cube_cell_count(L, ctx.sigma.dgrid.N);
        if (total == 0 || double(hits) < mu * double(total)) continue;
        // exclusion against every kept cap of strictly larger cubes
        Tile cand;
        try {
          cand = make_tile(g, L, t0.I, Q);
        } catch (const TileError&) {
          continue;
        }
        bool excluded = false;
        TriadicCube anc = L;
        for (int up = lvl; up > t0.L.level && !excluded; --up) {
          anc = anc.parent();
          auto it = tab.B.find(anc.key());
          if (it == tab.B.end()) continue;
          for (const auto& p : it->second)
            if (Q.contains(p.Q)) {  // kept cap inside: candidate sits below
              excluded = true;
              break;
            }
        }
        if (excluded) continue;
        kept.push_back(cand);
      }
      std::sort(kept.begin(), kept.end());
      long long w = 0;
      for (const auto& p : kept)
        w += directional_cell_count(ctx, L, cap_membership(ctx, p.Q));
      tab.B[L.key()] = kept;
      tab.weight[L.key()] = w;
    }
    // descend
    if (lvl == cap) break;
    std::vector<TriadicCube> next;
    for (const auto& L : frontier) {
      long long total = 1;
      for (int i = 0; i < g.space.dim; ++i) total *= b;
      for (long long r = 0; r < total; ++r) {
        TriadicCube c = L;
        c.level += 1;
        long long rr = r;
        for (int i = g.space.dim - 1; i >= 0; --i) {
          c.idx[i] = L.idx[i] * b + rr % b;
          rr /= b;
        }
        next.push_back(c);
      }
    }
    frontier.swap(next);
  }
  return tab;
}

// exact pairwise disjointness of the counted direction sets across the table
inline bool table_sets_disjoint(const GaugeContext& ctx,
                                const PermissibleTable& tab) {
  // collect (cell, cap) incidences; none may repeat a horizontal cell with
  // overlapping caps inside nested cubes
  std::vector<std::pair<std::string, std::string>> marks;
  const TorusGrid& dg = ctx.sigma.dgrid;
  std::set<std::string> burned;  // cell-id once over the whole table
  for (const auto& L : tab.cubes) {
    auto it = tab.B.find(L.key());
    if (it == tab.B.end()) continue;
    for (const auto& p : it->second) {
      std::vector<char> mem = cap_membership(ctx, p.Q);
      int d = L.dim();
      std::array<long long, 3> lo{0, 0, 0}, hi{0, 0, 0};
      for (int i = 0; i < d; ++i) {
        auto [a, b2] = cell_range(L.low(i), L.high(i), dg.N);
        lo[i] = a;
        hi[i] = b2;
      }
      std::array<int, 3> ix{0, 0, 0};
      bool ok = true;
      std::function<void(int)> rec = [&](int axis) {
        if (!ok) return;
        if (axis == d) {
          if (!mem[ctx.sigma.label[dg.flat(ix)]]) return;
          std::string key = std::to_string(ix[0]) + ":" + std::to_string(ix[1]);
          if (!burned.insert(key).second) ok = false;
          return;
        }
        for (long long k = lo[axis]; k < hi[axis]; ++k) {
          ix[axis] = (int)(((k % dg.N) + dg.N) % dg.N);
          rec(axis + 1);
        }
      };
      rec(0);
      if (!ok) return false;
    }
  }
  return true;
}

// Carleson property: subtree weight sums dominated by cube cell counts
inline bool carleson_holds(const GaugeContext& ctx, const PermissibleTable& tab,
                           long long* worst_slack = nullptr) {
  for (const auto& L : tab.cubes) {
    long long sum = 0;
    for (const auto& Lp : tab.cubes)
      if (L.contains(Lp)) sum += tab.weight.at(Lp.key());
    long long cells = cube_cell_count(L, ctx.sigma.dgrid.N);
    if (sum > cells) return false;
    if (worst_slack) *worst_slack = std::max(*worst_slack, cells - sum);
  }
  return true;
}

// ---- counting functions -------------------------------------------------------------

struct CountingValues {
  long long f = 0;  // tiles of the collection covering the point
  long long g = 0;  // table entries covering the horizontal point
  Rat h = Rat(0);   // density-weighted table mass
};

inline CountingValues counting_at(const GaugeContext& ctx,
                                  const PermissibleTable& tab,
                                  const std::vector<Tile>& collection,
                                  const std::array<int, 3>& ix) {
  CountingValues out;
  const TorusGrid& g = ctx.grid;
  for (const auto& t : collection) {
    if (!tab.t0.L.contains(t.L)) continue;
    if (cell_in_pll_mode(t.space(), g, ix, true)) ++out.f;
  }
  RatVec x(tab.t0.L.dim());
  for (int i = 0; i < tab.t0.L.dim(); ++i) x[i] = Rat(ix[i], g.N);
  for (const auto& L : tab.cubes) {
    if (!L.contains_point(x)) continue;
    auto it = tab.B.find(L.key());
    if (it == tab.B.end() || it->second.empty()) continue;
    out.g += (long long)it->second.size();
    long long cells = cube_cell_count(L, ctx.sigma.dgrid.N);
    for (const auto& p : it->second) {
      long long hits = directional_cell_count(ctx, L, cap_membership(ctx, p.Q));
      out.h += Rat(hits, cells);
    }
  }
  return out;
}

// ---- triadic BMO of the table mass ---------------------------------------------------

struct BmoReport {
  Rat max_oscillation = Rat(0);
  bool pass = true;
};

inline BmoReport check_bmo(const GaugeContext& ctx,
                           const PermissibleTable& tab) {
  BmoReport rep;
  const TorusGrid& dg = ctx.sigma.dgrid;
  // mean oscillation of h against b_L = sum over ancestors of mu/|L'|
  for (const auto& L : tab.cubes) {
    Rat bL(0);
    for (const auto& Lp : tab.cubes)
      if (Lp.contains(L))
        bL += Rat(tab.weight.at(Lp.key()), cube_cell_count(Lp, dg.N));
    // exact cell sweep of |h - b_L| over L
    int d = L.dim();
    std::array<long long, 3> lo{0, 0, 0}, hi{0, 0, 0};
    for (int i = 0; i < d; ++i) {
      auto [a, b2] = cell_range(L.low(i), L.high(i), dg.N);
      lo[i] = a;
      hi[i] = b2;
    }
    Rat acc(0);
    long long cells = 0;
    std::array<int, 3> ix{0, 0, 0};
    std::function<void(int)> rec = [&](int axis) {
      if (axis == d) {
        ++cells;
        RatVec x(d);
        for (int i = 0; i < d; ++i) x[i] = Rat(ix[i], dg.N);
        Rat h(0);
        for (const auto& Lp : tab.cubes) {
          if (!Lp.contains_point(x)) continue;
          auto it = tab.B.find(Lp.key());
          if (it == tab.B.end()) continue;
          h += Rat(tab.weight.at(Lp.key()), cube_cell_count(Lp, dg.N));
        }
        acc += (h - bL).abs();
        return;
      }
      for (long long k = lo[axis]; k < hi[axis]; ++k) {
        ix[axis] = (int)(((k % dg.N) + dg.N) % dg.N);
        rec(axis + 1);
      }
    };
    rec(0);
    if (cells == 0) continue;
    Rat osc = acc / Rat(cells);
    if (rep.max_oscillation < osc) rep.max_oscillation = osc;
    if (osc > Rat(1)) rep.pass = false;
  }
  return rep;
}

// ---- the counting estimate ------------------------------------------------------------

struct MaxkeyReport {
  double lhs = 0.0;   // sum of tile measures
  double rhs = 0.0;   // |F| / (mu lambda^{1+eps})
  double ratio = 0.0;
  bool hypotheses_ok = true;
  std::string rejected;  // which tile/hypothesis failed
};

inline MaxkeyReport maxkey_verify(const GaugeContext& ctx,
                                  const std::vector<Tile>& tiles,
                                  const std::vector<uint8_t>& F, int k,
                                  double mu, double lambda, double eps) {
  MaxkeyReport rep;
  Rat dil = pow3(k);
  double sum = 0.0;
  for (const auto& t : tiles) {
    Pll X = t.space().dilate(dil);
    double dirfrac = directional_fraction(ctx, t, X);
    if (dirfrac < mu) {
      rep.hypotheses_ok = false;
      rep.rejected = t.key() + ": directional density below mu";
      return rep;
    }
    double vol = std::min(1.0, X.volume().to_double());
    double ffrac = mask_box_measure(F, ctx.grid, X) / vol;
    if (!(ffrac > lambda)) {
      rep.hypotheses_ok = false;
      rep.rejected = t.key() + ": set density not above lambda";
      return rep;
    }
    sum += t.space().volume().to_double();
  }
  rep.lhs = sum;
  rep.rhs = mask_measure(F, ctx.grid) / (mu * std::pow(lambda, 1.0 + eps));
  rep.ratio = rep.rhs > 0 ? rep.lhs / rep.rhs : 0.0;
  return rep;
}

// grid integral of f^{1/eps} over the base tile, against the 1/eps-power
// John-Nirenberg-type bound
struct JNReport {
  double lhs = 0.0, rhs_basis = 0.0;
  double constant = 0.0;
};

inline JNReport jn_integral(const GaugeContext& ctx, const PermissibleTable& tab,
                            const std::vector<Tile>& collection, double mu,
                            int inv_eps) {
  JNReport rep;
  const TorusGrid& g = ctx.grid;
  Pll R0 = tab.t0.space();
  double s = 0.0;
  for (size_t id = 0; id < g.cells(); ++id) {
    auto ix = g.unflat(id);
    if (!cell_in_pll(R0, g, ix)) continue;
    CountingValues cv = counting_at(ctx, tab, collection, ix);
    s += std::pow(double(cv.f), inv_eps);
  }
  rep.lhs = s / double(g.cells());
  rep.rhs_basis = R0.volume().to_double() / std::pow(mu, inv_eps);
  rep.constant = rep.rhs_basis > 0 ? rep.lhs / rep.rhs_basis : 0.0;
  return rep;
}

// ---- size against set intersection -----------------------------------------------------

struct SizeIntersectionReport {
  double lhs = 0.0;        // |F ∩ dilated top|
  double rhs_basis = 0.0;  // sigma^{1+eps} |dilated top|
  double c_eps = 0.0;
  bool hypothesis_ok = true;
};

inline SizeIntersectionReport check_size_intersection(
    const GaugeContext& ctx, const Tree& T, const std::vector<uint8_t>& F,
    double sigma, double eps, double hypothesis_c = 0.25) {
  SizeIntersectionReport rep;
  double sum = 0.0;
  for (const auto& t : T.tiles) {
    double c = coeff_F(ctx, t);
    sum += c * c;
  }
  Pll RT = T.top.space();
  if (sum < hypothesis_c * sigma * sigma * RT.volume().to_double()) {
    rep.hypothesis_ok = false;
    return rep;
  }
  double factor = 1.0 + std::pow(sigma, -eps);
  Rat A(std::llround(factor * 720720.0), 720720);
  if (A < Rat(1)) A = Rat(1);
  Pll big = RT.dilate(A);
  double vol = std::min(1.0, big.volume().to_double());
  rep.lhs = mask_box_measure(F, ctx.grid, big);
  rep.rhs_basis = std::pow(sigma, 1.0 + eps) * vol;
  rep.c_eps = rep.rhs_basis > 0 ? rep.lhs / rep.rhs_basis : 0.0;
  return rep;
}

// ---- shifted-grid fattening (reduction of the dilation exponent) ----------------------

struct FattenedBox {
  Pll box;       // contains the 3^k dilate, inside the 3^{k+2} dilate
  Tile base;     // carries the unchanged eccentricity
  int grid_pick; // which shift pattern realized it (diagnostic)
};

// one axis: triadic interval of length 3 * span containing [lo, hi] from the
// standard or half-shifted grid
inline std::pair<Rat, int> fatten_axis(const Rat& lo, const Rat& hi) {
  Rat span = hi - lo;
  Rat S = span * Rat(3);
  // standard grid
  Rat m = Rat(floor_div(lo, S)) * S;
  if (hi <= m + S) return {m, 0};
  Rat mh = Rat(floor_div(lo - S / Rat(2), S)) * S + S / Rat(2);
  if (lo >= mh && hi <= mh + S) return {mh, 1};
  throw std::logic_error("fatten_axis: no covering triadic interval");
}

inline FattenedBox fatten_tile(const Tile& t, int k) {
  Pll R = t.space().dilate(pow3(k));
  FattenedBox out;
  out.base = t;
  out.box = R;
  int pick = 0;
  for (int i = 0; i < R.d; ++i) {
    auto [lo, which] = fatten_axis(R.lo[i], R.hi[i]);
    out.box.lo[i] = lo;
    out.box.hi[i] = lo + (R.hi[i] - R.lo[i]) * Rat(3);
    pick = pick * 2 + which;
  }
  auto [ilo, which] = fatten_axis(R.ilo, R.ihi);
  out.box.ilo = ilo;
  out.box.ihi = ilo + (R.ihi - R.ilo) * Rat(3);
  pick = pick * 2 + which;
  out.grid_pick = pick;
  return out;
}

// counting estimate on fattened boxes at dilation zero
inline MaxkeyReport maxkey_verify_fattened(const GaugeContext& ctx,
                                           const std::vector<Tile>& tiles,
                                           const std::vector<uint8_t>& F, int k,
                                           double mu, double lambda,
                                           double eps) {
  MaxkeyReport rep;
  double sum = 0.0;
  for (const auto& t : tiles) {
    FattenedBox fb = fatten_tile(t, k);
    double dirfrac = directional_fraction(ctx, t, fb.box);
    double vol = std::min(1.0, fb.box.volume().to_double());
    double ffrac = mask_box_measure(F, ctx.grid, fb.box) / vol;
    if (dirfrac < mu || !(ffrac > lambda)) {
      rep.hypotheses_ok = false;
      rep.rejected = t.key();
      return rep;
    }
    sum += t.space().volume().to_double();
  }
  rep.lhs = sum;
  rep.rhs = mask_measure(F, ctx.grid) / (mu * std::pow(lambda, 1.0 + eps));
  rep.ratio = rep.rhs > 0 ? rep.lhs / rep.rhs : 0.0;
  return rep;
}

}  // namespace tfa
