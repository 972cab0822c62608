#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "tfa/gauges.hpp"
#include "tfa/selection.hpp"

namespace tfa {

// exact membership of a grid cell (its low-corner sample point) in a slab
// box; `halfopen` drops the upper faces for exact counting identities
inline bool cell_in_pll_mode(const Pll& R, const TorusGrid& g,
                             const std::array<int, 3>& ix, bool halfopen) {
  int d = R.d;
  // nearest-image translates
  RatVec x(d);
  Rat xn(0);
  for (int i = 0; i < d; ++i) x[i] = Rat(ix[i], g.N);
  xn = Rat(ix[d], g.N);
  std::vector<long long> tlo(d + 1), thi(d + 1);
  for (int i = 0; i < d; ++i) {
    tlo[i] = (R.lo[i] - x[i]).floor();
    thi[i] = (R.hi[i] - x[i]).floor() + 1;
  }
  std::array<long long, 4> t{0, 0, 0, 0};
  bool found = false;
  std::function<void(int)> rec = [&](int axis) {
    if (found) return;
    if (axis == d) {
      RatVec xx(d);
      for (int i = 0; i < d; ++i) {
        xx[i] = x[i] + Rat(t[i]);
        if (xx[i] < R.lo[i] || xx[i] > R.hi[i]) return;
        if (halfopen && xx[i] == R.hi[i]) return;
      }
      Rat u = dot(xx, R.eta);
      // vertical translate chosen to land the section in [ilo, ihi]
      Rat lo = R.ilo - u - xn, hi = R.ihi - u - xn;
      long long klo = lo.floor(), khi = hi.floor() + 1;
      for (long long k = klo; k <= khi; ++k) {
        Rat v = u + xn + Rat(k);
        if (v >= R.ilo && (halfopen ? v < R.ihi : v <= R.ihi)) {
          found = true;
          return;
        }
      }
      return;
    }
    for (long long k = tlo[axis]; k <= thi[axis]; ++k) {
      t[axis] = k;
      rec(axis + 1);
    }
  };
  rec(0);
  return found;
}

inline bool cell_in_pll(const Pll& R, const TorusGrid& g,
                        const std::array<int, 3>& ix) {
  return cell_in_pll_mode(R, g, ix, false);
}

// directional density of a dilated box: the fraction of horizontal cells
// pointing into the tau0 cap of t, weighted against the exact box volume
inline double directional_fraction(const GaugeContext& ctx, const Tile& t,
                                   const Pll& X) {
  const auto& mem = ctx.alpha_membership(t);
  const TorusGrid dg = ctx.sigma.dgrid;
  int d = X.d;
  // horizontal box of X clipped through nearest images
  long long cnt = 0, tot = 0;
  std::array<int, 3> ix{0, 0, 0};
  std::function<void(int)> rec = [&](int axis) {
    if (axis == d) {
      RatVec x(d);
      for (int i = 0; i < d; ++i) x[i] = Rat(ix[i], dg.N);
      // nearest-image translate into the horizontal box
      bool inside = true;
      for (int i = 0; i < d && inside; ++i) {
        Rat lo = X.lo[i], hi = X.hi[i];
        bool axis_in = false;
        for (long long k = (lo - x[i]).floor(); k <= (hi - x[i]).floor() + 1; ++k) {
          Rat v = x[i] + Rat(k);
          if (v >= lo && v < hi) {
            axis_in = true;
            break;
          }
        }
        inside = axis_in;
      }
      if (!inside) return;
      ++tot;
      int lab = ctx.sigma.label[dg.flat(ix)];
      if (mem[lab]) ++cnt;
      return;
    }
    for (int k = 0; k < dg.N; ++k) {
      ix[axis] = k;
      rec(axis + 1);
    }
  };
  rec(0);
  if (tot == 0) return 0.0;
  return double(cnt) / double(tot);
}

// |mask ∩ X| as a cell-count measure
inline double mask_box_measure(const std::vector<uint8_t>& mask,
                               const TorusGrid& g, const Pll& X) {
  double cnt = 0.0;
  for (size_t id = 0; id < mask.size(); ++id) {
    if (!mask[id]) continue;
    if (cell_in_pll(X, g, g.unflat(id))) cnt += 1.0;
  }
  return cnt / double(g.cells());
}

inline double mask_measure(const std::vector<uint8_t>& mask,
                           const TorusGrid& g) {
  double s = 0.0;
  for (auto b : mask) s += b ? 1.0 : 0.0;
  return s / double(g.cells());
}

// ---- exceptional set against a majority target --------------------------------

struct ExceptionalResult {
  std::vector<uint8_t> removed;  // the union of flagged boxes
  std::vector<uint8_t> kept;     // input minus removed
  double removed_measure = 0.0;
  double input_measure = 0.0;
  int boxes_flagged = 0;
};

// Union of dilated boxes that are simultaneously direction-dense and
// H-dense at the coupled thresholds; the ladder stops once the dilate
// covers the torus.
inline ExceptionalResult exceptional_G(const GaugeContext& ctx,
                                       const std::vector<uint8_t>& H,
                                       const std::vector<uint8_t>& G,
                                       const std::vector<Tile>& tiles,
                                       double eps, double C_eps) {
  double mH = mask_measure(H, ctx.grid), mG = mask_measure(G, ctx.grid);
  if (mH > mG)
    throw std::invalid_argument("exceptional_G: needs |H| <= |G|");
  ExceptionalResult out;
  out.input_measure = mG;
  out.removed.assign(ctx.grid.cells(), 0);
  const Rat K2 = ctx.universe->grids().gc.K_pow(2);
  if (mH == 0.0) {  // nothing is H-dense, the union stays empty
    out.kept = G;
    return out;
  }
  double ratio = mG > 0.0 ? std::sqrt(mH / mG) : 0.0;
  for (const auto& t : tiles) {
    Pll base = t.space().dilate(K2);
    for (int mu = 0;; ++mu) {
      Pll X = base.dilate(pow3(mu));
      double dirfrac = directional_fraction(ctx, t, X);
      if (dirfrac > 0.0) {
        int ell = std::max(0, (int)std::ceil(-std::log(dirfrac) / std::log(3.0) - 1e-12));
        double lam = C_eps * std::pow(3.0, (0.5 + eps) * double(ell)) * ratio;
        double hfrac = mask_box_measure(H, ctx.grid, X) /
                       std::min(1.0, X.volume().to_double());
        if (hfrac >= lam) {
          ++out.boxes_flagged;
          for (size_t id = 0; id < out.removed.size(); ++id)
            if (!out.removed[id] && cell_in_pll(X, ctx.grid, ctx.grid.unflat(id)))
              out.removed[id] = 1;
        }
      }
      // ladder truncation at the torus diameter
      if (X.scl() >= Rat(1) && X.height() >= Rat(1)) break;
      if (mu > 12) break;
    }
  }
  out.kept.assign(ctx.grid.cells(), 0);
  for (size_t id = 0; id < out.kept.size(); ++id)
    out.kept[id] = G[id] && !out.removed[id];
  for (size_t id = 0; id < out.kept.size(); ++id)
    if (G[id] && out.removed[id]) out.removed_measure += 1.0;
  out.removed_measure /= double(ctx.grid.cells());
  return out;
}

// Union of dilated boxes whose directional G-density reaches mu_{G,H}
inline ExceptionalResult exceptional_H(const GaugeContext& ctx,
                                       const std::vector<uint8_t>& G,
                                       const std::vector<uint8_t>& H,
                                       const std::vector<Tile>& tiles, int m,
                                       double C_m) {
  if (m < 2) throw std::invalid_argument("exceptional_H: m >= 2");
  ExceptionalResult out;
  double mG = mask_measure(G, ctx.grid), mH = mask_measure(H, ctx.grid);
  out.input_measure = mH;
  out.removed.assign(ctx.grid.cells(), 0);
  if (mG == 0.0) {  // no directional mass at all, the union stays empty
    out.kept = H;
    return out;
  }
  double mu_GH =
      mH > 0.0 ? C_m * std::pow(mG / mH, double(m - 1) / double(m)) : 1.0;
  const Rat K3 = ctx.universe->grids().gc.K_pow(3);
  for (const auto& t : tiles) {
    Pll base = t.space().dilate(K3);
    for (int mu = 0;; ++mu) {
      Pll X = base.dilate(pow3(mu));
      // directional density against G: cells of G pointing into the cap
      const auto& mem = ctx.alpha_membership(t);
      double cnt = 0.0;
      for (size_t id = 0; id < G.size(); ++id) {
        if (!G[id]) continue;
        auto ix = ctx.grid.unflat(id);
        std::array<int, 3> dx{0, 0, 0};
        for (int i = 0; i + 1 < ctx.grid.n; ++i) dx[i] = ix[i];
        if (!mem[ctx.sigma.label[ctx.sigma.dgrid.flat(dx)]]) continue;
        if (cell_in_pll(X, ctx.grid, ix)) cnt += 1.0;
      }
      double gdens = cnt / double(ctx.grid.cells()) /
                     std::min(1.0, X.volume().to_double());
      if (gdens >= mu_GH) {
        ++out.boxes_flagged;
        for (size_t id = 0; id < out.removed.size(); ++id)
          if (!out.removed[id] && cell_in_pll(X, ctx.grid, ctx.grid.unflat(id)))
            out.removed[id] = 1;
      }
      if (X.scl() >= Rat(1) && X.height() >= Rat(1)) break;
      if (mu > 12) break;
    }
  }
  out.kept.assign(ctx.grid.cells(), 0);
  for (size_t id = 0; id < out.kept.size(); ++id)
    out.kept[id] = H[id] && !out.removed[id];
  for (size_t id = 0; id < out.kept.size(); ++id)
    if (H[id] && out.removed[id]) out.removed_measure += 1.0;
  out.removed_measure /= double(ctx.grid.cells());
  return out;
}

// ---- covering bounds ------------------------------------------------------------

// measure of the union of space components, by cell rasterization
inline double union_measure(const std::vector<Tile>& tiles, const TorusGrid& g) {
  std::vector<uint8_t> hit(g.cells(), 0);
  for (const auto& t : tiles) {
    Pll R = t.space();
    for (size_t id = 0; id < hit.size(); ++id)
      if (!hit[id] && cell_in_pll(R, g, g.unflat(id))) hit[id] = 1;
  }
  double s = 0.0;
  for (auto b : hit) s += b ? 1.0 : 0.0;
  return s / double(g.cells());
}

struct CoveringCheck {
  double lhs = 0.0, rhs = 0.0;
  bool pass = false;
  int family_size = 0;
};

// |∪ R_p| <= C mu^{-1} lambda^{-2} |H| over families where every member has
// directional density >= mu and H-density >= lambda
inline CoveringCheck covering_check_G(const GaugeContext& ctx,
                                      const std::vector<uint8_t>& H,
                                      const std::vector<Tile>& family,
                                      double mu, double lambda, double C) {
  CoveringCheck c;
  c.family_size = (int)family.size();
  c.lhs = union_measure(family, ctx.grid);
  c.rhs = C / mu / lambda / lambda * mask_measure(H, ctx.grid);
  c.pass = c.lhs <= c.rhs;
  return c;
}

// |∪ R_p| <= C mu^{-q} |G|, q = m/(m-1)
inline CoveringCheck covering_check_H(const GaugeContext& ctx,
                                      const std::vector<uint8_t>& G,
                                      const std::vector<Tile>& family,
                                      double mu, int m, double C) {
  CoveringCheck c;
  c.family_size = (int)family.size();
  double q = double(m) / double(m - 1);
  c.lhs = union_measure(family, ctx.grid);
  c.rhs = C * std::pow(mu, -q) * mask_measure(G, ctx.grid);
  c.pass = c.lhs <= c.rhs;
  return c;
}

}  // namespace tfa
