#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tfa/field.hpp"
#include "tfa/multiplier.hpp"
#include "tfa/signature.hpp"
#include "tfa/tile.hpp"
#include "tfa/tree.hpp"
#include "tfa/universe.hpp"
#include "tfa/wave_packet.hpp"

namespace tfa {

// ---- weights ------------------------------------------------------------------

// nearest-image offset of x from c on the unit torus
inline double torus_wrap(double v) {
  v -= std::floor(v);
  if (v >= 0.5) v -= 1.0;
  return v;
}

// L^1-normalized adapted weight of a space component evaluated at a point:
// |R|^{-1} <z>^{-M} with z the tile-frame coordinates of x - c(R)
inline double chi_weight(const Pll& R, int M, const std::vector<double>& x) {
  int d = R.d, n = d + 1;
  std::vector<double> c(n), eta(d), v(n);
  double vn = 1.0;
  for (int i = 0; i < d; ++i) {
    eta[i] = R.eta[i].to_double();
    vn += eta[i] * eta[i];
  }
  vn = std::sqrt(vn);
  for (int i = 0; i < d; ++i) v[i] = eta[i] / vn;
  v[n - 1] = 1.0 / vn;
  for (int i = 0; i < d; ++i) c[i] = R.center_bar()[i].to_double();
  double shear = 0.0;
  for (int i = 0; i < d; ++i) shear += c[i] * eta[i];
  c[n - 1] = R.center_i().to_double() - shear;
  std::vector<double> y(n);
  for (int i = 0; i < n; ++i) y[i] = torus_wrap(x[i] - c[i]);
  double ip = 0.0;
  for (int i = 0; i < n; ++i) ip += y[i] * v[i];
  double scl = R.scl().to_double(), h = R.height().to_double();
  double z2 = 0.0;
  for (int i = 0; i < n; ++i) {
    double pi = y[i] - ip * v[i];           // hyperplane part
    double zi = pi / scl;
    if (i == n - 1) zi += y[n - 1] / h;     // vertical part
    z2 += zi * zi;
  }
  double w = std::pow(1.0 + z2, -0.5 * double(M));
  if (w < 1e-14) return 0.0;  // truncated tail
  return w / R.volume().to_double();
}

// exact volume fraction of the grid cell ix covered by R, nearest images
inline double cell_fraction(const Pll& R, const TorusGrid& g,
                            const std::array<int, 3>& ix) {
  int d = R.d;
  Pll cell;
  cell.d = d;
  cell.lo.resize(d);
  cell.hi.resize(d);
  cell.eta.assign(d, Rat(0));
  double total = 0.0;
  // integer translates of the cell across R's bounding box
  std::vector<long long> tlo(d + 1), thi(d + 1);
  for (int i = 0; i < d; ++i) {
    tlo[i] = R.lo[i].floor();
    thi[i] = R.hi[i].floor();
  }
  // vertical extent of the slab over the box
  Rat m(0), M(0);
  for (int i = 0; i < d; ++i) {
    Rat a = R.eta[i] * R.lo[i], b = R.eta[i] * R.hi[i];
    if (a < b) { m += a; M += b; } else { m += b; M += a; }
  }
  tlo[d] = (R.ilo - M).floor();
  thi[d] = (R.ihi - m).floor();
  std::array<long long, 4> t{0, 0, 0, 0};
  std::function<void(int)> rec = [&](int axis) {
    if (axis == d + 1) {
      for (int i = 0; i < d; ++i) {
        cell.lo[i] = Rat(ix[i], g.N) + Rat(t[i]);
        cell.hi[i] = Rat(ix[i] + 1, g.N) + Rat(t[i]);
      }
      cell.ilo = Rat(ix[d], g.N) + Rat(t[d]);
      cell.ihi = Rat(ix[d] + 1, g.N) + Rat(t[d]);
      total += volume_intersection(R, cell);
      return;
    }
    for (long long k = tlo[axis] - 1; k <= thi[axis] + 1; ++k) {
      t[axis] = k;
      rec(axis + 1);
    }
  };
  rec(0);
  return total * double(g.cells());  // fraction of one cell
}

// ---- gauge context --------------------------------------------------------------

struct GaugeContext {
  const TileUniverse* universe = nullptr;
  TorusGrid grid;                 // ambient n-dim grid
  DiscreteField f_spec;           // f in spectral representation
  std::vector<uint8_t> F;         // support mask of f (space cells)
  std::vector<uint8_t> E;         // measurable set mask (space cells)
  DirectionField sigma;           // quantized, on the d-grid
  WavePacketConfig packets;
  int densesup_depth = 2;         // scale window for the running supremum

  mutable std::map<std::string, CanonicalPacket> packet_cache;
  mutable std::map<std::string, double> coeff_cache, dense_cache, densesup_cache;
  mutable std::map<std::string, std::vector<char>> alpha_cache;

  // mutators that keep the caches consistent
  void set_f(DiscreteField spec) {
    f_spec = std::move(spec);
    coeff_cache.clear();
  }
  void set_E(std::vector<uint8_t> mask) {
    E = std::move(mask);
    dense_cache.clear();
    densesup_cache.clear();
  }
  void set_sigma(DirectionField s) {
    sigma = std::move(s);
    alpha_cache.clear();
    dense_cache.clear();
    densesup_cache.clear();
  }

  double measure_E() const {
    double s = 0.0;
    for (auto b : E) s += b ? 1.0 : 0.0;
    return s / double(grid.cells());
  }
  double measure_F() const {
    double s = 0.0;
    for (auto b : F) s += b ? 1.0 : 0.0;
    return s / double(grid.cells());
  }

  const CanonicalPacket& packet(const Tile& t) const {
    auto it = packet_cache.find(t.key());
    if (it == packet_cache.end())
      it = packet_cache.emplace(t.key(), build_packet(grid, t, packets)).first;
    return it->second;
  }

  // per direction value: does it point into the tau0 peripheral cap of t
  const std::vector<char>& alpha_membership(const Tile& t) const {
    auto it = alpha_cache.find(t.key());
    if (it == alpha_cache.end()) {
      std::vector<char> mem(sigma.values.size(), 0);
      TriadicCube cap = t.alpha(packets.tau0);
      for (size_t k = 0; k < sigma.values.size(); ++k) {
        const auto& eta = sigma.values[k].eta;
        if (eta.empty())
          throw std::invalid_argument("gauges: direction value lacks exact eta");
        mem[k] = cap.contains_point(eta) ? 1 : 0;
      }
      it = alpha_cache.emplace(t.key(), std::move(mem)).first;
    }
    return it->second;
  }
};

// |<f, phi_t>| for the canonical packet
inline double coeff_F(const GaugeContext& ctx, const Tile& t) {
  auto it = ctx.coeff_cache.find(t.key());
  if (it != ctx.coeff_cache.end()) return it->second;
  double v = std::abs(inner(ctx.f_spec, ctx.packet(t).spec));
  ctx.coeff_cache.emplace(t.key(), v);
  return v;
}

// |<g, phi_t 1_{alpha_{t,tau0}}(v_sigma)>|: space-side sum over cells whose
// direction points into the cap
inline double coeff_A(const GaugeContext& ctx, const DiscreteField& g_space,
                      const Tile& t) {
  if (!(g_space.grid == ctx.grid))
    throw std::invalid_argument("coeff_A: grid mismatch");
  const auto& mem = ctx.alpha_membership(t);
  const DiscreteField& ph = ctx.packet(t).space();
  cplx s(0.0);
  size_t cells = ctx.grid.cells();
  for (size_t id = 0; id < cells; ++id) {
    auto ix = ctx.grid.unflat(id);
    std::array<int, 3> dx{0, 0, 0};
    for (int i = 0; i + 1 < ctx.grid.n; ++i) dx[i] = ix[i];
    int lab = ctx.sigma.label[ctx.sigma.dgrid.flat(dx)];
    if (!mem[lab]) continue;
    s += g_space.a[id] * std::conj(ph.a[id]);
  }
  return std::abs(s) / double(cells);
}

// dense(t) = integral of the L1-normalized weight over E_t
inline double dense(const GaugeContext& ctx, const Tile& t) {
  auto it = ctx.dense_cache.find(t.key());
  if (it != ctx.dense_cache.end()) return it->second;
  const auto& mem = ctx.alpha_membership(t);
  Pll R = t.space();
  int M = ctx.packets.effective_M(ctx.grid.n);
  double s = 0.0;
  size_t cells = ctx.grid.cells();
  std::vector<double> x(ctx.grid.n);
  for (size_t id = 0; id < cells; ++id) {
    if (!ctx.E[id]) continue;
    auto ix = ctx.grid.unflat(id);
    std::array<int, 3> dx{0, 0, 0};
    for (int i = 0; i + 1 < ctx.grid.n; ++i) dx[i] = ix[i];
    int lab = ctx.sigma.label[ctx.sigma.dgrid.flat(dx)];
    if (!mem[lab]) continue;
    for (int i = 0; i < ctx.grid.n; ++i) x[i] = ctx.grid.coord(ix[i]);
    s += chi_weight(R, M, x);
  }
  double v = s / double(cells);
  ctx.dense_cache.emplace(t.key(), v);
  return v;
}

// the truncated window of tiles above t (t itself first): candidates for the
// running density supremum
inline std::vector<Tile> density_candidates(const GaugeContext& ctx,
                                            const Tile& t) {
  std::vector<Tile> out = {t};
  const TileUniverse& u = *ctx.universe;
  const auto& p = u.params();
  Pll R = t.space();
  auto [vlo, vhi] = R.vertical_extent();
  for (int jL = std::max(p.L_level_min, t.L.level - ctx.densesup_depth);
       jL <= t.L.level; ++jL) {
    for (const Tile& cand : u.aligned_tops(jL, {t.Q}, R.lo, R.hi, vlo, vhi)) {
      if (!cand.same_annulus(t)) continue;
      if (!t.Q.contains(cand.Q)) continue;  // need ecc(cand) inside ecc(t)
      if (cand == t) continue;
      if (!rel_leq(t, cand)) continue;
      out.push_back(cand);
    }
  }
  return out;
}

// running supremum of dense over the truncated candidate window
inline double densesup(const GaugeContext& ctx, const Tile& t) {
  auto it = ctx.densesup_cache.find(t.key());
  if (it != ctx.densesup_cache.end()) return it->second;
  double best = 0.0;
  for (const Tile& cand : density_candidates(ctx, t))
    best = std::max(best, dense(ctx, cand));
  ctx.densesup_cache.emplace(t.key(), best);
  return best;
}

inline double densesup_set(const GaugeContext& ctx, const std::vector<Tile>& q) {
  double best = 0.0;
  for (const auto& t : q) best = std::max(best, densesup(ctx, t));
  return best;
}

// ---- size engine -----------------------------------------------------------------
//
// size(Q) is a supremum over lacunary subtrees. Witness regions are unions of
// peripheral children of the participating eccentricity cubes, so candidate
// frequency points are the peripheral-child centers; candidate tops are the
// admissible parallelepipeds of the universe window at each scale. Collecting
// every qualifying tile per (witness, top) pair realizes the supremum exactly.

class SizeEngine {
 public:
  struct Mask {
    std::vector<uint64_t> w;
    void resize(size_t bits) { w.assign((bits + 63) / 64, 0); }
    void set(size_t i) { w[i >> 6] |= 1ull << (i & 63); }
    bool get(size_t i) const { return (w[i >> 6] >> (i & 63)) & 1ull; }
  };

  struct Cand {
    RatVec eta;
    Signature sig;
    Mask lac, gen;  // peripheral / plain membership per tile
  };
  struct Top {
    Tile tile;
    double vol;
    int index_in_set = -1;  // >= 0 when the top tile belongs to the set
    Mask meets, meets_k2;
  };

  SizeEngine(const GaugeContext& ctx, std::vector<Tile> tiles)
      : ctx_(&ctx), tiles_(std::move(tiles)) {
    std::sort(tiles_.begin(), tiles_.end());
    n_ = tiles_.size();
    coeff2_.resize(n_);
    for (size_t i = 0; i < n_; ++i) {
      double c = coeff_F(ctx, tiles_[i]);
      coeff2_[i] = c * c;
      if (i > 0 && !tiles_[i].same_annulus(tiles_[0]))
        throw std::invalid_argument("size: mixed annulus");
    }
    build_candidates();
    build_tops();
  }

  const std::vector<Tile>& tiles() const { return tiles_; }
  size_t count() const { return n_; }
  double coeff2(size_t i) const { return coeff2_[i]; }

  // supremum over lacunary subtrees of the active subset
  double size(const std::vector<char>& active, bool top_in_tree) const {
    double best = 0.0;
    for_each_tree(active, top_in_tree, [&](double value, size_t, size_t) {
      best = std::max(best, value);
    });
    return best;
  }

  struct Selection {
    double value = 0.0;
    std::vector<int> tree;      // indices of the lacunary tree
    std::vector<int> sweep;     // indices of the maximal K^2 companion
    Tile top;
    RatVec eta;
    bool found = false;
  };

  // among top-in-set trees above the threshold, pick the witness of minimal
  // signature (ties by top serialization); also sweep the maximal companion
  Selection select_above(const std::vector<char>& active, double thresh) const {
    Selection sel;
    const Cand* best_c = nullptr;
    const Top* best_t = nullptr;
    for_each_tree(active, true, [&](double value, size_t ci, size_t ti) {
      if (!(value > thresh)) return;
      if (!sel.found) {
        sel.found = true;
        best_c = &cands_[ci];
        best_t = &tops_[ti];
        sel.value = value;
        return;
      }
      int c = cands_[ci].sig.cmp(best_c->sig);
      if (c < 0 || (c == 0 && tops_[ti].tile.key() < best_t->tile.key())) {
        best_c = &cands_[ci];
        best_t = &tops_[ti];
        sel.value = value;
      }
    });
    if (!sel.found) return sel;
    sel.top = best_t->tile;
    sel.eta = best_c->eta;
    for (size_t i = 0; i < n_; ++i) {
      if (!active[i]) continue;
      if (best_c->lac.get(i) && best_t->meets.get(i)) sel.tree.push_back((int)i);
      if (best_c->gen.get(i) && best_t->meets_k2.get(i))
        sel.sweep.push_back((int)i);
    }
    return sel;
  }

  Tree materialize(const Selection& sel, TreeKind kind, int rho,
                   bool sweep) const {
    Tree T;
    T.top = sel.top;
    T.top_eta = sel.eta;
    T.rho = rho;
    T.kind = kind;
    for (int i : (sweep ? sel.sweep : sel.tree)) T.tiles.push_back(tiles_[i]);
    T.sort_canonical();
    return T;
  }

 private:
  template <typename F>
  void for_each_tree(const std::vector<char>& active, bool top_in_tree,
                     F&& fn) const {
    for (size_t ci = 0; ci < cands_.size(); ++ci) {
      const Cand& c = cands_[ci];
      for (size_t ti = 0; ti < tops_.size(); ++ti) {
        const Top& t = tops_[ti];
        if (top_in_tree) {
          if (t.index_in_set < 0 || !active[t.index_in_set]) continue;
          if (!c.lac.get(t.index_in_set)) continue;  // top tile must qualify
        }
        double sum = 0.0;
        bool any = false;
        for (size_t i = 0; i < n_; ++i) {
          if (!active[i]) continue;
          if (c.lac.get(i) && t.meets.get(i)) {
            sum += coeff2_[i];
            any = true;
          }
        }
        if (!any) continue;
        fn(std::sqrt(sum / t.vol), ci, ti);
      }
    }
  }

  void build_candidates() {
    std::map<std::string, size_t> seen;
    for (const auto& t : tiles_) {
      long long total = t.alpha_count();
      for (long long tau = 1; tau <= total; ++tau) {
        TriadicCube cell = t.alpha(tau);
        RatVec eta = cell.center_vec();
        std::string k;
        for (auto& c : eta) k += c.str() + ",";
        if (seen.count(k)) continue;
        seen.emplace(k, cands_.size());
        Cand c;
        c.eta = eta;
        c.sig = signature(eta, *t.Q.cfg, 40);
        c.lac.resize(n_);
        c.gen.resize(n_);
        for (size_t i = 0; i < n_; ++i) {
          if (tiles_[i].Q.contains_point(eta)) {
            c.gen.set(i);
            if (!tiles_[i].Q.center_child().contains_point(eta)) c.lac.set(i);
          }
        }
        cands_.push_back(std::move(c));
      }
    }
  }

  void build_tops() {
    const TileUniverse& u = *ctx_->universe;
    const auto& p = u.params();
    // bounding box of the set, with spatial vertical footprints
    RatVec blo = tiles_[0].space().lo, bhi = tiles_[0].space().hi;
    auto [bil, bih] = tiles_[0].space().vertical_extent();
    int finest = tiles_[0].L.level;
    for (const auto& t : tiles_) {
      Pll R = t.space();
      for (int i = 0; i < R.d; ++i) {
        if (R.lo[i] < blo[i]) blo[i] = R.lo[i];
        if (bhi[i] < R.hi[i]) bhi[i] = R.hi[i];
      }
      auto [vl, vh] = R.vertical_extent();
      if (vl < bil) bil = vl;
      if (bih < vh) bih = vh;
      finest = std::max(finest, t.L.level);
    }
    std::map<std::string, size_t> index_of;
    for (size_t i = 0; i < n_; ++i) index_of[tiles_[i].key()] = i;
    std::vector<TriadicCube> qset;
    for (const auto& t : tiles_) qset.push_back(t.Q);
    const Rat K2 = u.grids().gc.K_pow(2);
    std::map<std::string, size_t> dedupe;
    for (int jL = p.L_level_min; jL <= finest; ++jL) {
      for (const Tile& cand : u.aligned_tops(jL, qset, blo, bhi, bil, bih)) {
        if (!cand.same_annulus(tiles_[0])) continue;
        Top top;
        top.tile = cand;
        top.vol = cand.space().volume().to_double();
        auto it = index_of.find(cand.key());
        if (it != index_of.end()) top.index_in_set = (int)it->second;
        top.meets.resize(n_);
        top.meets_k2.resize(n_);
        Pll RT = cand.space();
        Pll RT2 = RT.dilate(K2);
        bool nonempty = false;
        for (size_t i = 0; i < n_; ++i) {
          Pll Rt = tiles_[i].space();
          if (Rt.scl() > RT.scl()) continue;
          if (Rt.meets(RT)) {
            top.meets.set(i);
            nonempty = true;
          }
          if (Rt.meets(RT2)) top.meets_k2.set(i);
        }
        if (!nonempty) continue;
        // dedupe identical membership patterns, keep the smaller volume
        std::string key;
        for (auto w : top.meets.w) key += std::to_string(w) + ":";
        for (auto w : top.meets_k2.w) key += std::to_string(w) + ";";
        key += top.index_in_set >= 0 ? "s" + std::to_string(top.index_in_set)
                                     : "x";
        auto dit = dedupe.find(key);
        if (dit != dedupe.end()) {
          Top& old = tops_[dit->second];
          if (top.vol < old.vol ||
              (top.vol == old.vol && top.tile.key() < old.tile.key()))
            old = top;
          continue;
        }
        dedupe.emplace(key, tops_.size());
        tops_.push_back(std::move(top));
      }
    }
  }

  const GaugeContext* ctx_;
  std::vector<Tile> tiles_;
  size_t n_ = 0;
  std::vector<double> coeff2_;
  std::vector<Cand> cands_;
  std::vector<Top> tops_;
};

enum class SizeVariant { sup_all, top_in_tree };

inline double size_gauge(const GaugeContext& ctx, const std::vector<Tile>& q,
                         SizeVariant variant = SizeVariant::sup_all) {
  if (q.empty()) return 0.0;
  SizeEngine eng(ctx, q);
  std::vector<char> active(eng.count(), 1);
  return eng.size(active, variant == SizeVariant::top_in_tree);
}

// ---- model operator and square function -------------------------------------------

inline double model_lambda(const GaugeContext& ctx, const std::vector<Tile>& P,
                           const DiscreteField& g_space) {
  double s = 0.0;
  std::vector<Tile> sorted = P;
  std::sort(sorted.begin(), sorted.end());
  for (const auto& t : sorted) s += coeff_F(ctx, t) * coeff_A(ctx, g_space, t);
  return s;
}

// accumulate scale * (cell fraction covered by R) over the torus cells
inline void accumulate_fractions(const Pll& R, const TorusGrid& g, double scale,
                                 std::vector<double>& acc) {
  int d = R.d, n = d + 1;
  // integer translates of R into the unit box
  std::vector<long long> tlo(n), thi(n);
  for (int i = 0; i < d; ++i) {
    tlo[i] = R.lo[i].floor();
    thi[i] = R.hi[i].floor();
  }
  Rat m(0), M(0);
  for (int i = 0; i < d; ++i) {
    Rat a = R.eta[i] * R.lo[i], b = R.eta[i] * R.hi[i];
    if (a < b) { m += a; M += b; } else { m += b; M += a; }
  }
  tlo[d] = (R.ilo - M).floor();
  thi[d] = (R.ihi - m).floor();
  Pll cell;
  cell.d = d;
  cell.lo.resize(d);
  cell.hi.resize(d);
  cell.eta.assign(d, Rat(0));
  std::array<long long, 4> t{0, 0, 0, 0};
  std::function<void(int)> rec = [&](int axis) {
    if (axis == n) {
      // R translated by -t; iterate cells in its clipped bounding box
      Pll S = R;
      for (int i = 0; i < d; ++i) {
        S.lo[i] = R.lo[i] - Rat(t[i]);
        S.hi[i] = R.hi[i] - Rat(t[i]);
      }
      S.ilo = R.ilo - Rat(t[d]);
      S.ihi = R.ihi - Rat(t[d]);
      std::array<int, 3> clo{0, 0, 0}, chi{0, 0, 0};
      RatVec cl(d), ch(d);
      for (int i = 0; i < d; ++i) {
        cl[i] = S.lo[i] < Rat(0) ? Rat(0) : S.lo[i];
        ch[i] = S.hi[i] > Rat(1) ? Rat(1) : S.hi[i];
        if (ch[i] < cl[i]) return;
        clo[i] = (int)std::max<long long>(0, floor_div(cl[i], Rat(1, g.N)));
        chi[i] = (int)std::min<long long>(g.N - 1, floor_div(ch[i], Rat(1, g.N)));
      }
      // vertical window from the shear range over the clipped box
      Rat cm(0), cM(0);
      for (int i = 0; i < d; ++i) {
        Rat a = S.eta[i] * cl[i], b = S.eta[i] * ch[i];
        if (a < b) { cm += a; cM += b; } else { cm += b; cM += a; }
      }
      clo[d] = (int)std::max<long long>(0, floor_div(S.ilo - cM, Rat(1, g.N)));
      chi[d] = (int)std::min<long long>(g.N - 1, floor_div(S.ihi - cm, Rat(1, g.N)));
      if (clo[d] > chi[d]) return;
      std::array<int, 3> ix{0, 0, 0};
      std::function<void(int)> cells = [&](int axis2) {
        if (axis2 == n) {
          for (int i = 0; i < d; ++i) {
            cell.lo[i] = Rat(ix[i], g.N);
            cell.hi[i] = Rat(ix[i] + 1, g.N);
          }
          cell.ilo = Rat(ix[d], g.N);
          cell.ihi = Rat(ix[d] + 1, g.N);
          double v = volume_intersection(S, cell);
          if (v > 0.0) acc[g.flat(ix)] += scale * v * double(g.cells());
          return;
        }
        for (int k = clo[axis2]; k <= chi[axis2]; ++k) {
          ix[axis2] = k;
          cells(axis2 + 1);
        }
      };
      cells(0);
      return;
    }
    for (long long k = tlo[axis]; k <= thi[axis] + 1; ++k) {
      t[axis] = k;
      rec(axis + 1);
    }
  };
  rec(0);
}

// pointwise (sum_t coeff^2 1_{R_t} / |R_t|)^{1/2} with exact cell fractions
inline DiscreteField square_function(const GaugeContext& ctx, const Tree& T) {
  if (T.kind != TreeKind::lacunary)
    throw std::invalid_argument("square_function: tree must be lacunary");
  std::vector<double> acc(ctx.grid.cells(), 0.0);
  for (const auto& t : T.tiles) {
    double c = coeff_F(ctx, t);
    Pll R = t.space();
    accumulate_fractions(R, ctx.grid, c * c / R.volume().to_double(), acc);
  }
  DiscreteField out(ctx.grid, false);
  for (size_t id = 0; id < acc.size(); ++id)
    out.a[id] = cplx(std::sqrt(acc[id]), 0.0);
  return out;
}

// gauge report: one row per tile with the computed gauges
inline void write_gauge_csv(const GaugeContext& ctx,
                            const std::vector<Tile>& tiles,
                            const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("gauge csv: cannot open " + path);
  os << "tile,coeff_F,dense,densesup\r\n";
  std::vector<Tile> sorted = tiles;
  std::sort(sorted.begin(), sorted.end());
  char buf[64];
  for (const auto& t : sorted) {
    os << t.key();
    std::snprintf(buf, sizeof buf, ",%.17g", coeff_F(ctx, t));
    os << buf;
    std::snprintf(buf, sizeof buf, ",%.17g", dense(ctx, t));
    os << buf;
    std::snprintf(buf, sizeof buf, ",%.17g", densesup(ctx, t));
    os << buf << "\r\n";
  }
}

}  // namespace tfa
