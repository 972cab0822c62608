#pragma once

// Seeded generators for desk-scale universes, direction fields, masks and
// band-limited data; shared by the experiment runners and the test suites.

#include <memory>
#include <set>
#include <vector>

#include "tfa/calibration.hpp"
#include "tfa/gauges.hpp"
#include "tfa/universe.hpp"

namespace tfa::gen {

inline UniverseParams desk_universe_params(int d) {
  UniverseParams p;
  p.d = d;
  p.kappa = 1;
  p.ann_level = d == 1 ? 3 : 2;  // ann = 27 over 2d ambient, 9 over 3d
  p.L_level_min = 1;
  p.L_level_max = d == 1 ? 2 : 1;
  p.gen_radius = Rat(1, 2);
  p.k_n = calib::pinned_kn(d);
  return p;
}

inline DirectionField quantized_direction_field(const TileUniverse& u,
                                                const TorusGrid& dgrid, int K,
                                                Rng& rng, double eps = 0.5,
                                                long long tau0 = 1) {
  DirectionField s;
  s.dgrid = dgrid;
  s.eps = eps;
  const auto& g = u.grids();
  int level = u.params().ann_level - u.params().L_level_min;
  auto [qlo, qhi] = u.dir_index_range(level);
  std::set<std::string> seen;
  while ((int)s.values.size() < K) {
    TriadicCube q{g.dirs, level, {0, 0, 0}};
    for (int i = 0; i < u.params().d; ++i) q.idx[i] = rng.range(qlo, qhi);
    // bias half the palette into the counted peripheral child so the
    // density machinery engages on most seeds
    TriadicCube qq = rng.chance(0.5) ? q.peripheral_child(tau0) : [&] {
      long long b = g.dirs.branching();
      TriadicCube c = q;
      c.level += 1;
      for (int i = 0; i < u.params().d; ++i)
        c.idx[i] = q.idx[i] * b + rng.range(0, b - 1);
      return c;
    }();
    if (!seen.insert(qq.key()).second) continue;
    s.values.push_back(direction_from_cube(qq));
  }
  size_t cells = dgrid.cells();
  s.label.resize(cells);
  for (size_t i = 0; i < cells; ++i) s.label[i] = (int)rng.range(0, K - 1);
  return s;
}

inline std::vector<uint8_t> random_mask(const TorusGrid& g, double density,
                                        Rng& rng) {
  std::vector<uint8_t> m(g.cells(), 0);
  for (auto& b : m) b = rng.chance(density) ? 1 : 0;
  return m;
}

// band-limited random data in the annulus of a given scale, upper cone only,
// normalized to unit sup
inline DiscreteField band_limited_field(const TorusGrid& g, double ann,
                                        Rng& rng) {
  DiscreteField f(g, true);
  for (size_t id = 0; id < f.a.size(); ++id) {
    auto ix = g.unflat(id);
    double r2 = 0.0;
    for (int i = 0; i < g.n; ++i) {
      double c = double(g.freq(ix[i]));
      r2 += c * c;
    }
    double r = std::sqrt(r2);
    if (r > 0.55 * ann && r < 5.5 * ann && g.freq(ix[g.n - 1]) > 0)
      f.a[id] = cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
  }
  DiscreteField sp = f.as_space();
  double mx = 0.0;
  for (auto& c : sp.a) mx = std::max(mx, std::abs(c));
  if (mx > 0)
    for (auto& c : sp.a) c /= mx;
  return sp.as_spectral();
}

struct DeskSetup {
  std::unique_ptr<TileUniverse> universe;
  GaugeContext ctx;
};

inline DeskSetup desk_setup(int d, int N, uint64_t seed, int K = 4,
                            double e_density = 0.35) {
  DeskSetup out;
  out.universe = std::make_unique<TileUniverse>(desk_universe_params(d));
  Rng rng(seed);
  TorusGrid grid(d + 1, N);
  out.ctx.universe = out.universe.get();
  out.ctx.grid = grid;
  double ann = pow3(out.universe->ann_exp()).to_double();
  out.ctx.f_spec = band_limited_field(grid, ann, rng);
  out.ctx.F.assign(grid.cells(), 1);
  out.ctx.E = random_mask(grid, e_density, rng);
  out.ctx.sigma = quantized_direction_field(*out.universe, TorusGrid(d, N), K, rng);
  return out;
}

}  // namespace tfa::gen
