#pragma once

#include <chrono>
#include <cmath>
#include <filesystem>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "tfa/csv.hpp"
#include "tfa/generators.hpp"
#include "tfa/multiplier.hpp"
#include "tfa/selection.hpp"
#include "tfa/svg.hpp"
#include "tfa/toml_lite.hpp"

#include <json.hpp>

namespace tfa {

struct ExperimentConfig {
  std::string id = "nondegenerate";
  int dim = 2;  // ambient dimension n
  int grid = 256;
  std::vector<int> k_list = {2, 4, 8, 16};
  double eps = 0.5;
  std::vector<double> eps_list = {};  // counterexample vertical-band ladder
  std::vector<double> p_list = {2.0};
  std::vector<uint64_t> seeds = {1, 2, 3};
  std::string out_dir = "out";
  std::string multiplier = "riesz-component";
  int band_k = 2;  // input band exponent: frequencies near 3^{band_k}

  static ExperimentConfig from_toml(const TomlFile& f) {
    ExperimentConfig c;
    c.id = f.text("experiment.id", c.id);
    c.dim = (int)f.integer("experiment.dim", c.dim);
    c.grid = (int)f.integer("experiment.grid", c.grid);
    c.eps = f.number("experiment.eps", c.eps);
    c.multiplier = f.text("experiment.multiplier", c.multiplier);
    c.band_k = (int)f.integer("experiment.band_k", c.band_k);
    c.out_dir = f.text("experiment.out", c.out_dir);
    auto ks = f.numbers("experiment.k_list", {});
    if (!ks.empty()) {
      c.k_list.clear();
      for (double v : ks) c.k_list.push_back((int)std::llround(v));
    }
    auto el = f.numbers("experiment.eps_list", {});
    if (!el.empty()) c.eps_list = el;
    auto ps = f.numbers("experiment.p_list", {});
    if (!ps.empty()) c.p_list = ps;
    auto ss = f.numbers("experiment.seeds", {});
    if (!ss.empty()) {
      c.seeds.clear();
      for (double v : ss) c.seeds.push_back((uint64_t)std::llround(v));
    }
    if (!(c.dim == 2 || c.dim == 3))
      throw std::invalid_argument("config rejected: dim must be 2 or 3");
    if (c.id == "nondegenerate" && c.eps < 0.25)
      throw std::invalid_argument("config rejected: nondegenerate needs eps >= 0.25");
    return c;
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["id"] = id;
    j["dim"] = dim;
    j["grid"] = grid;
    j["k_list"] = k_list;
    j["eps"] = eps;
    j["eps_list"] = eps_list;
    j["p_list"] = p_list;
    j["seeds"] = seeds;
    j["multiplier"] = multiplier;
    j["band_k"] = band_k;
    return j;
  }
};

inline uint64_t fnv1a(const std::string& s) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

struct RunManifest {
  uint64_t config_hash = 0;
  nlohmann::json config;
  nlohmann::json constants;
  nlohmann::json results;
  std::string timestamp;

  static RunManifest start(const ExperimentConfig& cfg) {
    RunManifest m;
    m.config = cfg.to_json();
    m.config_hash = fnv1a(m.config.dump());
    m.constants = {{"k_n", calib::pinned_kn(cfg.dim - 1)},
                   {"tree_bound_ceiling", calib::tree_bound_ceiling},
                   {"maxkey_ceiling", calib::maxkey_ceiling}};
    auto now = std::chrono::system_clock::now();
    m.timestamp = std::to_string(
        std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch())
            .count());
    return m;
  }

  void write(const std::string& path) const {
    nlohmann::json j;
    j["config_hash"] = config_hash;
    j["config"] = config;
    j["constants"] = constants;
    j["results"] = results;
    j["timestamp"] = timestamp;
    std::ofstream os(path, std::ios::binary);
    os << j.dump(2) << "\n";
  }
};

// ---- deterministic per-mode coefficients (grid-independent) ---------------------

inline cplx mode_coefficient(uint64_t seed, const std::vector<int>& xi) {
  uint64_t h = seed * 0x9e3779b97f4a7c15ull + 0x12345;
  for (int c : xi) {
    h ^= (uint64_t)(int64_t)c + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    h *= 0xbf58476d1ce4e5b9ull;
  }
  double a = double(h >> 11) * 0x1.0p-53;
  h *= 0x94d049bb133111ebull;
  double b = double(h >> 11) * 0x1.0p-53;
  return cplx(2.0 * a - 1.0, 2.0 * b - 1.0);
}

// band-limited field whose spectral content is a function of the frequency
// alone, so refining the grid keeps the function fixed
inline DiscreteField seeded_band_field(const TorusGrid& g, uint64_t seed,
                                       int band_k) {
  DiscreteField f(g, true);
  double lo = std::pow(3.0, band_k), hi = std::pow(3.0, band_k + 1);
  for (size_t id = 0; id < f.a.size(); ++id) {
    auto ix = g.unflat(id);
    std::vector<int> xi(g.n);
    double r2 = 0.0;
    for (int i = 0; i < g.n; ++i) {
      xi[i] = g.freq(ix[i]);
      r2 += double(xi[i]) * xi[i];
    }
    double r = std::sqrt(r2);
    if (r > lo && r < hi) f.a[id] = mode_coefficient(seed, xi);
  }
  return f;
}

// ---- experiment: non-degenerate stability -----------------------------------------

struct RatioRow {
  uint64_t seed = 0;
  int N = 0, K = 0;
  double p = 2.0, eps = 0.5;
  double norm_out = 0.0, norm_in = 0.0, ratio = 0.0;
};

inline std::vector<Direction> spread_directions(int n, int K, double eps,
                                                double fill = 0.8) {
  // eta window of the non-degeneracy region
  double cosmin = 1.0 - (1.0 - eps) * (1.0 - eps);
  double bound = std::sqrt(1.0 / (cosmin * cosmin) - 1.0);
  double h = fill * bound;
  std::vector<Direction> out;
  if (n == 2) {
    for (int j = 0; j < K; ++j) {
      double eta = -h + 2.0 * h * (j + 0.5) / K;
      out.push_back(direction_from_vector({eta, 1.0}));
    }
  } else {
    for (int j = 0; j < K; ++j) {
      double phi = 2.0 * std::numbers::pi * j / K;
      double r = h * (0.4 + 0.6 * ((j % 3) + 1) / 3.0);
      out.push_back(direction_from_vector({r * std::cos(phi),
                                           r * std::sin(phi), 1.0}));
    }
  }
  return out;
}

inline RatioRow measure_nondegenerate(const ExperimentConfig& cfg, uint64_t seed,
                                      int N, int K, double p) {
  TorusGrid g(cfg.dim, N);
  DiscreteField f = seeded_band_field(g, seed, cfg.band_k);
  DiscreteField input = proj_cone(cfg.eps, proj_band(cfg.band_k, f));
  MultiplierSpec base = cfg.multiplier == "identity" ? multiplier_identity()
                                                     : multiplier_riesz(0);
  MultiplierFamily fam = MultiplierFamily::constant(base);
  DirectionField sigma;
  sigma.dgrid = TorusGrid(cfg.dim - 1, N);
  sigma.values = spread_directions(cfg.dim, K, cfg.eps);
  sigma.eps = cfg.eps;
  Rng rng(seed * 977 + K);
  sigma.label.assign(sigma.dgrid.cells(), 0);
  for (auto& l : sigma.label) l = (int)rng.range(0, K - 1);
  if (!sigma.check_nondegenerate())
    throw std::logic_error("nondegenerate: direction left the admissible cone");
  DiscreteField out = apply_linearized(sigma, fam, input);
  RatioRow row;
  row.seed = seed;
  row.N = N;
  row.K = K;
  row.p = p;
  row.eps = cfg.eps;
  row.norm_out = out.norm_lp(p);
  row.norm_in = f.as_space().norm_lp(p);
  row.ratio = row.norm_in > 0 ? row.norm_out / row.norm_in : 0.0;
  return row;
}

struct NondegenerateReport {
  std::vector<RatioRow> rows;
  // medians over seeds at the target grid and its half
  std::map<int, double> median_fine, median_coarse;
  double spread_over_K = 0.0;      // max/min - 1 at the fine grid
  double max_doubling_drift = 0.0; // relative change per K between grids
};

inline double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

inline NondegenerateReport run_nondegenerate(const ExperimentConfig& cfg) {
  NondegenerateReport rep;
  int fine = cfg.grid, coarse = cfg.grid / 2;
  for (uint64_t seed : cfg.seeds)
    for (int K : cfg.k_list)
      for (double p : cfg.p_list)
        for (int N : {coarse, fine})
          rep.rows.push_back(measure_nondegenerate(cfg, seed, N, K, p));
  for (int K : cfg.k_list) {
    std::vector<double> vf, vc;
    for (const auto& r : rep.rows) {
      if (r.K != K || r.p != cfg.p_list.front()) continue;
      (r.N == fine ? vf : vc).push_back(r.ratio);
    }
    rep.median_fine[K] = median_of(vf);
    rep.median_coarse[K] = median_of(vc);
  }
  double mn = 1e300, mx = 0.0, drift = 0.0;
  for (int K : cfg.k_list) {
    mn = std::min(mn, rep.median_fine[K]);
    mx = std::max(mx, rep.median_fine[K]);
    double c = rep.median_coarse[K], f = rep.median_fine[K];
    if (f > 0) drift = std::max(drift, std::abs(f - c) / f);
  }
  rep.spread_over_K = mn > 0 ? mx / mn - 1.0 : 1e300;
  rep.max_doubling_drift = drift;
  return rep;
}

// ---- experiment: 2d harness with a pluggable symbol --------------------------------

// spectral application of eta -> m(u . xi) for a spanning vector u
inline DiscreteField apply_along_span(const MultiplierSpec& m,
                                      const std::vector<double>& u,
                                      const DiscreteField& f) {
  return spectral_apply(f, [&](const std::vector<double>& xi) {
    double ip = 0.0;
    for (size_t i = 0; i < u.size(); ++i) ip += u[i] * xi[i];
    return m.eval({ip});
  });
}

struct GrowthRow {
  int K = 0;
  double eps = 0.0, p = 2.0;
  double norm_out = 0.0, norm_in = 0.0;  // the two norms behind the ratio
  double ratio = 0.0;
};

inline std::vector<GrowthRow> run_counterexample_2d(const ExperimentConfig& cfg,
                                                    const MultiplierSpec& m) {
  TorusGrid g(2, cfg.grid);
  std::vector<GrowthRow> rows;
  std::vector<double> epsl = cfg.eps_list.empty()
                                 ? std::vector<double>{0.5}
                                 : cfg.eps_list;
  for (double eps : epsl) {
    int W = g.N / 4;
    int b = std::max(1, (int)std::lround(eps * 8.0));
    // F(x) = f(x1) psi_b(x2): horizontal band times a thin vertical band
    DiscreteField F(g, true);
    for (size_t id = 0; id < F.a.size(); ++id) {
      auto ix = g.unflat(id);
      int k1 = g.freq(ix[0]), k2 = g.freq(ix[1]);
      if (std::abs(k1) < W / 3 || std::abs(k1) > W) continue;
      if (k2 < b || k2 > 2 * b) continue;
      F.a[id] = mode_coefficient(cfg.seeds.empty() ? 7 : cfg.seeds[0],
                                 {k1, k2});
    }
    double nf = F.as_space().norm_lp(cfg.p_list.front());
    // running maxima over the dilation ladder
    DiscreteField running(g, false);
    for (int k = 1; k <= *std::max_element(cfg.k_list.begin(), cfg.k_list.end());
         ++k) {
      double s = std::pow(2.0, -double(k));
      std::vector<double> u = {s, std::sqrt(1.0 - s * s)};
      DiscreteField piece = apply_along_span(m, u, F).as_space();
      for (size_t id = 0; id < running.a.size(); ++id)
        running.a[id] = cplx(
            std::max(running.a[id].real(), std::abs(piece.a[id])), 0.0);
      if (std::find(cfg.k_list.begin(), cfg.k_list.end(), k) !=
          cfg.k_list.end()) {
        GrowthRow row;
        row.K = k;
        row.eps = eps;
        row.p = cfg.p_list.front();
        row.norm_out = running.norm_lp(row.p);
        row.norm_in = nf;
        row.ratio = nf > 0 ? row.norm_out / nf : 0.0;
        rows.push_back(row);
      }
    }
  }
  return rows;
}

// ---- experiment: 3d degenerate growth ----------------------------------------------

// Kakeya-adapted input: smoothed tubes aligned with the slope ladders of
// every dyadic level up to the target, at seeded positions. Coarse ladders
// cannot reach the tubes attached to deeper levels because the vertical band
// cuts a sector around each operator direction, so each doubling of the
// ladder unlocks the spreading response of its own tube layer.
inline DiscreteField kakeya_adapted_field(const TorusGrid& g, int K_max,
                                          int band, uint64_t seed,
                                          double slope_max = 2.5,
                                          double tube_len = 0.4,
                                          double width_cells = 2.5) {
  int N = g.N;
  std::vector<double> f(size_t(N) * N, 0.0);
  double w = width_cells / N;
  Rng rng(seed);
  int deepest = std::max(2, K_max);
  for (int m = 2; m <= deepest; m *= 2) {
    for (int k = 0; k < m; ++k) {
      double slope = slope_max * (k + 0.5) / double(m);
      double inv = 1.0 / std::sqrt(1.0 + slope * slope);
      double c = inv, sdir = slope * inv;
      double cx = rng.uniform(0.15, 0.85), cy = rng.uniform(0.15, 0.85);
      for (int i1 = 0; i1 < N; ++i1)
        for (int i2 = 0; i2 < N; ++i2) {
          double x = double(i1) / N - cx, y = double(i2) / N - cy;
          x -= std::floor(x + 0.5);
          y -= std::floor(y + 0.5);
          double along = x * c + y * sdir, across = -x * sdir + y * c;
          f[size_t(i1) * N + i2] +=
              plateau(across, -w / 2, w / 2, w / 4) *
              plateau(along, -tube_len / 2, tube_len / 2, tube_len / 4);
        }
    }
  }
  DiscreteField horiz(TorusGrid(2, N), false);
  for (size_t id = 0; id < horiz.a.size(); ++id) horiz.a[id] = f[id];
  horiz.to_spectral();
  DiscreteField F(g, true);
  double W = double(N) / 2.2;
  for (size_t id = 0; id < F.a.size(); ++id) {
    auto ix = g.unflat(id);
    int k1 = g.freq(ix[0]), k2 = g.freq(ix[1]), k3 = g.freq(ix[2]);
    double rh = std::sqrt(double(k1) * k1 + double(k2) * k2);
    if (rh < 2.0 || rh > W) continue;
    if (k3 < band || k3 > 2 * band) continue;
    F.a[id] = horiz.a[horiz.grid.flat({ix[0], ix[1], 0})] *
              plateau(double(k3), band * 0.9, 2.1 * band, 0.3 * band);
  }
  return F;
}

// offset equispaced-in-slope ladder; the sets accumulate as K grows
inline std::vector<double> slope_ladder(int K, double slope_max = 2.5) {
  std::vector<double> v;
  for (int k = 0; k < K; ++k) v.push_back(slope_max * (k + 0.5) / double(K));
  return v;
}

inline double measure_degenerate_3d(const ExperimentConfig& cfg, int K,
                                    double eps, double p, int tube_levels,
                                    double* norm_out = nullptr,
                                    double* norm_in = nullptr) {
  TorusGrid g(3, cfg.grid);
  int band = std::max(1, (int)std::lround(eps * 8.0));
  uint64_t seed = cfg.seeds.empty() ? 42 : cfg.seeds.front();
  DiscreteField F = kakeya_adapted_field(g, tube_levels, band, seed);
  double nf = F.as_space().norm_lp(p);
  if (nf == 0.0) return 0.0;
  MultiplierSpec sign1 = multiplier_hilbert_sign();
  // per-direction transforms: m(u . xi_bar) phi(xi_3 / |u . xi_bar|)
  std::vector<DiscreteField> pieces;
  for (double slope : slope_ladder(K)) {
    double inv = 1.0 / std::sqrt(1.0 + slope * slope);
    double c = inv, sdir = slope * inv;
    DiscreteField piece = spectral_apply(F, [&](const std::vector<double>& xi) {
      double ip = c * xi[0] + sdir * xi[1];
      cplx mv = sign1.eval({ip});
      double denom = std::abs(ip);
      double phi;
      if (denom == 0.0) {
        phi = 0.0;
      } else {
        double ratio = std::abs(xi[2]) / denom;
        phi = ratio <= 0.5 ? 1.0
              : ratio >= 1.0 ? 0.0
                             : smooth_step((1.0 - ratio) / 0.5);
      }
      return mv * phi;
    });
    pieces.push_back(piece.as_space());
  }
  // adversarial direction field: per horizontal cell, the label maximizing
  // the vertical energy; measurable and constant in the last coordinate
  TorusGrid dg(2, cfg.grid);
  std::vector<int> label(dg.cells(), 0);
  std::vector<double> best(dg.cells(), -1.0);
  for (int k = 0; k < K; ++k) {
    for (size_t hid = 0; hid < dg.cells(); ++hid) {
      auto hx = dg.unflat(hid);
      double e = 0.0;
      for (int i3 = 0; i3 < g.N; ++i3)
        e += std::norm(pieces[k].a[g.flat({hx[0], hx[1], i3})]);
      if (e > best[hid]) {
        best[hid] = e;
        label[hid] = k;
      }
    }
  }
  DiscreteField out(g, false);
  for (size_t id = 0; id < out.a.size(); ++id) {
    auto ix = g.unflat(id);
    out.a[id] = pieces[label[dg.flat({ix[0], ix[1], 0})]].a[id];
  }
  double no = out.norm_lp(p);
  if (norm_out) *norm_out = no;
  if (norm_in) *norm_in = nf;
  return no / nf;
}

inline std::vector<GrowthRow> run_counterexample_3d(const ExperimentConfig& cfg) {
  std::vector<GrowthRow> rows;
  std::vector<double> epsl = cfg.eps_list.empty()
                                 ? std::vector<double>{0.5}
                                 : cfg.eps_list;
  int kmax = *std::max_element(cfg.k_list.begin(), cfg.k_list.end());
  for (double eps : epsl)
    for (int K : cfg.k_list)
      for (double p : cfg.p_list) {
        GrowthRow r;
        r.K = K;
        r.eps = eps;
        r.p = p;
        r.ratio = measure_degenerate_3d(cfg, K, eps, p, kmax, &r.norm_out,
                                        &r.norm_in);
        rows.push_back(r);
      }
  return rows;
}

// ---- experiment: decomposition statistics ------------------------------------------

struct StatsReport {
  std::vector<LevelStats> levels;  // aggregated over seeds
  int violations = 0;
  int seeds_run = 0;
};

inline StatsReport run_decomposition_stats(const ExperimentConfig& cfg,
                                           int tiles_per_seed = 24) {
  StatsReport rep;
  for (uint64_t seed : cfg.seeds) {
    auto setup = gen::desk_setup(1, 64, seed);
    Rng rng(seed * 31 + 5);
    std::vector<Tile> P = setup.universe->random_tiles(rng, tiles_per_seed);
    DecompositionResult res = iterate_decompose(setup.ctx, P, cfg.eps);
    ++rep.seeds_run;
    for (const auto& ls : res.levels) {
      rep.levels.push_back(ls);
      double cap = std::min({calib::level_density_ceiling * ls.bound_density,
                             calib::level_size_ceiling * ls.bound_size,
                             calib::level_maximal_ceiling * ls.bound_maximal});
      if (ls.sum_R > cap) ++rep.violations;
    }
  }
  return rep;
}

// ---- output helpers -----------------------------------------------------------------

inline void write_ratio_csv(const std::string& path,
                            const std::vector<RatioRow>& rows) {
  CsvWriter w(path);
  w.field("seed").field("N").field("K").field("p").field("eps");
  w.field("norm_out").field("norm_in").field("ratio");
  w.endrow();
  for (const auto& r : rows) {
    w.field((long long)r.seed).field(r.N).field(r.K).field(r.p).field(r.eps);
    w.field(r.norm_out).field(r.norm_in).field(r.ratio);
    w.endrow();
  }
}

inline void write_growth_csv(const std::string& path,
                             const std::vector<GrowthRow>& rows) {
  CsvWriter w(path);
  w.field("K").field("eps").field("p").field("norm_out").field("norm_in");
  w.field("ratio").endrow();
  for (const auto& r : rows) {
    w.field(r.K).field(r.eps).field(r.p).field(r.norm_out).field(r.norm_in);
    w.field(r.ratio);
    w.endrow();
  }
}

inline void write_growth_svg(const std::string& path,
                             const std::vector<GrowthRow>& rows,
                             const std::string& title) {
  SvgChart chart(title, "K", "ratio");
  std::map<double, SvgChart::Series> per_eps;
  const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
  int ci = 0;
  for (const auto& r : rows) {
    auto it = per_eps.find(r.eps);
    if (it == per_eps.end()) {
      SvgChart::Series s;
      s.label = "eps=" + CsvWriter::format(r.eps);
      s.color = colors[ci++ % 4];
      it = per_eps.emplace(r.eps, std::move(s)).first;
    }
    it->second.pts.emplace_back(double(r.K), r.ratio);
  }
  for (auto& [e, s] : per_eps) chart.add_series(s);
  chart.write(path);
}

inline void write_levels_csv(const std::string& path,
                             const std::vector<LevelStats>& levels) {
  CsvWriter w(path);
  w.field("k").field("j").field("trees").field("sum_R");
  w.field("bound_density").field("bound_size").field("bound_maximal");
  w.endrow();
  for (const auto& ls : levels) {
    w.field(ls.k).field(ls.j).field(ls.tree_count).field(ls.sum_R);
    w.field(ls.bound_density).field(ls.bound_size).field(ls.bound_maximal);
    w.endrow();
  }
}

// bound-dominance map of the three-way minimum in the (|E|/|F|, size) plane
inline void write_dominance_svg(const std::string& path, double eps) {
  SvgChart chart("dominant bound regions (eps=" + CsvWriter::format(eps) + ")",
                 "log10(|E|/|F|)", "log10(size)");
  SvgChart::Series dens{"density", "#1f77b4", {}};
  SvgChart::Series size{"size", "#d62728", {}};
  SvgChart::Series maxi{"maximal", "#2ca02c", {}};
  for (double le = -2.0; le <= 2.0; le += 0.1) {
    for (double ls = -3.0; ls <= 0.0; ls += 0.1) {
      double ratio = std::pow(10.0, le);   // |E|/|F|
      double sigma = std::pow(10.0, ls);
      double delta = sigma;  // slice: density gauge tied to size for display
      double bd = ratio / delta;
      double bs = 1.0 / (sigma * sigma);
      double bm = std::pow(ratio, eps) / (delta * std::pow(sigma, 1 + eps));
      double mn = std::min({bd, bs, bm});
      if (mn == bd) dens.pts.emplace_back(le, ls);
      else if (mn == bs) size.pts.emplace_back(le, ls);
      else maxi.pts.emplace_back(le, ls);
    }
  }
  chart.add_series(dens);
  chart.add_series(size);
  chart.add_series(maxi);
  chart.write(path);
}

}  // namespace tfa
