#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "tfa/bump.hpp"
#include "tfa/field.hpp"
#include "tfa/tile.hpp"

namespace tfa {

struct WavePacketConfig {
  int M = 0;                  // decay/smoothness parameter; 0 = use 10n
  long long tau0 = 1;         // peripheral-child index of the direction factor
  double radial_ramp = 0.35;  // log-scale ramp width of the radial window
  double angular_ramp = 0.25; // per-axis ramp width, relative to the cube side

  int effective_M(int n) const { return M > 0 ? M : 10 * n; }
};

// Unit-norm wave packet carried by a tile: a smooth spectral window filling
// the central part of the tile frequency component, phase-centered on the
// space component. Spectral support never leaves the frequency center, so
// the leakage bound holds with exact zeros.
struct CanonicalPacket {
  Tile tile;
  DiscreteField spec;  // spectral, unit l2 norm
  mutable DiscreteField space_cache;
  mutable bool have_space = false;

  const DiscreteField& space() const {
    if (!have_space) {
      space_cache = spec.as_space();
      have_space = true;
    }
    return space_cache;
  }
};

struct PacketError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline CanonicalPacket build_packet(const TorusGrid& g, const Tile& t,
                                    const WavePacketConfig& cfg) {
  CanonicalPacket p;
  p.tile = t;
  p.spec = DiscreteField(g, true);
  const double ann = t.ann().to_double();
  const double rmax = std::min(6.0, (double(g.N) / 2.0 - 1.0) / ann);
  if (rmax <= 0.75)
    throw std::invalid_argument(
        "build_packet: annulus does not fit the frequency lattice");
  TriadicCube core = t.Q.center_child();
  const int d = t.d();
  std::vector<double> qlo(d), qhi(d), ramp(d);
  for (int i = 0; i < d; ++i) {
    qlo[i] = core.low(i).to_double();
    qhi[i] = core.high(i).to_double();
    ramp[i] = cfg.angular_ramp * (qhi[i] - qlo[i]);
  }
  // spatial phase center
  Pll R = t.space();
  std::vector<double> centre(g.n);
  for (int i = 0; i < d; ++i) centre[i] = R.center_bar()[i].to_double();
  centre[g.n - 1] = R.center_i().to_double() -
                    [&] {
                      double s = 0.0;
                      for (int i = 0; i < d; ++i)
                        s += R.center_bar()[i].to_double() *
                             R.eta[i].to_double();
                      return s;
                    }();

  const double lr = std::log(rmax / 0.5) / std::log(3.0);
  double mass = 0.0;
  size_t cells = g.cells();
  for (size_t id = 0; id < cells; ++id) {
    auto ix = g.unflat(id);
    double xin = double(g.freq(ix[g.n - 1]));
    if (xin <= 0.0) continue;  // frequency support sits in the upper cone
    double r2 = xin * xin;
    for (int i = 0; i < d; ++i) {
      double c = double(g.freq(ix[i]));
      r2 += c * c;
    }
    double r = std::sqrt(r2) / ann;
    if (r <= 0.5 || r >= rmax) continue;
    // radial factor on a log scale over (1/2, rmax)
    double u = std::log(r / 0.5) / std::log(3.0);
    double w = smooth_step(u / cfg.radial_ramp) *
               smooth_step((lr - u) / cfg.radial_ramp);
    if (w == 0.0) continue;
    // angular factor through the gnomonic parameter
    for (int i = 0; i < d && w != 0.0; ++i) {
      double e = double(g.freq(ix[i])) / xin;
      if (e <= qlo[i] || e >= qhi[i]) {
        w = 0.0;
        break;
      }
      w *= smooth_step((e - qlo[i]) / ramp[i]) *
           smooth_step((qhi[i] - e) / ramp[i]);
    }
    if (w == 0.0) continue;
    double phase = 0.0;
    for (int i = 0; i < g.n; ++i) phase -= double(g.freq(ix[i])) * centre[i];
    phase *= 2.0 * std::numbers::pi;
    p.spec.a[id] = w * cplx(std::cos(phase), std::sin(phase));
    mass += w * w;
  }
  if (mass <= 0.0)
    throw std::invalid_argument(
        "build_packet: no lattice frequency inside the tile window");
  double inv = 1.0 / std::sqrt(mass);
  for (auto& c : p.spec.a) c *= inv;
  return p;
}

// spectral l2 mass outside the tile frequency center (diagnostic; zero by
// construction of the window)
inline double packet_leakage(const CanonicalPacket& p) {
  const TorusGrid& g = p.spec.grid;
  const Tile& t = p.tile;
  TriadicCube core = t.Q.center_child();
  double ann = t.ann().to_double();
  double out = 0.0;
  for (size_t id = 0; id < g.cells(); ++id) {
    if (p.spec.a[id] == cplx(0.0)) continue;
    auto ix = g.unflat(id);
    double xin = double(g.freq(ix[g.n - 1]));
    bool inside = xin > 0.0;
    double r2 = 0.0;
    for (int i = 0; i < g.n; ++i) {
      double c = double(g.freq(ix[i]));
      r2 += c * c;
    }
    double r = std::sqrt(r2) / ann;
    if (r <= 0.5 || r >= 6.0) inside = false;
    if (inside) {
      RatVec e(t.d());
      for (int i = 0; i < t.d(); ++i)
        e[i] = Rat(g.freq(ix[i]), g.freq(ix[g.n - 1]));
      if (!core.contains_point(e)) inside = false;
    }
    if (!inside) out += std::norm(p.spec.a[id]);
  }
  return out;
}

}  // namespace tfa
