#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "tfa/grid.hpp"
#include "tfa/rational.hpp"

namespace tfa {

// Sheared box R(L, I, v): the set { x : x_bar in L, <x_bar, eta> + x_n in I }
// where v = (eta, 1)'. Intersection predicates treat cells as closed; measure
// statements refer to interiors, so touching faces never carry volume.
struct Pll {
  int d = 1;
  RatVec lo, hi;   // horizontal box, size d
  Rat ilo, ihi;    // vertical interval
  RatVec eta;      // shear parameter, size d

  int n() const { return d + 1; }

  Rat scl() const { return hi[0] - lo[0]; }        // horizontal side
  Rat height() const { return ihi - ilo; }         // |I|
  Rat volume() const {
    Rat v = height();
    for (int i = 0; i < d; ++i) v *= hi[i] - lo[i];
    return v;
  }
  // spatial range of the vertical coordinate over the whole box
  std::pair<Rat, Rat> vertical_extent() const {
    Rat m(0), M(0);
    for (int i = 0; i < d; ++i) {
      Rat a = eta[i] * lo[i], b = eta[i] * hi[i];
      if (a < b) { m += a; M += b; } else { m += b; M += a; }
    }
    return {ilo - M, ihi - m};
  }

  RatVec center_bar() const {
    RatVec c(d);
    for (int i = 0; i < d; ++i) c[i] = (lo[i] + hi[i]) / Rat(2);
    return c;
  }
  Rat center_i() const { return (ilo + ihi) / Rat(2); }

  bool contains_point(const RatVec& xbar, const Rat& xn) const {
    for (int i = 0; i < d; ++i)
      if (xbar[i] < lo[i] || xbar[i] > hi[i]) return false;
    Rat u = dot(xbar, eta) + xn;
    return u >= ilo && u <= ihi;
  }

  // extreme points: horizontal corners paired with both slab faces
  template <typename F>
  void for_each_vertex(F&& f) const {
    long long corners = 1ll << d;
    for (long long c = 0; c < corners; ++c) {
      RatVec xb(d);
      for (int i = 0; i < d; ++i) xb[i] = (c >> i) & 1 ? hi[i] : lo[i];
      Rat shear = dot(xb, eta);
      f(xb, ilo - shear);
      f(xb, ihi - shear);
    }
  }

  bool contains(const Pll& o) const {
    bool ok = true;
    o.for_each_vertex([&](const RatVec& xb, const Rat& xn) {
      if (ok && !contains_point(xb, xn)) ok = false;
    });
    return ok;
  }

  // closed-set intersection test, exact
  bool meets(const Pll& o) const {
    RatVec blo(d), bhi(d);
    for (int i = 0; i < d; ++i) {
      blo[i] = std::max(lo[i], o.lo[i], [](const Rat& a, const Rat& b) { return a < b; });
      bhi[i] = std::min(hi[i], o.hi[i], [](const Rat& a, const Rat& b) { return a < b; });
      if (bhi[i] < blo[i]) return false;
    }
    // sections overlap iff <x, o.eta - eta> lands in [o.ilo - ihi, o.ihi - ilo]
    Rat a = o.ilo - ihi, b = o.ihi - ilo;
    Rat m(0), M(0);
    for (int i = 0; i < d; ++i) {
      Rat w = o.eta[i] - eta[i];
      Rat p = w * blo[i], q = w * bhi[i];
      if (p < q) { m += p; M += q; } else { m += q; M += p; }
    }
    return !(M < a || b < m);
  }

  Pll dilate(const Rat& A) const {
    if (A < Rat(1)) throw std::invalid_argument("dilate: factor must be >= 1");
    Pll r = *this;
    for (int i = 0; i < d; ++i) {
      Rat c = (lo[i] + hi[i]) / Rat(2), h = (hi[i] - lo[i]) / Rat(2) * A;
      r.lo[i] = c - h;
      r.hi[i] = c + h;
    }
    Rat ci = (ilo + ihi) / Rat(2), hh = (ihi - ilo) / Rat(2) * A;
    r.ilo = ci - hh;
    r.ihi = ci + hh;
    return r;
  }

  // replace the vertical interval by its A-dilate only
  Pll dilate_vertical(const Rat& A) const {
    Pll r = *this;
    Rat ci = (ilo + ihi) / Rat(2), hh = (ihi - ilo) / Rat(2) * A;
    r.ilo = ci - hh;
    r.ihi = ci + hh;
    return r;
  }

  // congruent copy translated by integer steps of the own side lengths
  Pll translate_steps(const std::vector<long long>& kbar, long long ki) const {
    Pll r = *this;
    for (int i = 0; i < d; ++i) {
      Rat off = Rat(kbar[i]) * (hi[i] - lo[i]);
      r.lo[i] = lo[i] + off;
      r.hi[i] = hi[i] + off;
    }
    Rat offi = Rat(ki) * (ihi - ilo);
    r.ilo = ilo + offi;
    r.ihi = ihi + offi;
    return r;
  }

  bool congruent(const Pll& o) const {
    if (d != o.d || height() != o.height() || eta != o.eta) return false;
    for (int i = 0; i < d; ++i)
      if (hi[i] - lo[i] != o.hi[i] - o.lo[i]) return false;
    return true;
  }

  bool operator==(const Pll& o) const {
    return d == o.d && lo == o.lo && hi == o.hi && ilo == o.ilo &&
           ihi == o.ihi && eta == o.eta;
  }
};

inline Pll make_pll(const TriadicCube& L, const TriadicCube& I, const RatVec& eta) {
  Pll p;
  p.d = L.dim();
  p.lo.resize(p.d);
  p.hi.resize(p.d);
  for (int i = 0; i < p.d; ++i) {
    p.lo[i] = L.low(i);
    p.hi[i] = L.high(i);
  }
  p.ilo = I.low(0);
  p.ihi = I.high(0);
  p.eta = eta;
  return p;
}

// --- analytic intersection volume -------------------------------------------
//
// |R ∩ R'| over the common horizontal box reduces to the integral of the
// overlap length of the two vertical sections, a clamped-linear function of
// the single functional u = <x_bar, eta - eta'>. The pushforward of Lebesgue
// measure on a box under a linear functional is a trapezoid, so the integral
// is piecewise quadratic and evaluates in closed form (Simpson per piece).

namespace detail {

inline double trapezoid_density(double u, double a, double b, double c,
                                double e, double mass) {
  // knots a<=b<=c<=e, total integral = mass
  double span = 0.5 * ((e + c) - (a + b));
  if (span <= 0.0) return 0.0;  // degenerate: handled by caller
  double h = mass / span;
  if (u <= a || u >= e) return 0.0;
  if (u < b) return h * (u - a) / (b - a);
  if (u <= c) return h;
  return h * (e - u) / (e - c);
}

inline double overlap_len(double u, double lo1, double hi1, double lo2,
                          double hi2) {
  // overlap of [lo1,hi1] and [lo2+u, hi2+u]
  double t = std::min(hi1, hi2 + u) - std::max(lo1, lo2 + u);
  return t > 0.0 ? t : 0.0;
}

}  // namespace detail

// |a ∩ b| computed analytically (doubles); exact up to roundoff.
inline double volume_intersection(const Pll& a, const Pll& b) {
  int d = a.d;
  std::vector<double> blo(d), bhi(d);
  double area = 1.0;
  for (int i = 0; i < d; ++i) {
    blo[i] = std::max(a.lo[i].to_double(), b.lo[i].to_double());
    bhi[i] = std::min(a.hi[i].to_double(), b.hi[i].to_double());
    if (bhi[i] <= blo[i]) return 0.0;
    area *= bhi[i] - blo[i];
  }
  std::vector<double> w(d);
  bool wzero = true;
  for (int i = 0; i < d; ++i) {
    w[i] = a.eta[i].to_double() - b.eta[i].to_double();
    if (w[i] != 0.0) wzero = false;
  }
  double lo1 = a.ilo.to_double(), hi1 = a.ihi.to_double();
  double lo2 = b.ilo.to_double(), hi2 = b.ihi.to_double();
  // section overlap as a function of u = <x, w> (sections of b shifted by u)
  if (wzero) return area * detail::overlap_len(0.0, lo1, hi1, lo2, hi2);

  // knots of the pushforward density
  std::vector<double> uc;
  long long corners = 1ll << d;
  for (long long c = 0; c < corners; ++c) {
    double u = 0.0;
    for (int i = 0; i < d; ++i) u += w[i] * ((c >> i) & 1 ? bhi[i] : blo[i]);
    uc.push_back(u);
  }
  std::sort(uc.begin(), uc.end());
  double ka = uc.front(), ke = uc.back();
  double kb = ka, kc = ke;
  if (d == 2) { kb = uc[1]; kc = uc[2]; }
  // knots of the overlap function
  std::vector<double> cuts = {ka, kb, kc, ke, lo1 - lo2, lo1 - hi2,
                              hi1 - lo2, hi1 - hi2};
  std::sort(cuts.begin(), cuts.end());
  double total = 0.0;
  for (size_t s = 0; s + 1 < cuts.size(); ++s) {
    double u0 = std::max(cuts[s], ka), u1 = std::min(cuts[s + 1], ke);
    if (u1 <= u0) continue;
    auto f = [&](double u) {
      return detail::trapezoid_density(u, ka, kb, kc, ke, area) *
             detail::overlap_len(u, lo1, hi1, lo2, hi2);
    };
    // both factors are linear inside the piece; two interior Gauss nodes
    // integrate the quadratic product exactly and avoid the knot jumps
    double m = 0.5 * (u0 + u1), r = 0.5 * (u1 - u0) / std::sqrt(3.0);
    total += 0.5 * (u1 - u0) * (f(m - r) + f(m + r));
  }
  return total;
}

// Monte-Carlo fallback with a fixed seed path; used to cross-check the
// analytic volume in tests.
template <typename RngT>
double volume_intersection_mc(const Pll& a, const Pll& b, RngT& rng,
                              int samples) {
  int d = a.d;
  std::vector<double> lo(d), hi(d);
  for (int i = 0; i < d; ++i) {
    lo[i] = a.lo[i].to_double();
    hi[i] = a.hi[i].to_double();
  }
  double la = a.ilo.to_double(), ha = a.ihi.to_double();
  std::vector<double> eb(d), ea(d);
  for (int i = 0; i < d; ++i) {
    ea[i] = a.eta[i].to_double();
    eb[i] = b.eta[i].to_double();
  }
  int hits = 0;
  for (int s = 0; s < samples; ++s) {
    std::vector<double> x(d);
    for (int i = 0; i < d; ++i) x[i] = rng.uniform(lo[i], hi[i]);
    double xn = rng.uniform(la, ha);
    double shear = 0.0;
    for (int i = 0; i < d; ++i) shear += x[i] * ea[i];
    xn -= shear;  // uniform point of a
    bool in = true;
    for (int i = 0; i < d; ++i)
      if (x[i] < b.lo[i].to_double() || x[i] > b.hi[i].to_double()) in = false;
    if (in) {
      double u = xn;
      for (int i = 0; i < d; ++i) u += x[i] * eb[i];
      if (u < b.ilo.to_double() || u > b.ihi.to_double()) in = false;
    }
    if (in) ++hits;
  }
  return a.volume().to_double() * double(hits) / double(samples);
}

}  // namespace tfa
