#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "tfa/parallelepiped.hpp"
#include "tfa/rng.hpp"
#include "tfa/tile.hpp"
#include "tfa/universe.hpp"

namespace tfa {

enum class GeomLemma { L22, L23i, L23ii, L24i, L24ii };

struct GeomCheckResult {
  bool vacuous = false;  // hypotheses of the variant do not hold
  bool holds = true;
  double lhs = 0.0, rhs = 0.0;  // populated for measure variants
};

namespace detail {
// rational upper bound for sqrt(d), slack < 1e-6
inline Rat sqrt_dim_upper(int d) {
  if (d == 1) return Rat(1);
  if (d == 2) return Rat(14142136, 10000000);
  return Rat(17320509, 10000000);
}
}  // namespace detail

// Decidable forms of the containment/measure lemmas. `A` is the dilation
// factor for the same-annulus variant and the center-distance parameter C for
// the mixed-annulus measure variants.
inline GeomCheckResult check_geom_lemma(const Tile& t, const Tile& tp,
                                        const Rat& A, GeomLemma variant) {
  GeomCheckResult res;
  const GeometryConstants& gc = t.grids->gc;
  Rat K = gc.K();
  switch (variant) {
    case GeomLemma::L22: {
      if (!t.same_annulus(tp) || !tp.Q.contains(t.Q) ||
          A < Rat(1)) {  // ecc(t') inside ecc(t) means Q_t contains Q_t'
        res.vacuous = true;
        return res;
      }
      // hypotheses: ecc(t') ⊆ ecc(t) and the A-dilates meet
      if (!t.Q.contains(tp.Q)) { res.vacuous = true; return res; }
      Pll a = t.space().dilate(A);
      Pll b = tp.space().dilate(A);
      if (!a.meets(b)) { res.vacuous = true; return res; }
      res.holds = b.dilate(K).contains(a);
      return res;
    }
    case GeomLemma::L23i: {
      if (!(t.L == tp.L) || t.ann_exp() > tp.ann_exp() || !t.Q.contains(tp.Q)) {
        res.vacuous = true;
        return res;
      }
      Pll a = t.space(), b = tp.space();
      if (!a.meets(b)) { res.vacuous = true; return res; }
      res.holds = a.dilate_vertical(K).contains(b);
      return res;
    }
    case GeomLemma::L23ii: {
      if (!(t.L == tp.L) || t.ann_exp() > tp.ann_exp() || !t.Q.contains(tp.Q)) {
        res.vacuous = true;
        return res;
      }
      if (!(K * tp.space().height() <= t.space().height())) {
        res.vacuous = true;
        return res;
      }
      Pll a = t.space(), b = tp.space();
      if (!a.meets(b.dilate(K))) { res.vacuous = true; return res; }
      res.holds = a.dilate_vertical(K).contains(b.dilate_vertical(K));
      return res;
    }
    case GeomLemma::L24i: {
      if (!(t.L == tp.L) || A <= Rat(0)) { res.vacuous = true; return res; }
      Rat dist2 = norm2_sq(t.Q.center_vec() - tp.Q.center_vec());
      if (dist2 > A * A) { res.vacuous = true; return res; }
      Pll a = t.space(), b = tp.space();
      if (!a.meets(b)) { res.vacuous = true; return res; }
      Rat hI_t = a.height(), hI_p = b.height();
      Rat factor = Rat(2) * (Rat(1) + hI_t / hI_p +
                             detail::sqrt_dim_upper(t.d()) * a.scl() * A / hI_p);
      res.holds = b.dilate_vertical(factor).contains(a);
      return res;
    }
    case GeomLemma::L24ii: {
      if (!(t.L == tp.L) || A <= Rat(0)) { res.vacuous = true; return res; }
      Rat dist2 = norm2_sq(t.Q.center_vec() - tp.Q.center_vec());
      if (dist2 < A * A) { res.vacuous = true; return res; }
      Pll a = t.space(), b = tp.space();
      res.lhs = volume_intersection(a, b);
      Rat bound = a.height() * b.height();
      for (int i = 0; i + 1 < t.d(); ++i) bound *= a.scl();
      res.rhs = (bound / A).to_double();
      res.holds = res.lhs <= res.rhs * (1.0 + 1e-9);
      return res;
    }
  }
  res.vacuous = true;
  return res;
}

// Randomized adversarial search for the smallest 3^{k} satisfying the
// same-annulus containment over sampled admissible pairs; returns the found
// exponent plus a safety margin of one.
inline int calibrate_kn(const UniverseParams& base, uint64_t seed, int trials) {
  UniverseParams p = base;
  p.k_n = 1;
  TileUniverse u(p);
  Rng rng(seed);
  int worst = 1;
  const Rat dilations[3] = {Rat(1), Rat(3), Rat(9)};
  int found = 0;
  while (found < trials) {
    auto [t, tp] = u.random_nested_pair(rng);
    // containment statement wants ecc(t') ⊆ ecc(t): generator returns Q_tp ⊆ Q_t
    for (const Rat& A : dilations) {
      Pll a = t.space().dilate(A);
      Pll b = tp.space().dilate(A);
      if (!a.meets(b)) continue;
      ++found;
      int k = 0;
      while (k <= 12 && !b.dilate(pow3(k)).contains(a)) ++k;
      worst = std::max(worst, k);
    }
  }
  return worst + 1;
}

}  // namespace tfa
