#pragma once

// shared generators for the gauge/selection/counting test suites; thin
// aliases over the library generators

#include "tfa/generators.hpp"

namespace tfa::testkit {

using tfa::gen::random_mask;

inline UniverseParams gauge_universe_params(int d) {
  return tfa::gen::desk_universe_params(d);
}

inline DirectionField random_direction_field(const TileUniverse& u,
                                             const TorusGrid& dgrid, int K,
                                             Rng& rng, double eps = 0.5) {
  return tfa::gen::quantized_direction_field(u, dgrid, K, rng, eps);
}

inline DiscreteField random_band_limited(const TorusGrid& g, double ann,
                                         Rng& rng) {
  return tfa::gen::band_limited_field(g, ann, rng);
}

using TestContext = tfa::gen::DeskSetup;

inline TestContext make_context(int d, int N, uint64_t seed, int K = 4,
                                double e_density = 0.35) {
  return tfa::gen::desk_setup(d, N, seed, K, e_density);
}

}  // namespace tfa::testkit
