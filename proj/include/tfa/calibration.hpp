#pragma once

// Pinned constants produced by `tfa calibrate`. The containment exponent k_n
// comes from randomized adversarial search (worst observed exponent plus a
// margin of one); the ceilings are the largest measured constants over the
// calibration seeds, rounded up generously. The acceptance suite re-measures
// against these values and must see zero violations.

namespace tfa::calib {

// containment constant K = 3^{k_n}, per ambient dimension n = d+1;
// independent of kappa over the calibrated range (kappa in {1,2})
inline int pinned_kn(int /*d*/) { return 4; }

// single-tree bound: Lambda(T) <= C * size(T) * densesup(T) * |R_T|
// (worst measured 1.23)
inline constexpr double tree_bound_ceiling = 4.0;

// combined decomposition, tree-top volume sums:
//   sum |R| <= C * min(|E| / densesup, ||f||_2^2 / size^2)
// (worst measured 0.11)
inline constexpr double combined_sum_ceiling = 0.5;

// iterative decomposition, per-level three-way bound constants
// (worst measured 0.066 / 0.034 / 0.011)
inline constexpr double level_density_ceiling = 0.5;
inline constexpr double level_size_ceiling = 0.25;
inline constexpr double level_maximal_ceiling = 0.1;

// counting-machinery ratio: sum |R_t| <= C * |F| / (mu * lambda^{1+eps})
// (worst measured 0.0012)
inline constexpr double maxkey_ceiling = 0.02;

// covering bounds for the exceptional-set constructions
// (worst measured 0.00056 / 0.0020)
inline constexpr double covering_G_ceiling = 0.01;   // mu^-1 lambda^-2 |H|
inline constexpr double covering_H_ceiling = 0.05;   // mu^-q |G|

// density-top volume bound: sum |R_t| <= C |E| / densesup
// (worst measured 0.039)
inline constexpr double density_tops_ceiling = 0.25;

// orthogonality: sum_T coeff^2 <= C int |f|^2 chi^{2K}
// (worst measured 0.36)
inline constexpr double ortho_ceiling = 2.0;

// size of the surviving trees under the improved-size construction
// (worst measured 0.0006)
inline constexpr double size_cap_ceiling = 0.01;

}  // namespace tfa::calib
