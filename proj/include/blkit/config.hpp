#pragma once

#include <cstddef>
#include <cstdint>

namespace blkit {

/// Numerical thresholds shared by every module. Linear-algebra thresholds are
/// relative to the largest singular value (or eigenvalue) in play.
struct Tolerances {
  double rank_tol = 1e-9;
  double proj_tol = 1e-9;
  double scaling_tol = 1e-9;
  double dedup_tol = 1e-9;
  double sym_tol = 1e-10;
  double det_tol = 1e-10;
  double sep_tol = 1e-9;
  double distinct_tol = 1e-12;
  double grad_tol = 1e-12;
  int max_newton_iters = 200;
  std::size_t subset_budget = 14;
};

/// Settings for the rotation search behind the constant computation.
struct LiebConfig {
  Tolerances tol;
  int restarts = 8;
  std::uint64_t seed = 20240917;
  int threads = 1;
  std::size_t expansion_budget = 1000000;
  int lattice_depth = 2;
  int max_evaluations = 4000;
  double pos_tol = 1e-12;
  double opt_tol = 1e-6;
  double agreement_tol = 1e-4;
};

}  // namespace blkit
