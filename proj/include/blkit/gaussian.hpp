#pragma once

#include "blkit/config.hpp"
#include "blkit/datum.hpp"
#include "blkit/linalg.hpp"

#include <vector>

namespace blkit {

/// Centred gaussian inputs exp(-pi <A_j x, x>), one SPD block per map.
/// Normalising constants cancel in the Brascamp-Lieb ratio and are not kept.
struct GaussianTuple {
  std::vector<Matrix> blocks;
  /// max_j max(||A_j||, ||A_j^{-1}||)
  double eccentricity = 1.0;
  double log_eccentricity = 0.0;

  int m() const { return static_cast<int>(blocks.size()); }
};

/// Symmetrises nothing: rejects blocks whose symmetry defect or smallest
/// eigenvalue fail the tolerances, then records the eccentricity.
GaussianTuple make_gaussian_tuple(std::vector<Matrix> blocks, const Tolerances& tol = {});
GaussianTuple identity_tuple(const BLDatum& datum);
GaussianTuple scaled_tuple(const GaussianTuple& a, double lambda);

/// sum_j p_j L_j^* A_j L_j
Matrix gaussian_quadratic_form(const BLDatum& datum, const GaussianTuple& a);

/// log of prod_j det(A_j)^{p_j/2} / det(sum_j p_j L_j^* A_j L_j)^{1/2}.
double log_blg(const BLDatum& datum, const GaussianTuple& a, const Tolerances& tol = {});
double blg(const BLDatum& datum, const GaussianTuple& a, const Tolerances& tol = {});

/// |blg(lambda A) - blg(A)| / blg(A)
double scale_invariance_check(const BLDatum& datum, const GaussianTuple& a, double lambda,
                              const Tolerances& tol = {});

struct BallCheck {
  double lhs = 0;  // BL(f) BL(g)
  double rhs = 0;  // BL(h^0) BL(f*g)
};

/// Ball's inequality on centred gaussians, where the pointwise product has
/// blocks A_j + B_j and the convolution has blocks (A_j^{-1} + B_j^{-1})^{-1}.
BallCheck ball_inequality_check(const BLDatum& datum, const GaussianTuple& a,
                                const GaussianTuple& b, const Tolerances& tol = {});

}  // namespace blkit
