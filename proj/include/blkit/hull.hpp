#pragma once

#include "blkit/linalg.hpp"

#include <cstddef>
#include <vector>

namespace blkit {

enum class LPStatus { Optimal, Infeasible, Unbounded };

struct LPResult {
  LPStatus status = LPStatus::Infeasible;
  Vector x;
  double value = 0.0;
};

/// maximise c.x subject to A x = b, x >= 0. Dense two-phase simplex with
/// Bland's rule; rows whose phase-one residual stays below feas_tol count as
/// satisfied.
LPResult solve_lp(const Matrix& a, const Vector& b, const Vector& c, double feas_tol = 1e-11);

struct MinNormPoint {
  Vector point;    // nearest point of the hull to the origin
  Vector weights;  // convex weights over the input columns
  double distance = 0.0;
};

/// Wolfe's algorithm on the columns of `points`.
MinNormPoint min_norm_point(const Matrix& points);

/// Distance from the origin to the relative boundary of conv(points), measured
/// inside its affine hull. Assumes the origin lies in the relative interior.
/// Returns +inf when the hull is the single point 0.
double relative_inradius(const Matrix& points, double rel_tol = 1e-9);

/// Distance from the origin to the flat t0 + span(t - t0, u) spanned by the
/// affine columns `affine` and the linear columns `linear`.
double flat_distance(const Matrix& affine, const Matrix& linear);

}  // namespace blkit
