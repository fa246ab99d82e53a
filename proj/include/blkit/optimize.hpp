#pragma once

#include "blkit/linalg.hpp"

#include <functional>

namespace blkit {

struct NelderMeadOptions {
  int max_evaluations = 4000;
  double f_tol = 1e-13;  // relative spread of simplex values
  double x_tol = 1e-10;  // simplex diameter
  double initial_step = 0.5;
};

struct NelderMeadResult {
  Vector x;
  double value = 0;
  int evaluations = 0;
  bool converged = false;
};

/// Derivative-free simplex minimisation with the standard coefficients
/// (reflection 1, expansion 2, contraction 1/2, shrink 1/2).
NelderMeadResult nelder_mead(const std::function<double(const Vector&)>& f, const Vector& x0,
                             const NelderMeadOptions& options = {});

}  // namespace blkit
