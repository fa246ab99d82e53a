#pragma once

#include "blkit/linalg.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string_view>

namespace blkit {

struct QuadratureConfig {
  int order = 5;                         // Gauss-Legendre points per axis; paired with order - 2
  std::size_t max_evaluations = 2000000;  // per integral, tensor rule
  double rel_tol = 1e-8;
  int tensor_max_dim = 4;
  std::size_t samples = 1000000;  // quasi-random fallback
  int batches = 16;
  std::uint64_t seed = 20240917;
};

enum class QuadratureRule { TensorGaussLegendre, QuasiRandom };
std::string_view to_string(QuadratureRule rule);

struct QuadratureResult {
  double value = 0;
  double error = 0;  // a-posteriori estimate
  std::size_t evaluations = 0;
  int cells = 0;
  bool converged = false;
  QuadratureRule rule = QuadratureRule::TensorGaussLegendre;
};

/// Integral of exp(log_f) over the closed ball |x - center| <= radius.
/// Up to tensor_max_dim dimensions: adaptive tensor Gauss-Legendre on a cube
/// grid, with the innermost axis clipped to the ball's chord and cells split
/// where the two rules disagree most. Above that: shifted Sobol batches.
QuadratureResult integrate_ball(const std::function<double(const Vector&)>& log_f, const Vector& center,
                                double radius, const QuadratureConfig& config = {});

}  // namespace blkit
