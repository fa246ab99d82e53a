#pragma once

#include "blkit/config.hpp"
#include "blkit/datum.hpp"
#include "blkit/lieb.hpp"
#include "blkit/linalg.hpp"

#include <array>
#include <limits>
#include <vector>

namespace blkit {

/// q_j = infinity is stored as the IEEE infinity.
inline constexpr double kInfiniteExponent = std::numeric_limits<double>::infinity();

/// A subspace H of R^{n_1} x ... x R^{n_m} with one Lebesgue exponent per factor.
struct SubspaceDatum {
  std::vector<int> factors;  // n_j
  Subspace H;
  std::vector<double> q;

  int ambient() const;
  int m() const { return static_cast<int>(factors.size()); }
};

/// Orthonormalises the basis and checks factor sizes and q_j >= 1.
SubspaceDatum make_subspace_datum(std::vector<int> factors, const Matrix& basis, std::vector<double> q,
                                  const Tolerances& tol = {});

/// Conjugate exponent r' with 1/r + 1/r' = 1.
double dual_exponent(double r);
/// A_r = (r^{1/r} / r'^{1/r'})^{1/2}; A_1 = A_inf = 1.
double beckner_constant(double r);
/// prod_j A_{q_j}^{n_j}
double beckner_product(const std::vector<int>& factors, const std::vector<double>& q);

Subspace dual_subspace(const Subspace& h);
/// (H^perp, q')
SubspaceDatum dual_datum(const SubspaceDatum& sd);

struct ParametrizedDatum {
  BLDatum datum;              // L_j = Pi_j P, p_j = 1 / q_j
  Matrix parametrization;     // P, an isometry R^{dim H} -> H
  double measure_factor = 1;  // always 1: P carries Lebesgue measure on H exactly
};

ParametrizedDatum subspace_datum(const SubspaceDatum& sd, const Tolerances& tol = {});

struct DualityCheck {
  double lhs = 0;            // BL(H, q)
  double dual_constant = 0;  // BL(H^perp, q')
  double rhs = 0;            // B_q BL(H^perp, q')
  double B_q = 1;
  double relative_gap = 0;
  BLReport primal;
  BLReport dual;

  bool passes(double dual_tol) const;
};

DualityCheck duality_check(const SubspaceDatum& sd, const LiebConfig& config = {});

/// (A_{q_1} A_{q_2} A_{q_3})^dim, requiring sum 1/q_j = 2.
double young_constant(const std::array<double, 3>& q, int dim);

struct ConvolutionDatum {
  Subspace tangent;  // kernel of (y_1..y_m) -> sum_j dS_j y_j
  Subspace normal;   // {(dS_1^* x, ..., dS_m^* x)}
  BLDatum adjoint;   // L_j = dS_j^*
  BLReport report;   // finiteness and constant of the adjoint datum
};

ConvolutionDatum convolution_datum(const std::vector<Matrix>& differentials, const std::vector<double>& p,
                                   const LiebConfig& config = {});

}  // namespace blkit
