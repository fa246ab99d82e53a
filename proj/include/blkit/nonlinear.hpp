#pragma once

#include "blkit/config.hpp"
#include "blkit/datum.hpp"
#include "blkit/gaussian.hpp"
#include "blkit/lieb.hpp"
#include "blkit/poly.hpp"
#include "blkit/quadrature.hpp"

#include <optional>
#include <vector>

namespace blkit {

/// f_j(z) = sigma^{-n_j} det(A_j)^{1/2} exp(-pi <A_j (z - c_j), z - c_j> / sigma^2),
/// each of unit mass.
struct GaussianInput {
  std::vector<Matrix> blocks;
  std::vector<Vector> centers;
  double sigma = 1;
  std::vector<double> log_det;  // log det A_j

  int m() const { return static_cast<int>(blocks.size()); }
};

GaussianInput make_gaussian_input(const GaussianTuple& tuple, double sigma, std::vector<Vector> centers = {});
double log_input_density(const GaussianInput& input, int j, const Vector& z);
/// Closed-form integral of f_j over R^{n_j}.
double input_mass(const GaussianInput& input, int j);

/// Scale sigma = delta^{1 + gamma} on a given tuple, centred at the origin
/// unless centres are given.
GaussianInput scaled_gaussian_inputs(const GaussianTuple& tuple, double delta, double gamma,
                                     std::vector<Vector> centers = {});
/// Same, built on a near-extremiser of the datum at accuracy delta_acc.
GaussianInput scaled_gaussian_inputs(const BLDatum& datum, double delta, double gamma, double delta_acc = 0.01,
                                     const LiebConfig& config = {});

struct NonlinearProblem {
  std::vector<PolyMap> maps;
  std::vector<double> p;
  Vector x0;
  double epsilon = 0.05;
  std::vector<double> delta_schedule;
  QuadratureConfig quadrature;
  double gamma = 0.1;
  double certificate_delta = 0.01;  // accuracy of the near-extremiser input
  int random_inputs = 3;
  std::uint64_t seed = 20240917;
  double noise_tol = 1e-3;
  LiebConfig lieb;
};

/// Shapes, exponent range, submersion at x0, strictly decreasing positive schedule.
void validate(const NonlinearProblem& problem, const Tolerances& tol = {});
/// (dB_j(x0), p)
BLDatum linearization(const NonlinearProblem& problem, const Tolerances& tol = {});

struct RatioResult {
  double value = 0;
  double error = 0;
  double numerator = 0;
  double denominator = 1;
  QuadratureResult quadrature;
};

/// int_{|x - x0| <= delta} prod f_j^{p_j}(B_j(x)) dx / prod (int f_j)^{p_j}
RatioResult nonlinear_ratio(const NonlinearProblem& problem, double delta, const GaussianInput& input);

struct InputRow {
  double ratio = 0;
  double error = 0;
  double gaussian_value = 0;  // BL_g of the linearised datum on this input
};

struct ScheduleRow {
  double delta = 0;
  std::vector<InputRow> inputs;
  double max_ratio = 0;
  double max_error = 0;
  double gap = 0;  // |max_ratio - linear reference|
  bool bound_holds = false;
};

struct VerificationReport {
  double constant = 0;  // BL(dB(x0), p)
  double bound = 0;     // (1 + epsilon) constant
  double linear_reference = 0;  // max over the suite of BL_g at the linearisation
  BLReport linear;
  std::vector<ScheduleRow> rows;
  std::optional<double> threshold;  // largest delta below which the bound holds throughout
  bool monotone = false;
  bool pass = false;
};

VerificationReport verify_theorem1(const NonlinearProblem& problem);

}  // namespace blkit
