#pragma once

#include "blkit/datum.hpp"
#include "blkit/duality.hpp"
#include "blkit/expsum.hpp"
#include "blkit/gaussian.hpp"
#include "blkit/linalg.hpp"
#include "blkit/nonlinear.hpp"
#include "blkit/poly.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

namespace fixtures {

using blkit::BLDatum;
using blkit::Matrix;
using blkit::Vector;

inline Matrix rows(std::initializer_list<std::initializer_list<double>> init) {
  const int r = static_cast<int>(init.size());
  const int c = static_cast<int>(init.begin()->size());
  Matrix m(r, c);
  int i = 0;
  for (const auto& row : init) {
    int j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

inline Vector vec(std::initializer_list<double> init) {
  Vector v(static_cast<int>(init.size()));
  int i = 0;
  for (double x : init) v(i++) = x;
  return v;
}

inline BLDatum loomis_whitney() {
  return blkit::validate({3,
                          {rows({{0, 1, 0}, {0, 0, 1}}), rows({{1, 0, 0}, {0, 0, 1}}),
                           rows({{1, 0, 0}, {0, 1, 0}})},
                          {0.5, 0.5, 0.5}});
}

inline BLDatum holder3() {
  return blkit::validate({1, {rows({{1}}), rows({{1}}), rows({{1}})}, {1.0 / 3, 1.0 / 3, 1.0 / 3}});
}

/// (x, y) -> x, y, x + y with p = (3/4, 3/4, 1/2).
inline BLDatum young1(std::vector<double> p = {0.75, 0.75, 0.5}) {
  return blkit::validate({2, {rows({{1, 0}}), rows({{0, 1}}), rows({{1, 1}})}, std::move(p)});
}

/// Four exponents (1,0), (-1,0), (1,-1), (0,1) with coefficients (a, 1, 1, b).
inline blkit::ExpSumInstance worked_example(double a, double b) {
  return blkit::make_instance(2, {vec({1, 0}), vec({-1, 0}), vec({1, -1}), vec({0, 1})}, {a, 1, 1, b});
}

inline Matrix random_spd(std::mt19937_64& rng, int k, double spread = 1.0) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix g(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) g(i, j) = normal(rng);
  Matrix a = spread * g * g.transpose() + 0.1 * Matrix::Identity(k, k);
  return 0.5 * (a + a.transpose());
}

inline blkit::GaussianTuple random_tuple(std::mt19937_64& rng, const BLDatum& datum) {
  std::vector<Matrix> blocks;
  for (int j = 0; j < datum.m(); ++j) blocks.push_back(random_spd(rng, datum.out_dim(j)));
  return blkit::make_gaussian_tuple(std::move(blocks));
}

inline Matrix random_orthogonal(std::mt19937_64& rng, int k) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix g(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) g(i, j) = normal(rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  if (q.determinant() < 0) q.col(0) *= -1;
  return q;
}

/// Smallest root above 1 of t^4 - t = c, by bisection.
inline double quartic_root(double c) {
  double lo = 1.0;
  double hi = 2.0 + c;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (mid * mid * mid * mid - mid - c > 0 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

/// Closed-form value of the worked example at a = b = 1.
inline double worked_example_g11() {
  const double tau = quartic_root(1.0);
  return 1.0 / (tau * tau) + tau * tau + 2.0 / tau;
}

/// Loomis-Whitney maps plus quadratic terms of size `c`.
inline blkit::NonlinearProblem perturbed_loomis_whitney(double c) {
  blkit::NonlinearProblem problem;
  problem.maps = {blkit::make_poly_map(3, {{{{0, 1, 0}, 1}, {{1, 0, 1}, c}}, {{{0, 0, 1}, 1}}}),
                  blkit::make_poly_map(3, {{{{1, 0, 0}, 1}}, {{{0, 0, 1}, 1}, {{0, 2, 0}, c}}}),
                  blkit::make_poly_map(3, {{{{1, 0, 0}, 1}, {{0, 1, 1}, c}}, {{{0, 1, 0}, 1}}})};
  problem.p = {0.5, 0.5, 0.5};
  problem.x0 = Vector::Zero(3);
  problem.delta_schedule = {0.2, 0.1, 0.05, 0.025};
  return problem;
}

/// (x, y) -> x, y, x + y + c x y with p = (3/4, 3/4, 1/2).
inline blkit::NonlinearProblem perturbed_young(double c) {
  blkit::NonlinearProblem problem;
  problem.maps = {blkit::make_poly_map(2, {{{{1, 0}, 1}}}), blkit::make_poly_map(2, {{{{0, 1}, 1}}}),
                  blkit::make_poly_map(2, {{{{1, 0}, 1}, {{0, 1}, 1}, {{1, 1}, c}}})};
  problem.p = {0.75, 0.75, 0.5};
  problem.x0 = Vector::Zero(2);
  problem.delta_schedule = {0.2, 0.1, 0.05, 0.025};
  return problem;
}

/// The same datum as a nonlinear problem with degree-1 maps.
inline blkit::NonlinearProblem linear_problem(const BLDatum& datum) {
  blkit::NonlinearProblem problem;
  for (const auto& l : datum.maps) problem.maps.push_back(blkit::linear_poly_map(l));
  problem.p = datum.p;
  problem.x0 = Vector::Zero(datum.n);
  problem.delta_schedule = {0.2, 0.1, 0.05, 0.025};
  return problem;
}

/// n <= 4, m <= 4 and sum n_j <= 8, gaussian entries, p_j in [0.05, 1).
inline BLDatum random_datum(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> dim(1, 4);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unit(0.05, 1.0);
  while (true) {
    const int n = dim(rng);
    BLDatum d;
    d.n = n;
    int total = 0;
    const int m = std::uniform_int_distribution<int>(1, 4)(rng);
    for (int j = 0; j < m; ++j) {
      const int nj = std::uniform_int_distribution<int>(1, n)(rng);
      Matrix map(nj, n);
      for (int a = 0; a < nj; ++a)
        for (int b = 0; b < n; ++b) map(a, b) = normal(rng);
      d.maps.push_back(map);
      d.p.push_back(unit(rng));
      total += nj;
    }
    if (total < n || total > 8) continue;
    return blkit::validate(d);
  }
}

inline // Generic subspace of a product of lines and planes with p scaled onto the
// scaling hyperplane sum n_j p_j = dim H.
blkit::SubspaceDatum random_subspace_datum(std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unit(0.2, 1.0);
  while (true) {
    const int m = std::uniform_int_distribution<int>(3, 4)(rng);
    std::vector<int> factors;
    int ambient = 0;
    for (int j = 0; j < m; ++j) {
      factors.push_back(std::uniform_int_distribution<int>(1, 4)(rng) == 1 ? 2 : 1);
      ambient += factors.back();
    }
    const int k = std::uniform_int_distribution<int>(1, ambient - 1)(rng);
    int widest = *std::max_element(factors.begin(), factors.end());
    if (k < widest || ambient - k < widest) continue;
    Matrix basis(ambient, k);
    for (int i = 0; i < ambient; ++i)
      for (int c = 0; c < k; ++c) basis(i, c) = normal(rng);
    std::vector<double> w(m);
    double weighted = 0;
    for (int j = 0; j < m; ++j) {
      w[j] = unit(rng);
      weighted += factors[j] * w[j];
    }
    std::vector<double> q(m);
    bool ok = true;
    for (int j = 0; j < m; ++j) {
      const double p = w[j] * k / weighted;
      if (p < 0.05 || p > 0.95) ok = false;
      q[j] = 1 / p;
    }
    if (ok) return blkit::make_subspace_datum(factors, basis, q);
  }
}

}  // namespace fixtures
