#include "doctest.h"
#include "fixtures.hpp"

#include "blkit/error.hpp"
#include "blkit/gaussian.hpp"

#include <cmath>

using namespace blkit;
using fixtures::rows;

namespace {

GaussianTuple scalars(std::initializer_list<double> values) {
  std::vector<Matrix> blocks;
  for (double v : values) blocks.push_back(Matrix::Constant(1, 1, v));
  return make_gaussian_tuple(std::move(blocks));
}

// Trapezoid rule for the numerator integral of the gaussian ratio on a box
// wide enough that the tails are far below double precision.
double quadrature_blg(const BLDatum& datum, const GaussianTuple& a, int points) {
  Matrix form = Matrix::Zero(datum.n, datum.n);
  for (int j = 0; j < datum.m(); ++j) {
    form += datum.p[j] * datum.maps[j].transpose() * a.blocks[j] * datum.maps[j];
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(form);
  // Integrate in the eigenbasis, where the box aligns with the axes.
  const Vector lambda = eig.eigenvalues();
  double integral = 1.0;
  for (int i = 0; i < datum.n; ++i) {
    const double half = 9.0 / std::sqrt(2.0 * M_PI * lambda(i));
    const double h = 2.0 * half / (points - 1);
    double sum = 0.0;
    for (int k = 0; k < points; ++k) {
      const double x = -half + h * k;
      sum += (k == 0 || k == points - 1 ? 0.5 : 1.0) * std::exp(-M_PI * lambda(i) * x * x);
    }
    integral *= sum * h;
  }
  double numerator = 1.0;
  for (int j = 0; j < datum.m(); ++j) {
    Eigen::SelfAdjointEigenSolver<Matrix> block(a.blocks[j]);
    numerator *= std::pow(block.eigenvalues().prod(), datum.p[j] / 2.0);
  }
  return numerator * integral;
}

// Full tensor quadrature in the original coordinates (no diagonalisation).
double tensor_quadrature_blg(const BLDatum& datum, const GaussianTuple& a, int points) {
  Matrix form = Matrix::Zero(datum.n, datum.n);
  for (int j = 0; j < datum.m(); ++j) {
    form += datum.p[j] * datum.maps[j].transpose() * a.blocks[j] * datum.maps[j];
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(form);
  const double half = 9.0 / std::sqrt(2.0 * M_PI * eig.eigenvalues().minCoeff());
  const double h = 2.0 * half / (points - 1);
  const int n = datum.n;
  long total = 1;
  for (int i = 0; i < n; ++i) total *= points;
  double sum = 0.0;
  Vector x(n);
  for (long idx = 0; idx < total; ++idx) {
    long rest = idx;
    double weight = 1.0;
    for (int i = 0; i < n; ++i) {
      const int k = static_cast<int>(rest % points);
      rest /= points;
      x(i) = -half + h * k;
      if (k == 0 || k == points - 1) weight *= 0.5;
    }
    double exponent = 0.0;
    for (int j = 0; j < datum.m(); ++j) {
      const Vector z = datum.maps[j] * x;
      exponent += datum.p[j] * z.dot(a.blocks[j] * z);
    }
    sum += weight * std::exp(-M_PI * exponent);
  }
  double numerator = 1.0;
  for (int j = 0; j < datum.m(); ++j) {
    numerator *= std::pow(a.blocks[j].determinant(), datum.p[j] / 2.0);
  }
  return numerator * sum * std::pow(h, n);
}

}  // namespace

TEST_CASE("closed form values") {
  CHECK(blg(fixtures::loomis_whitney(), identity_tuple(fixtures::loomis_whitney())) ==
        doctest::Approx(1.0).epsilon(1e-14));
  CHECK(blg(fixtures::holder3(), scalars({1, 1, 1})) == doctest::Approx(1.0).epsilon(1e-14));
  const double a1 = 2.0, a2 = 5.0, a3 = 0.3;
  const double expected = std::pow(a1 * a2 * a3, 1.0 / 6) / std::sqrt((a1 + a2 + a3) / 3);
  CHECK(blg(fixtures::holder3(), scalars({a1, a2, a3})) == doctest::Approx(expected).epsilon(1e-13));
  CHECK(blg(fixtures::young1(), scalars({1, 1, 1})) ==
        doctest::Approx(std::pow(21.0 / 16.0, -0.5)).epsilon(1e-14));
}

TEST_CASE("gaussian tuple validation and eccentricity") {
  const GaussianTuple t = make_gaussian_tuple({rows({{4, 0}, {0, 0.5}}), rows({{0.1}})});
  CHECK(t.eccentricity == doctest::Approx(10.0));
  CHECK(t.log_eccentricity == doctest::Approx(std::log(10.0)));
  CHECK_THROWS_AS(make_gaussian_tuple({rows({{1, 0.5}, {0, 1}})}), Error);
  try {
    make_gaussian_tuple({rows({{1, 0}, {0, -1}})});
    FAIL("expected NotPositiveDefinite");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotPositiveDefinite);
  }
  try {
    make_gaussian_tuple({rows({{1, 0.5}, {0, 1}})});
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotSymmetric);
  }
}

TEST_CASE("singular denominator and shape errors") {
  const BLDatum d = validate({2, {rows({{1, 0}}), rows({{1, 0}})}, {1.0, 1.0}});
  try {
    blg(d, scalars({1, 2}));
    FAIL("expected SingularDenominator");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SingularDenominator);
  }
  CHECK_THROWS_AS(blg(fixtures::young1(), scalars({1, 1})), Error);
}

TEST_CASE("scale invariance") {
  const BLDatum lw = fixtures::loomis_whitney();
  CHECK(scale_invariance_check(lw, identity_tuple(lw), 7.0) < 1e-15);
  std::mt19937_64 rng(11);
  const BLDatum young = fixtures::young1();
  for (int trial = 0; trial < 200; ++trial) {
    CHECK(scale_invariance_check(young, fixtures::random_tuple(rng, young), 0.01) <= 1e-9);
    CHECK(scale_invariance_check(lw, fixtures::random_tuple(rng, lw), 3.7) <= 1e-9);
  }
  const BLDatum broken = fixtures::young1({0.5, 0.5, 0.5});
  CHECK(scale_invariance_check(broken, scalars({1, 1, 1}), 2.0) ==
        doctest::Approx(std::abs(std::pow(2.0, -0.25) - 1.0)).epsilon(1e-12));
}

TEST_CASE("conjugation invariance") {
  std::mt19937_64 rng(5);
  const BLDatum lw = fixtures::loomis_whitney();
  for (int trial = 0; trial < 100; ++trial) {
    const GaussianTuple a = fixtures::random_tuple(rng, lw);
    BLDatum moved = lw;
    std::vector<Matrix> blocks;
    for (int j = 0; j < lw.m(); ++j) {
      const Matrix q = fixtures::random_orthogonal(rng, 2);
      moved.maps[j] = q * lw.maps[j];
      blocks.push_back(q * a.blocks[j] * q.transpose());
    }
    const double base = blg(lw, a);
    const double other = blg(moved, make_gaussian_tuple(std::move(blocks), Tolerances{.sym_tol = 1e-8}));
    CHECK(std::abs(other - base) / base <= 1e-9);
  }
}

TEST_CASE("closed form agrees with quadrature") {
  std::mt19937_64 rng(2024);
  const std::vector<BLDatum> data = {fixtures::loomis_whitney(), fixtures::young1(), fixtures::holder3()};
  for (const auto& datum : data) {
    for (int trial = 0; trial < 5; ++trial) {
      const GaussianTuple a = fixtures::random_tuple(rng, datum);
      const double exact = blg(datum, a);
      CHECK(std::abs(quadrature_blg(datum, a, 200) - exact) / exact <= 1e-4);
      const int points = datum.n == 3 ? 70 : 400;
      CHECK(std::abs(tensor_quadrature_blg(datum, a, points) - exact) / exact <= 1e-4);
    }
  }
}

TEST_CASE("Ball inequality on centred gaussians") {
  const BLDatum lw = fixtures::loomis_whitney();
  const BallCheck iso = ball_inequality_check(lw, identity_tuple(lw), identity_tuple(lw));
  CHECK(iso.lhs <= iso.rhs * (1 + 1e-9));
  CHECK(iso.lhs == doctest::Approx(iso.rhs));

  const BallCheck holder = ball_inequality_check(fixtures::holder3(), scalars({1, 1, 1}), scalars({2, 2, 2}));
  CHECK(holder.lhs <= holder.rhs * (1 + 1e-9));

  std::mt19937_64 rng(99);
  const BLDatum young = fixtures::young1();
  int violations = 0;
  for (int seed = 0; seed < 1000; ++seed) {
    const BallCheck c = ball_inequality_check(young, fixtures::random_tuple(rng, young),
                                              fixtures::random_tuple(rng, young));
    if (!(c.lhs <= c.rhs + 1e-9 * c.rhs)) ++violations;
  }
  CHECK(violations == 0);
}
