#include "doctest.h"
#include "fixtures.hpp"

#include "blkit/duality.hpp"
#include "blkit/error.hpp"

#include <cmath>

using namespace blkit;
using fixtures::rows;

namespace {

const double kSqrt3 = std::sqrt(3.0);
const double kYoung = std::sqrt(std::pow(4.0 / 3, 0.75) / std::pow(4.0, 0.25)) *
                      std::sqrt(std::pow(4.0 / 3, 0.75) / std::pow(4.0, 0.25));

SubspaceDatum young_subspace() {
  return make_subspace_datum({1, 1, 1}, rows({{1, 0}, {0, 1}, {1, 1}}), {4.0 / 3, 4.0 / 3, 2.0});
}


}  // namespace

TEST_CASE("Beckner constants") {
  CHECK(beckner_constant(2.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(beckner_constant(1.0) == 1.0);
  CHECK(beckner_constant(kInfiniteExponent) == 1.0);
  CHECK(beckner_constant(4.0 / 3) == doctest::Approx(0.936688).epsilon(1e-6));
  CHECK(beckner_constant(4.0 / 3) * beckner_constant(4.0 / 3) == doctest::Approx(0.877383).epsilon(1e-6));
  // Continuity at the endpoints.
  CHECK(std::abs(beckner_constant(1 + 1e-9) - 1.0) < 1e-6);
  CHECK(std::abs(beckner_constant(1e9) - 1.0) < 1e-6);
  CHECK(dual_exponent(1.0) == kInfiniteExponent);
  CHECK(dual_exponent(kInfiniteExponent) == 1.0);
  CHECK(dual_exponent(3.0) == doctest::Approx(1.5));
}

TEST_CASE("B_q B_q' = 1") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> inv(0.0, 1.0);
  double worst = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int m = std::uniform_int_distribution<int>(1, 5)(rng);
    std::vector<int> factors;
    std::vector<double> q, qd;
    for (int j = 0; j < m; ++j) {
      factors.push_back(std::uniform_int_distribution<int>(1, 3)(rng));
      const double p = inv(rng);
      q.push_back(p == 0 ? kInfiniteExponent : 1 / p);
      qd.push_back(dual_exponent(q.back()));
    }
    worst = std::max(worst, std::abs(beckner_product(factors, q) * beckner_product(factors, qd) - 1));
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("dual subspaces") {
  const Subspace h = Subspace::span_of(rows({{1, 0}, {0, 1}, {1, 1}}));
  const Subspace hp = dual_subspace(h);
  REQUIRE(hp.dim() == 1);
  const Vector expected = fixtures::vec({1, 1, -1}) / kSqrt3;
  CHECK(std::abs(std::abs(hp.basis.col(0).dot(expected)) - 1) < 1e-14);
  CHECK(dual_subspace(Subspace::full(4)).dim() == 0);

  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = std::uniform_int_distribution<int>(2, 7)(rng);
    const int k = std::uniform_int_distribution<int>(1, n - 1)(rng);
    Matrix g(n, k);
    for (int i = 0; i < n; ++i)
      for (int c = 0; c < k; ++c) g(i, c) = normal(rng);
    const Subspace s = Subspace::span_of(g);
    const Subspace sp = dual_subspace(s);
    CHECK(s.dim() + sp.dim() == n);
    CHECK((s.basis.transpose() * sp.basis).norm() < 1e-12);
    CHECK(same_subspace(dual_subspace(sp), s, 1e-12));
  }
}

TEST_CASE("subspace data") {
  const ParametrizedDatum young = subspace_datum(young_subspace());
  CHECK(young.datum.n == 2);
  CHECK(young.measure_factor == 1.0);
  CHECK(orthonormality_defect(young.parametrization) < 1e-14);
  CHECK(young.datum.p[2] == doctest::Approx(0.5));
  // (x, y) -> (x, y, x + y) stretches area by sqrt(det G^T G) = sqrt 3.
  CHECK(std::abs(bl_constant(young.datum).constant - kSqrt3 * kYoung) <= 1e-4);

  const SubspaceDatum diag = make_subspace_datum({1, 1, 1}, rows({{1}, {1}, {1}}), {3, 3, 3});
  // Hoelder along the unit diagonal: t -> t / sqrt 3 in each coordinate.
  CHECK(std::abs(bl_constant(subspace_datum(diag).datum).constant - kSqrt3) <= 1e-9);

  const SubspaceDatum flat = make_subspace_datum({1, 1, 1}, rows({{1, 0}, {0, 1}, {0, 0}}), {2, 2, 2});
  try {
    subspace_datum(flat);
    FAIL("expected FactorNotSurjective");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::FactorNotSurjective);
  }
  CHECK_THROWS_AS(make_subspace_datum({1, 1}, rows({{1}, {1}}), {0.5, 2}), Error);
  CHECK_THROWS_AS(make_subspace_datum({1, 2}, rows({{1}, {1}}), {2, 2}), Error);
}

TEST_CASE("Young/Hoelder duality pair") {
  const DualityCheck check = duality_check(young_subspace());
  CHECK(check.B_q == doctest::Approx(kYoung).epsilon(1e-12));
  CHECK(check.dual_constant == doctest::Approx(kSqrt3).epsilon(1e-9));
  CHECK(check.passes(1e-3));
  CHECK(std::abs(check.lhs - kSqrt3 * kYoung) <= 1e-4);
  CHECK(std::abs(young_constant({4.0 / 3, 4.0 / 3, 2.0}, 1) - check.lhs / kSqrt3) <= 1e-3);

  // Swapping the roles inverts the relation.
  const DualityCheck back = duality_check(dual_datum(young_subspace()));
  CHECK(back.B_q * check.B_q == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(back.passes(1e-3));
}

TEST_CASE("self-dual exponent q = 2") {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 5; ++trial) {
    Matrix g(4, 2);
    for (int i = 0; i < 4; ++i)
      for (int c = 0; c < 2; ++c) g(i, c) = normal(rng);
    const DualityCheck check = duality_check(make_subspace_datum({1, 1, 1, 1}, g, {2, 2, 2, 2}));
    CHECK(check.B_q == 1.0);
    CHECK(check.passes(1e-3));
  }
}

TEST_CASE("random finite subspace data") {
  std::mt19937_64 rng(2024);
  int kept = 0;
  int attempts = 0;
  double worst = 0;
  while (kept < 50 && attempts < 200) {
    ++attempts;
    const DualityCheck check = duality_check(fixtures::random_subspace_datum(rng));
    if (check.primal.finiteness.tag != FinitenessTag::FiniteNumerical ||
        check.dual.finiteness.tag != FinitenessTag::FiniteNumerical)
      continue;
    ++kept;
    worst = std::max(worst, check.relative_gap);
    CHECK(check.passes(1e-3));
  }
  CHECK(kept == 50);
  MESSAGE("kept " << kept << " of " << attempts << ", worst relative gap " << worst);
}

TEST_CASE("Young constants") {
  CHECK(young_constant({1.0, 3.0, 1.5}, 1) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(young_constant({1.0, kInfiniteExponent, 1.0}, 2) == 1.0);
  CHECK(young_constant({4.0 / 3, 4.0 / 3, 2.0}, 1) == doctest::Approx(0.877383).epsilon(1e-6));
  const double a = std::sqrt(std::pow(1.5, 2.0 / 3) / std::pow(3.0, 1.0 / 3));
  CHECK(young_constant({1.5, 1.5, 1.5}, 3) == doctest::Approx(std::pow(a, 9)).epsilon(1e-13));
  try {
    young_constant({2, 2, 2}, 1);
    FAIL("expected ExponentsNotYoung");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ExponentsNotYoung);
  }
}

TEST_CASE("convolution data") {
  const double s = std::sqrt(0.5);
  const ConvolutionDatum lines = convolution_datum(
      {rows({{1}, {0}}), rows({{0}, {1}}), rows({{s}, {s}})}, {2.0 / 3, 2.0 / 3, 2.0 / 3});
  CHECK(lines.tangent.dim() == 1);
  CHECK(lines.normal.dim() == 2);
  CHECK(lines.report.finiteness.tag == FinitenessTag::FiniteNumerical);
  CHECK((lines.tangent.basis.transpose() * lines.normal.basis).norm() < 1e-12);

  const ConvolutionDatum same =
      convolution_datum({rows({{1}, {0}}), rows({{1}, {0}}), rows({{1}, {0}})}, {2.0 / 3, 2.0 / 3, 2.0 / 3});
  CHECK(same.report.finiteness.tag == FinitenessTag::InfiniteSubspaceWitness);

  const ConvolutionDatum axes = convolution_datum({rows({{1}, {0}}), rows({{0}, {1}})}, {1.0, 1.0});
  CHECK(axes.tangent.dim() == 0);
  CHECK(axes.normal.dim() == 2);
  CHECK(axes.report.finiteness.scaling_residual == doctest::Approx(0.0));
  CHECK(axes.report.constant == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(convolution_datum({rows({{1}, {0}}), rows({{0}, {1}})}, {0.5, 0.5}).report.finiteness.tag ==
        FinitenessTag::InfiniteScalingFails);

  try {
    convolution_datum({rows({{1, 2}, {2, 4}})}, {1.0});
    FAIL("expected RankDeficientParametrization");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::RankDeficientParametrization);
  }
}
