#include "doctest.h"
#include "fixtures.hpp"

#include "blkit/error.hpp"
#include "blkit/lieb.hpp"

#include <cmath>

using namespace blkit;

namespace {

// Sharp one-dimensional Young building block, evaluated straight from its
// closed form r^{1/r} / r'^{1/r'} under a square root.
double beckner_oracle(double r) {
  const double rp = r / (r - 1);
  return std::sqrt(std::pow(r, 1 / r) / std::pow(rp, 1 / rp));
}


}  // namespace

TEST_CASE("expansion bookkeeping") {
  const LiebExpansion young = build_expansion(fixtures::young1());
  CHECK(young.M == 3);
  REQUIRE(young.family.size() == 3);
  CHECK(young.family[0] == std::vector<int>{0, 1});
  CHECK(young.family[1] == std::vector<int>{0, 2});
  CHECK(young.family[2] == std::vector<int>{1, 2});
  CHECK(young.q(0) == 0.75);
  CHECK(young.q(2) == 0.5);
  CHECK(young.q.sum() == doctest::Approx(2.0));
  CHECK(build_expansion(fixtures::holder3()).family.size() == 3);
  const LiebExpansion lw = build_expansion(fixtures::loomis_whitney());
  CHECK(lw.family.size() == 20);
  CHECK(lw.index_map[3] == std::pair<int, int>{1, 1});
  for (const auto& u : lw.u) {
    for (int k = 0; k < 6; ++k) CHECK((u(k) == -0.5 || u(k) == 0.5));
  }
  try {
    build_expansion(fixtures::loomis_whitney(), 19);
    FAIL("expected ExpansionBudgetExceeded");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ExpansionBudgetExceeded);
  }
}

TEST_CASE("coefficients at the identity rotation") {
  const BLDatum young = fixtures::young1();
  const LiebExpansion ey = build_expansion(young);
  const Vector d = coefficients(young, ey, identity_rotations(young));
  CHECK(d(0) == doctest::Approx(9.0 / 16));
  CHECK(d(1) == doctest::Approx(3.0 / 8));
  CHECK(d(2) == doctest::Approx(3.0 / 8));
  CHECK(blg_via_expansion(young, ey, identity_rotations(young), Vector::Zero(3)) ==
        doctest::Approx(std::pow(21.0 / 16, -0.5)).epsilon(1e-14));

  const BLDatum lw = fixtures::loomis_whitney();
  const LiebExpansion el = build_expansion(lw);
  const Vector dl = coefficients(lw, el, identity_rotations(lw));
  int nonzero = 0;
  for (int i = 0; i < dl.size(); ++i) {
    if (dl(i) > 1e-15) {
      ++nonzero;
      CHECK(dl(i) == doctest::Approx(0.125));
    }
  }
  CHECK(nonzero == 8);
  // A repeated column forces a singular minor.
  const BLDatum twice = validate({2, {fixtures::rows({{1, 0}}), fixtures::rows({{1, 0}}), fixtures::rows({{0, 1}})},
                                  {0.5, 0.5, 1.0}});
  const Vector dt = coefficients(twice, build_expansion(twice), identity_rotations(twice));
  CHECK(dt(0) == 0.0);
}

TEST_CASE("Cauchy-Binet identity on random data") {
  std::mt19937_64 rng(500);
  std::normal_distribution<double> normal;
  double worst = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const BLDatum datum = fixtures::random_datum(rng);
    const LiebExpansion e = build_expansion(datum);
    Vector theta(rotation_parameter_count(datum));
    for (int i = 0; i < theta.size(); ++i) theta(i) = 2 * normal(rng);
    const RotationTuple r = rotations_from_parameters(datum, theta);
    Vector y(e.M);
    for (int i = 0; i < y.size(); ++i) y(i) = normal(rng);
    const double via = blg_via_expansion(datum, e, r, y);
    const double direct = blg(datum, tuple_from_rotations(datum, e, r, y));
    worst = std::max(worst, std::abs(via - direct) / direct);
  }
  CHECK(worst <= 1e-9);
}

TEST_CASE("known constants") {
  const BLReport holder = bl_constant(fixtures::holder3());
  CHECK(std::abs(holder.constant - 1.0) <= 1e-9);
  CHECK(holder.finiteness.tag == FinitenessTag::FiniteNumerical);

  const BLReport lw = bl_constant(fixtures::loomis_whitney());
  CHECK(std::abs(lw.constant - 1.0) <= 1e-6);
  CHECK(lw.finiteness.tag == FinitenessTag::FiniteNumerical);
  CHECK(lw.diagnostics.restarts == 8);
  CHECK(lw.diagnostics.agreeing >= 2);

  const BLReport young = bl_constant(fixtures::young1());
  const double expected = beckner_oracle(4.0 / 3) * beckner_oracle(4.0 / 3);
  CHECK(std::abs(young.constant - expected) <= 1e-4);
  CHECK(young.diagnostics.inner_attained);
}

TEST_CASE("infinite data short-circuit") {
  const BLReport scaling = bl_constant(fixtures::young1({0.5, 0.5, 0.5}));
  CHECK(scaling.finiteness.tag == FinitenessTag::InfiniteScalingFails);
  CHECK(std::isinf(scaling.constant));
  const BLDatum shared = validate({2, {fixtures::rows({{1, 0}}), fixtures::rows({{1, 0}})}, {1.0, 1.0}});
  CHECK(bl_constant(shared).finiteness.tag == FinitenessTag::InfiniteSubspaceWitness);
}

TEST_CASE("rotation and permutation invariance") {
  std::mt19937_64 rng(77);
  for (const BLDatum& datum : {fixtures::loomis_whitney(), fixtures::young1()}) {
    const double base = bl_constant(datum).constant;
    for (int trial = 0; trial < 3; ++trial) {
      const Matrix q = fixtures::random_orthogonal(rng, datum.n);
      BLDatum rotated = datum;
      for (auto& map : rotated.maps) map = map * q;
      CHECK(std::abs(bl_constant(validate(rotated)).constant - base) <= 1e-6 * base);
    }
    BLDatum permuted = datum;
    std::reverse(permuted.maps.begin(), permuted.maps.end());
    std::reverse(permuted.p.begin(), permuted.p.end());
    CHECK(std::abs(bl_constant(validate(permuted)).constant - base) <= 1e-6 * base);
  }
}

TEST_CASE("threads do not change the report") {
  LiebConfig one;
  LiebConfig four;
  four.threads = 4;
  const BLReport a = bl_constant(fixtures::loomis_whitney(), one);
  const BLReport b = bl_constant(fixtures::loomis_whitney(), four);
  CHECK(a.constant == b.constant);
  CHECK(a.diagnostics.best_parameters == b.diagnostics.best_parameters);
  CHECK(a.diagnostics.restart_values == b.diagnostics.restart_values);
}

TEST_CASE("near extremisers") {
  for (const BLDatum& datum : {fixtures::holder3(), fixtures::loomis_whitney(), fixtures::young1()}) {
    const BLReport report = bl_constant(datum);
    const ExtremiserCertificate cert = near_extremiser(datum, report, 0.01);
    CHECK(cert.blg >= (1 - 0.02) * report.constant);
    CHECK(cert.blg >= (1 - cert.delta_eff) * report.constant * (1 - 1e-12));
    CHECK(cert.blg <= report.constant * (1 + 1e-9));
    CHECK(cert.eccentricity_ok);
    CHECK(std::abs(blg(datum, cert.tuple) - cert.blg) <= 1e-9 * cert.blg);
  }
  const BLReport lw = bl_constant(fixtures::loomis_whitney());
  CHECK_THROWS_AS(near_extremiser(fixtures::loomis_whitney(), lw, 0.5), Error);
}

TEST_CASE("Holder experiment stays bounded") {
  const HolderTable lw = holder_experiment(fixtures::loomis_whitney(), {0.0, 1e-2, 1e-3, 1e-4});
  CHECK(lw.rows[0].max_difference == 0.0);
  CHECK(lw.bounded);
  const HolderTable young = holder_experiment(fixtures::young1(), {1e-2, 1e-3, 1e-4});
  CHECK(young.bounded);
  for (const auto& row : young.rows) CHECK(std::isfinite(row.ratio));
}
