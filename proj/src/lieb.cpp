#include "blkit/lieb.hpp"

#include "blkit/error.hpp"
#include "blkit/optimize.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <thread>

namespace blkit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool lexicographic_less(const Vector& a, const Vector& b) {
  for (int i = 0; i < std::min(a.size(), b.size()); ++i) {
    if (a(i) != b(i)) return a(i) < b(i);
  }
  return a.size() < b.size();
}

}  // namespace

LiebExpansion build_expansion(const BLDatum& datum, std::size_t budget) {
  LiebExpansion out;
  out.n = datum.n;
  out.M = datum.total_dim();
  const double count = binomial(out.M, out.n);
  if (count > static_cast<double>(budget)) {
    throw Error(ErrorCode::ExpansionBudgetExceeded, "binomial(" + std::to_string(out.M) + ", " +
                                                        std::to_string(out.n) + ") exceeds the budget");
  }
  out.q = Vector(out.M);
  int k = 0;
  for (int j = 0; j < datum.m(); ++j) {
    out.block_start.push_back(k);
    for (int l = 0; l < datum.out_dim(j); ++l, ++k) {
      out.q(k) = datum.p[j];
      out.index_map.emplace_back(j, l);
    }
  }
  out.family = combinations(out.M, out.n);
  out.u.reserve(out.family.size());
  for (const auto& subset : out.family) {
    Vector u = -out.q;
    for (int idx : subset) u(idx) += 1.0;
    out.u.push_back(std::move(u));
  }
  return out;
}

int rotation_parameter_count(const BLDatum& datum) {
  int total = 0;
  for (int j = 0; j < datum.m(); ++j) total += skew_parameter_count(datum.out_dim(j));
  return total;
}

RotationTuple identity_rotations(const BLDatum& datum) {
  return rotations_from_parameters(datum, Vector::Zero(rotation_parameter_count(datum)));
}

RotationTuple rotations_from_parameters(const BLDatum& datum, const Vector& flat) {
  if (flat.size() != rotation_parameter_count(datum)) {
    throw Error(ErrorCode::DimensionMismatch, "rotation parameter vector has the wrong length");
  }
  RotationTuple out;
  int offset = 0;
  for (int j = 0; j < datum.m(); ++j) {
    const int nj = datum.out_dim(j);
    const int count = skew_parameter_count(nj);
    Vector theta = flat.segment(offset, count);
    out.blocks.push_back(rotation_from_parameters(theta, nj));
    out.parameters.push_back(std::move(theta));
    offset += count;
  }
  return out;
}

namespace {

Matrix column_matrix(const BLDatum& datum, const LiebExpansion& expansion, const RotationTuple& r) {
  if (static_cast<int>(r.blocks.size()) != datum.m()) {
    throw Error(ErrorCode::DimensionMismatch, "rotation tuple does not match the datum");
  }
  Matrix v(datum.n, expansion.M);
  for (int j = 0; j < datum.m(); ++j) {
    // Columns of L_j^* R_j^* are the v_k of block j.
    v.middleCols(expansion.block_start[j], datum.out_dim(j)) =
        datum.maps[j].transpose() * r.blocks[j].transpose();
  }
  return v;
}

}  // namespace

Vector coefficients(const BLDatum& datum, const LiebExpansion& expansion, const RotationTuple& r) {
  const Matrix v = column_matrix(datum, expansion, r);
  Vector d(static_cast<int>(expansion.family.size()));
  Matrix minor(datum.n, datum.n);
  for (std::size_t idx = 0; idx < expansion.family.size(); ++idx) {
    const auto& subset = expansion.family[idx];
    double q_product = 1.0;
    for (int a = 0; a < datum.n; ++a) {
      minor.col(a) = v.col(subset[a]);
      q_product *= expansion.q(subset[a]);
    }
    const double det = minor.determinant();
    d(static_cast<int>(idx)) = q_product * det * det;
  }
  return d;
}

ExpSumInstance expansion_instance(const LiebExpansion& expansion, const Vector& d) {
  std::vector<double> coeffs(d.data(), d.data() + d.size());
  return ExpSumInstance{expansion.M, expansion.u, std::move(coeffs)};
}

double blg_via_expansion(const BLDatum& datum, const LiebExpansion& expansion, const RotationTuple& r,
                         const Vector& y, const Tolerances& tol) {
  if (y.size() != expansion.M) throw Error(ErrorCode::DimensionMismatch, "y must have M entries");
  const ExpSumInstance inst = expansion_instance(expansion, coefficients(datum, expansion, r));
  const double log_sum = log_evaluate(inst, y);
  if (!(std::exp(log_sum) > tol.det_tol)) {
    throw Error(ErrorCode::SingularDenominator, "Cauchy-Binet sum vanishes");
  }
  return std::exp(-0.5 * log_sum);
}

GaussianTuple tuple_from_rotations(const BLDatum& datum, const LiebExpansion& expansion,
                                   const RotationTuple& r, const Vector& y) {
  std::vector<Matrix> blocks;
  for (int j = 0; j < datum.m(); ++j) {
    const int nj = datum.out_dim(j);
    const Vector scales = y.segment(expansion.block_start[j], nj).array().exp();
    Matrix a = r.blocks[j].transpose() * scales.asDiagonal() * r.blocks[j];
    blocks.push_back(0.5 * (a + a.transpose()));
  }
  Tolerances loose;
  loose.sym_tol = 1e-8;
  return make_gaussian_tuple(std::move(blocks), loose);
}

namespace {

struct InnerValue {
  double value = kInf;
  bool attained = false;
  HullTag tag = HullTag::InteriorMin;
};

InnerValue inner_value(const BLDatum& normalised, const LiebExpansion& expansion, const Vector& theta,
                       const Tolerances& tol) {
  InnerValue out;
  try {
    const Vector d = coefficients(normalised, expansion, rotations_from_parameters(normalised, theta));
    const Infimum g = infimum(expansion_instance(expansion, d), tol);
    out.value = g.value;
    out.attained = g.attained;
    out.tag = g.tag;
  } catch (const Error&) {
    // Classification or Newton trouble at this rotation: treat the point as
    // unusable rather than guess a value.
    out.value = kInf;
  }
  return out;
}

struct RestartResult {
  Vector theta;
  double value = kInf;
  int evaluations = 0;
};

}  // namespace

BLReport bl_constant(const BLDatum& datum, const LiebConfig& config) {
  BLReport report;
  const Tolerances& tol = config.tol;
  report.finiteness.scaling_residual = scaling_condition(datum);
  if (std::abs(report.finiteness.scaling_residual) > tol.scaling_tol * datum.n) {
    report.finiteness.tag = FinitenessTag::InfiniteScalingFails;
    report.constant = kInf;
    report.log_constant = kInf;
    return report;
  }
  const FinitenessVerdict lattice = classify_finiteness(datum, config.lattice_depth, tol);
  if (lattice.tag == FinitenessTag::InfiniteSubspaceWitness) {
    report.finiteness = lattice;
    report.constant = kInf;
    report.log_constant = kInf;
    return report;
  }

  const ProjectionNormalization norm = projection_normalize(datum, tol);
  report.det_factor = norm.det_factor;
  const LiebExpansion expansion = build_expansion(norm.datum, config.expansion_budget);
  const int params = rotation_parameter_count(norm.datum);
  const int restarts = params == 0 ? 1 : std::max(1, config.restarts);

  std::vector<RestartResult> results(restarts);
  auto run = [&](int index) {
    Vector start = Vector::Zero(params);
    if (index > 0) {
      std::mt19937_64 rng(config.seed + static_cast<std::uint64_t>(index));
      std::uniform_real_distribution<double> angle(-M_PI, M_PI);
      for (int i = 0; i < params; ++i) start(i) = angle(rng);
    }
    NelderMeadOptions options;
    options.max_evaluations = config.max_evaluations;
    options.initial_step = 0.5;
    auto objective = [&](const Vector& theta) { return inner_value(norm.datum, expansion, theta, tol).value; };
    NelderMeadResult nm = nelder_mead(objective, start, options);
    // One restart from the end point shakes off a collapsed simplex.
    if (params > 0) {
      options.initial_step = 0.05;
      const NelderMeadResult polish = nelder_mead(objective, nm.x, options);
      nm.evaluations += polish.evaluations;
      if (polish.value <= nm.value) {
        nm.x = polish.x;
        nm.value = polish.value;
      }
    }
    results[index] = {nm.x, nm.value, nm.evaluations};
  };

  const int threads = std::clamp(config.threads, 1, restarts);
  if (threads == 1) {
    for (int i = 0; i < restarts; ++i) run(i);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (int i = next++; i < restarts; i = next++) run(i);
      });
    }
    for (auto& worker : pool) worker.join();
  }

  // Deterministic merge: smallest value, then lexicographically smallest theta.
  int best = 0;
  for (int i = 1; i < restarts; ++i) {
    if (results[i].value < results[best].value ||
        (results[i].value == results[best].value && lexicographic_less(results[i].theta, results[best].theta))) {
      best = i;
    }
  }
  OptimizerDiagnostics& diag = report.diagnostics;
  diag.restarts = restarts;
  double lo = kInf, hi = -kInf;
  for (int i = 0; i < restarts; ++i) {
    diag.evaluations += results[i].evaluations;
    diag.restart_values.push_back(results[i].value);
    diag.restart_parameters.push_back(results[i].theta);
    diag.restart_attained.push_back(inner_value(norm.datum, expansion, results[i].theta, tol).attained);
    lo = std::min(lo, results[i].value);
    hi = std::max(hi, results[i].value);
  }
  diag.spread = hi - lo;
  diag.best_parameters = results[best].theta;
  const InnerValue at_best = inner_value(norm.datum, expansion, results[best].theta, tol);
  diag.inner_value = at_best.value;
  diag.inner_attained = at_best.attained;
  diag.inner_tag = at_best.tag;
  const double g = at_best.value;
  for (int i = 0; i < restarts; ++i) {
    if (std::abs(results[i].value - g) <= config.agreement_tol * std::max(std::abs(g), config.pos_tol)) {
      ++diag.agreeing;
    }
  }

  report.log_constant = -0.5 * (std::log(g) + norm.log_det_factor);
  report.constant = std::exp(report.log_constant);
  report.finiteness.witness.reset();
  const bool agree = restarts < 2 || diag.agreeing >= 2;
  if (std::isfinite(g) && g >= config.pos_tol && at_best.tag != HullTag::OutsideZero && agree) {
    report.finiteness.tag = FinitenessTag::FiniteNumerical;
    report.finiteness.numeric_lower_bound = report.constant;
  } else {
    report.finiteness.tag = FinitenessTag::Inconclusive;
    if (std::isfinite(report.constant)) report.finiteness.numeric_lower_bound = report.constant;
  }
  return report;
}

ExtremiserCertificate near_extremiser(const BLDatum& datum, const BLReport& report, double delta,
                                      const LiebConfig& config) {
  if (report.finiteness.tag != FinitenessTag::FiniteNumerical) {
    throw Error(ErrorCode::NotFinite, "near extremisers need a Finite-Numerical constant");
  }
  const Tolerances& tol = config.tol;
  const ProjectionNormalization norm = projection_normalize(datum, tol);
  const LiebExpansion expansion = build_expansion(norm.datum, config.expansion_budget);
  const RotationTuple r = rotations_from_parameters(norm.datum, report.diagnostics.best_parameters);
  const Vector d = coefficients(norm.datum, expansion, r);

  // Work on the positive support: zero coefficients never contribute.
  std::vector<int> support;
  for (int i = 0; i < d.size(); ++i) {
    if (d(i) > 0) support.push_back(i);
  }
  std::vector<Vector> exponents;
  std::vector<double> coeffs;
  double dmax = 0;
  for (int i : support) {
    exponents.push_back(expansion.u[i]);
    coeffs.push_back(d(i));
    dmax = std::max(dmax, d(i));
  }
  const ExpSumInstance inst{expansion.M, std::move(exponents), std::move(coeffs)};

  ExtremiserCertificate cert;
  cert.delta = delta;
  cert.constants = constants_auto(inst, tol);
  cert.inner = near_minimise(inst, delta, cert.constants, tol);

  const GaussianTuple normalised_tuple = tuple_from_rotations(norm.datum, expansion, r, cert.inner.y);
  Tolerances loose = tol;
  loose.sym_tol = 1e-8;
  cert.tuple = make_gaussian_tuple(pull_back_blocks(norm, normalised_tuple.blocks), loose);
  try {
    cert.log_blg = log_blg(datum, cert.tuple, tol);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::SingularDenominator) throw;
    // Very eccentric blocks: fall back to the exact expansion value.
    cert.log_blg = -0.5 * (std::log(cert.inner.value) + norm.log_det_factor);
  }
  cert.blg = std::exp(cert.log_blg);
  const double g = report.diagnostics.inner_value;
  cert.delta_eff = 1.0 - 1.0 / std::sqrt(1.0 + delta * dmax / g);
  cert.log_eccentricity_bound = std::exp(cert.constants.log_N + std::log(std::log(1.0 / delta)));
  cert.eccentricity_ok = cert.tuple.log_eccentricity <= cert.log_eccentricity_bound;
  return cert;
}

HolderTable holder_experiment(const BLDatum& datum, const std::vector<double>& radii,
                              const LiebConfig& config, int samples) {
  const BLReport base = bl_constant(datum, config);
  if (!std::isfinite(base.constant)) throw Error(ErrorCode::NotFinite, "holder experiment needs a finite constant");
  HolderTable table;
  table.base_value = std::exp(-2.0 * base.log_constant);

  const ProjectionNormalization norm = projection_normalize(datum, config.tol);
  const LiebExpansion expansion = build_expansion(norm.datum, config.expansion_budget);
  const Vector d = coefficients(norm.datum, expansion,
                                rotations_from_parameters(norm.datum, base.diagnostics.best_parameters));
  const ExpSumConstants k = constants_auto(expansion_instance(expansion, d), config.tol);
  table.log_alpha = k.log_alpha;
  table.alpha = k.alpha();

  std::mt19937_64 rng(config.seed ^ 0x5eedULL);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (double radius : radii) {
    HolderRow row;
    row.radius = radius;
    for (int s = 0; s < samples && radius > 0; ++s) {
      BLDatum moved = datum;
      double total = 0;
      std::vector<Matrix> noise;
      for (const auto& map : datum.maps) {
        Matrix e(map.rows(), map.cols());
        for (int i = 0; i < e.rows(); ++i)
          for (int j = 0; j < e.cols(); ++j) e(i, j) = normal(rng);
        total += e.squaredNorm();
        noise.push_back(std::move(e));
      }
      const double scale = radius / std::sqrt(total);
      for (int j = 0; j < datum.m(); ++j) moved.maps[j] += scale * noise[j];
      moved = validate(moved, config.tol);
      const BLReport other = bl_constant(moved, config);
      const double value = std::exp(-2.0 * other.log_constant);
      row.max_difference = std::max(row.max_difference, std::abs(value - table.base_value));
    }
    row.ratio = radius > 0 ? row.max_difference / std::exp(table.alpha * std::log(radius)) : 0.0;
    table.rows.push_back(row);
  }
  // Bounded: every ratio finite and none far above the ratio at the largest radius.
  double reference = 0;
  double largest = -1;
  for (const auto& row : table.rows) {
    if (row.radius > largest) {
      largest = row.radius;
      reference = row.ratio;
    }
  }
  table.bounded = true;
  for (const auto& row : table.rows) {
    if (!std::isfinite(row.ratio) || row.ratio > 10.0 * reference + 1e-9 * (1 + table.base_value)) {
      table.bounded = false;
    }
  }
  return table;
}

}  // namespace blkit
