#include "blkit/expsum.hpp"

#include "blkit/error.hpp"
#include "blkit/hull.hpp"
#include "blkit/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace blkit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Matrix columns(const ExpSumInstance& inst, const std::vector<int>& subset) {
  Matrix out(inst.dim, static_cast<int>(subset.size()));
  for (std::size_t a = 0; a < subset.size(); ++a) out.col(a) = inst.exponents[subset[a]];
  return out;
}

double log_sum_exp(const std::vector<double>& terms) {
  double top = -kInf;
  for (double t : terms) top = std::max(top, t);
  if (!std::isfinite(top)) return top;
  double sum = 0.0;
  for (double t : terms) sum += std::exp(t - top);
  return top + std::log(sum);
}

double subset_log_value(const ExpSumInstance& inst, const std::vector<int>& subset, const Vector& y) {
  std::vector<double> terms;
  terms.reserve(subset.size());
  for (int j : subset) {
    if (inst.coeffs[j] > 0) terms.push_back(std::log(inst.coeffs[j]) + inst.exponents[j].dot(y));
  }
  return log_sum_exp(terms);
}

std::vector<int> all_indices(int k) {
  std::vector<int> out(k);
  for (int j = 0; j < k; ++j) out[j] = j;
  return out;
}

}  // namespace

std::vector<int> ExpSumInstance::support() const {
  std::vector<int> out;
  for (int j = 0; j < size(); ++j) {
    if (coeffs[j] > 0) out.push_back(j);
  }
  return out;
}

ExpSumInstance make_instance(int dim, std::vector<Vector> exponents, std::vector<double> coeffs,
                             const Tolerances& tol) {
  if (dim < 0) throw Error(ErrorCode::DimensionMismatch, "negative dimension");
  if (exponents.size() != coeffs.size()) {
    throw Error(ErrorCode::DimensionMismatch, "exponent and coefficient counts differ");
  }
  for (std::size_t j = 0; j < exponents.size(); ++j) {
    if (exponents[j].size() != dim) {
      throw Error(ErrorCode::DimensionMismatch, "exponent " + std::to_string(j) + " has the wrong length");
    }
    if (!exponents[j].allFinite()) throw Error(ErrorCode::InvalidInput, "non-finite exponent");
    if (!(coeffs[j] >= 0.0) || !std::isfinite(coeffs[j])) {
      throw Error(ErrorCode::InvalidInput, "coefficient " + std::to_string(j) + " must be finite and >= 0");
    }
    for (std::size_t i = 0; i < j; ++i) {
      if ((exponents[i] - exponents[j]).norm() <= tol.distinct_tol) {
        throw Error(ErrorCode::InvalidInput, "exponents " + std::to_string(i) + " and " +
                                                 std::to_string(j) + " coincide");
      }
    }
  }
  return ExpSumInstance{dim, std::move(exponents), std::move(coeffs)};
}

ExpSumInstance with_coeffs(const ExpSumInstance& inst, std::vector<double> coeffs) {
  if (static_cast<int>(coeffs.size()) != inst.size()) {
    throw Error(ErrorCode::DimensionMismatch, "coefficient count differs from exponent count");
  }
  for (double d : coeffs) {
    if (!(d >= 0.0) || !std::isfinite(d)) throw Error(ErrorCode::InvalidInput, "coefficients must be >= 0");
  }
  ExpSumInstance out = inst;
  out.coeffs = std::move(coeffs);
  return out;
}

double log_evaluate(const ExpSumInstance& inst, const Vector& y) {
  if (y.size() != inst.dim) throw Error(ErrorCode::DimensionMismatch, "point has the wrong dimension");
  return subset_log_value(inst, all_indices(inst.size()), y);
}

double evaluate(const ExpSumInstance& inst, const Vector& y) { return std::exp(log_evaluate(inst, y)); }

double ExpSumConstants::alpha() const { return std::exp(log_alpha); }

std::string_view to_string(HullTag tag) {
  switch (tag) {
    case HullTag::InteriorMin: return "InteriorMin";
    case HullTag::BoundaryInf: return "BoundaryInf";
    case HullTag::OutsideZero: return "OutsideZero";
  }
  return "Unknown";
}

std::string_view to_string(CertificateMode mode) {
  switch (mode) {
    case CertificateMode::ExactMin: return "ExactMin";
    case CertificateMode::ShiftedFace: return "ShiftedFace";
    case CertificateMode::Pigeonhole: return "Pigeonhole";
  }
  return "Unknown";
}

TrichotomyResult hull_classify(const ExpSumInstance& inst, const std::vector<int>& subset,
                               const Tolerances& tol) {
  if (subset.empty()) throw Error(ErrorCode::InvalidInput, "hull_classify needs a nonempty subset");
  for (int j : subset) {
    if (j < 0 || j >= inst.size()) throw Error(ErrorCode::DimensionMismatch, "subset index out of range");
  }
  const Matrix u = columns(inst, subset);
  const int k = static_cast<int>(subset.size());
  const int dim = inst.dim;
  TrichotomyResult out;

  const MinNormPoint nearest = min_norm_point(u);
  if (nearest.distance > tol.sep_tol) {
    out.tag = HullTag::OutsideZero;
    const Vector v = nearest.point / nearest.distance;
    out.separator = v;
    out.margin = (v.transpose() * u).minCoeff();
    return out;
  }

  // max t subject to sum_j (mu_j + t) u_j = 0, sum_j mu_j + k t = 1, mu, t >= 0.
  Matrix a = Matrix::Zero(dim + 1, k + 1);
  a.topLeftCorner(dim, k) = u;
  a.block(0, k, dim, 1) = u.rowwise().sum();
  a.row(dim).head(k).setOnes();
  a(dim, k) = k;
  Vector b = Vector::Zero(dim + 1);
  b(dim) = 1.0;
  Vector c = Vector::Zero(k + 1);
  c(k) = 1.0;
  const LPResult lp = solve_lp(a, b, c);
  if (lp.status != LPStatus::Optimal) {
    throw Error(ErrorCode::DegenerateLP, "origin is within sep_tol of the hull but the barycentric LP is infeasible");
  }
  out.min_weight = lp.value;
  if (lp.value > tol.sep_tol) {
    out.tag = HullTag::InteriorMin;
    out.face = subset;
    out.margin = 0;
    return out;
  }

  // The face I_1: every index that carries weight in some representation of 0.
  Matrix a_face = Matrix::Zero(dim + 1, k);
  a_face.topRows(dim) = u;
  a_face.row(dim).setOnes();
  for (int idx = 0; idx < k; ++idx) {
    Vector objective = Vector::Zero(k);
    objective(idx) = 1.0;
    const LPResult face_lp = solve_lp(a_face, b, objective);
    if (face_lp.status != LPStatus::Optimal) {
      throw Error(ErrorCode::DegenerateLP, "face LP failed for index " + std::to_string(subset[idx]));
    }
    if (face_lp.value > tol.sep_tol) out.face.push_back(subset[idx]);
  }
  if (out.face.empty() || static_cast<int>(out.face.size()) == k) {
    throw Error(ErrorCode::DegenerateLP, "origin sits in the ambiguous band between interior and boundary");
  }

  const Matrix face_span = orthonormal_range(columns(inst, out.face), tol.rank_tol, 1.0);
  std::vector<int> rest;
  for (int j : subset) {
    if (std::find(out.face.begin(), out.face.end(), j) == out.face.end()) rest.push_back(j);
  }
  const Matrix rest_u = columns(inst, rest);
  const Matrix projected = rest_u - face_span * (face_span.transpose() * rest_u);
  const MinNormPoint sep = min_norm_point(projected);
  if (sep.distance <= tol.sep_tol) {
    throw Error(ErrorCode::DegenerateLP, "face does not separate from the remaining exponents");
  }
  const Vector v = sep.point / sep.distance;
  out.tag = HullTag::BoundaryInf;
  out.separator = v;
  out.margin = (v.transpose() * rest_u).minCoeff();
  return out;
}

namespace {

ExpSumConstants finish_constants(ExpSumConstants k) {
  k.c0 = std::min(1.0, k.c0);
  k.c1 = std::min(1.0, k.c1);
  k.C1 = 4.0 * k.C0 / (k.c0 * k.c1);
  k.N1 = 4.0 * k.C0 * k.C1;
  k.log_N = (k.size + 1) * std::log(16.0 * k.C0 * k.C0 / (k.c0 * k.c1));
  k.N = std::exp(k.log_N);
  k.delta0 = 1.0 / (k.size + 1);
  // log(1 + C0 N) without overflow.
  const double log_c0n = std::log(k.C0) + k.log_N;
  k.log_alpha = -(log_c0n > 30 ? log_c0n : std::log1p(std::exp(log_c0n)));
  return k;
}

double max_exponent_norm(const ExpSumInstance& inst) {
  double top = 0.0;
  for (const auto& u : inst.exponents) top = std::max(top, u.norm());
  return top;
}

}  // namespace

ExpSumConstants constants(const ExpSumInstance& inst, const Tolerances& tol) {
  const int k = inst.size();
  if (static_cast<std::size_t>(k) > tol.subset_budget) {
    throw Error(ErrorCode::SubsetBudgetExceeded,
                std::to_string(k) + " exponents exceed the subset budget of " + std::to_string(tol.subset_budget));
  }
  ExpSumConstants out;
  out.mode = ConstantsMode::Exact;
  out.size = k;
  out.C0 = std::max(1.0, max_exponent_norm(inst));
  double c0 = kInf;
  double c1 = kInf;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << k); ++mask) {
    std::vector<int> subset;
    for (int j = 0; j < k; ++j) {
      if (mask & (std::uint64_t{1} << j)) subset.push_back(j);
    }
    const TrichotomyResult cls = hull_classify(inst, subset, tol);
    if (cls.tag == HullTag::InteriorMin) {
      c0 = std::min(c0, relative_inradius(columns(inst, subset), tol.rank_tol));
    } else {
      c1 = std::min(c1, cls.margin);
    }
  }
  out.c0 = c0;
  out.c1 = c1;
  return finish_constants(out);
}

ExpSumConstants bound_constants(const ExpSumInstance& inst, const Tolerances& tol,
                                std::uint64_t pair_budget) {
  const int k = inst.size();
  ExpSumConstants out;
  out.mode = ConstantsMode::Bound;
  out.size = k;
  out.C0 = std::max(1.0, max_exponent_norm(inst));
  const Matrix all = columns(inst, all_indices(k));
  const int r = k == 0 ? 0 : numerical_rank(all, tol.rank_tol, std::max(1.0, all.norm()));

  double pairs = 0;
  for (int t = 1; t <= r; ++t) {
    double linear = 0;
    for (int s = 0; s <= r - t; ++s) linear += binomial(k, s);
    pairs += binomial(k, t) * linear;
  }
  if (pairs > static_cast<double>(pair_budget)) {
    throw Error(ErrorCode::SubsetBudgetExceeded, "flat enumeration would visit " +
                                                     std::to_string(pairs) + " index pairs");
  }

  double facet = kInf;
  double any = kInf;
  for (int t = 1; t <= r; ++t) {
    for (const auto& aff : combinations(k, t)) {
      const Matrix affine = columns(inst, aff);
      for (int s = 0; s <= r - t; ++s) {
        for (const auto& lin : combinations(k, s)) {
          const double dist = flat_distance(affine, columns(inst, lin));
          if (dist > tol.sep_tol) {
            any = std::min(any, dist);
            if (s == 0) facet = std::min(facet, dist);
          }
        }
      }
    }
  }
  out.c0 = facet;
  out.c1 = any;
  return finish_constants(out);
}

ExpSumConstants constants_auto(const ExpSumInstance& inst, const Tolerances& tol) {
  if (static_cast<std::size_t>(inst.size()) <= tol.subset_budget) return constants(inst, tol);
  return bound_constants(inst, tol);
}

namespace {

// Newton on log f over span K(I); the caller has already classified I.
InteriorMinimum newton_minimise(const ExpSumInstance& inst, const std::vector<int>& subset,
                                const Tolerances& tol) {
  const Matrix u = columns(inst, subset);
  const int k = static_cast<int>(subset.size());
  const Matrix q = orthonormal_range(u, tol.rank_tol, std::max(1.0, u.norm()));
  const Matrix a = q.transpose() * u;  // r x k
  const int r = static_cast<int>(a.rows());
  Vector log_d(k);
  for (int idx = 0; idx < k; ++idx) log_d(idx) = std::log(inst.coeffs[subset[idx]]);
  auto objective = [&](const Vector& z) {
    const Vector terms = log_d + a.transpose() * z;
    const double top = terms.maxCoeff();
    return top + std::log((terms.array() - top).exp().sum());
  };

  InteriorMinimum out;
  Vector z = Vector::Zero(r);
  double value = objective(z);
  bool converged = false;
  for (int iter = 0; iter <= tol.max_newton_iters; ++iter) {
    const Vector terms = log_d + a.transpose() * z;
    const double top = terms.maxCoeff();
    Vector w = (terms.array() - top).exp();
    w /= w.sum();
    const Vector grad = a * w;
    out.iterations = iter;
    if (grad.norm() <= tol.grad_tol) {
      converged = true;
      break;
    }
    if (iter == tol.max_newton_iters) break;
    const Matrix hess = a * w.asDiagonal() * a.transpose() - grad * grad.transpose();
    Vector dir = -hess.ldlt().solve(grad);
    if (!dir.allFinite() || grad.dot(dir) >= 0) dir = -grad;
    if (-grad.dot(dir) < 1e-14 * std::max(1.0, std::abs(value))) {
      // Predicted decrease is below rounding; the quadratic model is exact
      // enough here that a full step is the right move.
      z += dir;
      value = objective(z);
      continue;
    }
    double step = 1.0;
    double next = objective(z + dir);
    while (!(next <= value + 1e-4 * step * grad.dot(dir)) && step > 1e-12) {
      step *= 0.5;
      next = objective(z + step * dir);
    }
    if (!(next <= value + 1e-4 * step * grad.dot(dir))) {
      // The decrease is below rounding: take the Newton step if it shrinks
      // the gradient, otherwise stop.
      const Vector trial = z + dir;
      const Vector t_terms = log_d + a.transpose() * trial;
      const double t_top = t_terms.maxCoeff();
      Vector tw = (t_terms.array() - t_top).exp();
      tw /= tw.sum();
      if ((a * tw).norm() < grad.norm()) {
        z = trial;
        value = objective(z);
        continue;
      }
      break;
    }
    z += step * dir;
    value = next;
  }
  if (!converged) {
    throw Error(ErrorCode::NonConvergence, "Newton did not reach grad_tol within " +
                                               std::to_string(tol.max_newton_iters) + " iterations");
  }
  out.y = q * z;
  out.log_value = value;
  out.value = std::exp(value);
  return out;
}

}  // namespace

InteriorMinimum minimise_interior(const ExpSumInstance& inst, const std::vector<int>& subset,
                                  const Tolerances& tol) {
  for (int j : subset) {
    if (j < 0 || j >= inst.size()) throw Error(ErrorCode::DimensionMismatch, "subset index out of range");
    if (!(inst.coeffs[j] > 0)) {
      throw Error(ErrorCode::NotInterior, "coefficient " + std::to_string(j) + " vanishes on the subset");
    }
  }
  const TrichotomyResult cls = hull_classify(inst, subset, tol);
  if (cls.tag != HullTag::InteriorMin) {
    throw Error(ErrorCode::NotInterior, "origin is not in the relative interior of the hull");
  }
  InteriorMinimum out = newton_minimise(inst, subset, tol);
  const int k = static_cast<int>(subset.size());
  out.inradius = std::min(1.0, relative_inradius(columns(inst, subset), tol.rank_tol));
  double dmin = kInf;
  double dmax = 0;
  for (int j : subset) {
    dmin = std::min(dmin, inst.coeffs[j]);
    dmax = std::max(dmax, inst.coeffs[j]);
  }
  out.radius_bound = std::isfinite(out.inradius)
                         ? std::log(static_cast<double>(k) * dmax / dmin) / out.inradius
                         : 0.0;
  return out;
}

Infimum infimum(const ExpSumInstance& inst, const Tolerances& tol) {
  Infimum out;
  out.minimiser = Vector::Zero(inst.dim);
  const std::vector<int> support = inst.support();
  if (support.empty()) {
    out.value = 0;
    out.log_value = -kInf;
    out.attained = true;
    out.tag = HullTag::OutsideZero;
    return out;
  }
  const TrichotomyResult cls = hull_classify(inst, support, tol);
  out.tag = cls.tag;
  if (cls.tag == HullTag::OutsideZero) {
    out.value = 0;
    out.log_value = -kInf;
    out.attained = false;
    return out;
  }
  out.face = cls.face;
  const InteriorMinimum minimum = newton_minimise(inst, cls.face, tol);
  out.value = minimum.value;
  out.log_value = minimum.log_value;
  out.minimiser = minimum.y;
  out.attained = cls.tag == HullTag::InteriorMin;
  return out;
}

NearMinimiserCertificate near_minimise(const ExpSumInstance& inst, double delta,
                                       const ExpSumConstants& k, const Tolerances& tol) {
  if (!(delta > 0 && delta < k.delta0)) {
    throw Error(ErrorCode::DeltaOutOfRange,
                "delta = " + std::to_string(delta) + " must lie in (0, " + std::to_string(k.delta0) + ")");
  }
  if (k.size != inst.size()) throw Error(ErrorCode::DimensionMismatch, "constants belong to another instance");
  NearMinimiserCertificate cert;
  cert.delta = delta;
  cert.log_radius_bound = k.log_N + std::log(std::log(1.0 / delta));
  cert.radius_bound = std::exp(cert.log_radius_bound);
  cert.y = Vector::Zero(inst.dim);

  const std::vector<int> support = inst.support();
  if (support.empty()) {
    cert.mode = CertificateMode::ExactMin;
    return cert;
  }
  double dmax = 0;
  for (int j : support) dmax = std::max(dmax, inst.coeffs[j]);
  std::vector<double> scaled(inst.size());
  for (int j = 0; j < inst.size(); ++j) scaled[j] = inst.coeffs[j] / dmax;
  const ExpSumInstance normalised = with_coeffs(inst, scaled);

  // Bands {delta^{N1^{k+1}} <= d < delta^{N1^k}} in log form.
  const double log_delta = std::log(delta);
  const double log_n1 = std::log(k.N1);
  auto threshold = [&](int band) { return -std::exp(band * log_n1 + std::log(-log_delta)); };
  int band = 0;
  for (; band <= inst.size(); ++band) {
    const double upper = threshold(band);
    const double lower = threshold(band + 1);
    bool empty = true;
    for (int j : support) {
      const double ld = std::log(scaled[j]);
      if (ld >= lower && ld < upper) {
        empty = false;
        break;
      }
    }
    if (empty) break;
  }
  cert.band = band;
  const double cut = threshold(band);
  for (int j : support) {
    if (std::log(scaled[j]) >= cut) cert.active.push_back(j);
  }

  // Near-minimiser of the active sum at accuracy delta^2.
  const TrichotomyResult cls = hull_classify(normalised, cert.active, tol);
  double face_value = 0;
  if (cls.tag == HullTag::InteriorMin) {
    const InteriorMinimum minimum = minimise_interior(normalised, cert.active, tol);
    cert.y = minimum.y;
    face_value = minimum.value;
  } else {
    Vector y0 = Vector::Zero(inst.dim);
    if (!cls.face.empty()) {
      const InteriorMinimum minimum = minimise_interior(normalised, cls.face, tol);
      y0 = minimum.y;
      face_value = minimum.value;
    }
    double small = kInf;
    for (int j : cert.active) small = std::min(small, scaled[j]);
    const double size = static_cast<double>(inst.size());
    cert.shift = (1.0 / k.c1) *
                 (2.0 * std::log(1.0 / delta) + std::log(size) + (k.C0 / k.c0) * std::log(size / small));
    cert.y = y0 - cert.shift * *cls.separator;
  }
  const bool whole = cert.active.size() == support.size();
  if (whole) {
    cert.mode = cls.tag == HullTag::InteriorMin ? CertificateMode::ExactMin : CertificateMode::ShiftedFace;
  } else {
    cert.mode = CertificateMode::Pigeonhole;
  }
  cert.value = evaluate(inst, cert.y);
  const double d2 = delta * delta;
  cert.upper_bound = dmax * (face_value + d2 + inst.size() * d2);
  return cert;
}

NearMinimiserCertificate near_minimise(const ExpSumInstance& inst, double delta, const Tolerances& tol) {
  return near_minimise(inst, delta, constants(inst, tol), tol);
}

HolderCheck holder_check(const ExpSumInstance& inst, const ExpSumConstants& k,
                         const std::vector<double>& d, const std::vector<double>& d_prime,
                         double coeff_bound, const Tolerances& tol) {
  const ExpSumInstance a = with_coeffs(inst, d);
  const ExpSumInstance b = with_coeffs(inst, d_prime);
  double dist = 0;
  for (int j = 0; j < inst.size(); ++j) {
    if (d[j] > coeff_bound || d_prime[j] > coeff_bound) {
      throw Error(ErrorCode::InvalidInput, "coefficients exceed the stated bound");
    }
    dist = std::max(dist, std::abs(d[j] - d_prime[j]));
  }
  HolderCheck out;
  out.lhs = std::abs(infimum(a, tol).value - infimum(b, tol).value);
  const double size = inst.size();
  const double factor = coeff_bound + size + 2.0 * coeff_bound * size / k.delta0;
  out.bound = dist == 0 ? 0.0 : factor * std::exp(k.alpha() * std::log(dist));
  return out;
}

HolderCheck holder_check(const ExpSumInstance& inst, const std::vector<double>& d,
                         const std::vector<double>& d_prime, double coeff_bound, const Tolerances& tol) {
  return holder_check(inst, constants(inst, tol), d, d_prime, coeff_bound, tol);
}

double oracle_infimum(const ExpSumInstance& inst, double radius, int grid) {
  const int dim = inst.dim;
  if (inst.support().empty()) return 0.0;
  if (dim == 0) return evaluate(inst, Vector::Zero(0));
  grid = std::max(grid, 1);
  auto clamp = [&](const Vector& y) {
    const double norm = y.norm();
    return norm > radius ? Vector(y * (radius / norm)) : y;
  };
  auto objective = [&](const Vector& y) { return log_evaluate(inst, clamp(y)); };

  struct Candidate {
    double value;
    Vector y;
  };
  std::vector<Candidate> best;
  best.push_back({objective(Vector::Zero(dim)), Vector::Zero(dim)});
  const double spacing = grid > 1 ? 2.0 * radius / (grid - 1) : 0.0;
  std::vector<int> index(dim, 0);
  std::uint64_t total = 1;
  for (int i = 0; i < dim; ++i) total *= static_cast<std::uint64_t>(grid);
  Vector y(dim);
  for (std::uint64_t count = 0; count < total; ++count) {
    std::uint64_t rest = count;
    for (int i = 0; i < dim; ++i) {
      y(i) = grid > 1 ? -radius + spacing * static_cast<double>(rest % grid) : 0.0;
      rest /= grid;
    }
    if (y.norm() > radius) continue;
    const double v = objective(y);
    if (best.size() < 4 || v < best.back().value) {
      best.push_back({v, y});
      std::stable_sort(best.begin(), best.end(),
                       [](const Candidate& a, const Candidate& b) { return a.value < b.value; });
      if (best.size() > 4) best.pop_back();
    }
  }
  double overall = best.front().value;
  for (const auto& start : best) {
    Vector x = start.y;
    double value = start.value;
    double step = std::max(spacing, 1e-2 * std::max(1.0, radius / 10));
    // Restart with shrinking simplices until the value stops moving.
    for (int round = 0; round < 12; ++round) {
      NelderMeadOptions options;
      options.initial_step = step;
      options.max_evaluations = 2000 * dim;
      options.x_tol = 1e-12 * std::max(1.0, x.norm());
      const NelderMeadResult res = nelder_mead(objective, x, options);
      const bool improved = res.value < value - 1e-15 * std::max(1.0, std::abs(value));
      if (res.value < value) {
        x = res.x;
        value = res.value;
      }
      step = std::max(step * 0.1, 1e-6);
      if (!improved && round > 2) break;
    }
    overall = std::min(overall, value);
  }
  return std::exp(overall);
}

}  // namespace blkit
