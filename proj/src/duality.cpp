#include "blkit/duality.hpp"

#include "blkit/error.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace blkit {

namespace {

double reciprocal(double q) { return std::isinf(q) ? 0.0 : 1.0 / q; }

}  // namespace

int SubspaceDatum::ambient() const { return std::accumulate(factors.begin(), factors.end(), 0); }

SubspaceDatum make_subspace_datum(std::vector<int> factors, const Matrix& basis, std::vector<double> q,
                                  const Tolerances& tol) {
  if (factors.empty() || factors.size() != q.size())
    throw Error(ErrorCode::DimensionMismatch, "need one exponent per factor");
  int ambient = 0;
  for (int nj : factors) {
    if (nj < 1) throw Error(ErrorCode::DimensionMismatch, "factor dimensions must be positive");
    ambient += nj;
  }
  if (basis.rows() != ambient)
    throw Error(ErrorCode::DimensionMismatch, "basis has " + std::to_string(basis.rows()) +
                                                  " rows, product space has dimension " +
                                                  std::to_string(ambient));
  for (double qj : q) {
    if (!(qj >= 1.0)) throw Error(ErrorCode::ExponentOutOfRange, "exponents q_j must lie in [1, inf]");
  }
  SubspaceDatum sd{std::move(factors), Subspace::span_of(basis, tol.rank_tol), std::move(q)};
  if (sd.H.dim() == 0) throw Error(ErrorCode::InvalidInput, "H is the zero subspace");
  return sd;
}

double dual_exponent(double r) {
  if (std::isinf(r)) return 1.0;
  if (r == 1.0) return kInfiniteExponent;
  return r / (r - 1.0);
}

double beckner_constant(double r) {
  if (r == 1.0 || std::isinf(r)) return 1.0;
  const double rp = dual_exponent(r);
  return std::exp(0.5 * (std::log(r) / r - std::log(rp) / rp));
}

double beckner_product(const std::vector<int>& factors, const std::vector<double>& q) {
  double log_b = 0;
  for (std::size_t j = 0; j < factors.size(); ++j) log_b += factors[j] * std::log(beckner_constant(q[j]));
  return std::exp(log_b);
}

Subspace dual_subspace(const Subspace& h) { return orthogonal_complement(h); }

SubspaceDatum dual_datum(const SubspaceDatum& sd) {
  SubspaceDatum out{sd.factors, dual_subspace(sd.H), {}};
  for (double qj : sd.q) out.q.push_back(dual_exponent(qj));
  return out;
}

ParametrizedDatum subspace_datum(const SubspaceDatum& sd, const Tolerances& tol) {
  if (sd.H.dim() == 0) throw Error(ErrorCode::InvalidInput, "H is the zero subspace");
  ParametrizedDatum out;
  out.parametrization = sd.H.basis;
  out.datum.n = sd.H.dim();
  int row = 0;
  for (int j = 0; j < sd.m(); ++j) {
    const int nj = sd.factors[j];
    Matrix map = sd.H.basis.middleRows(row, nj);
    row += nj;
    if (numerical_rank(map, tol.rank_tol, 1.0) < nj)
      throw Error(ErrorCode::FactorNotSurjective,
                  "H does not project onto factor " + std::to_string(j));
    out.datum.maps.push_back(std::move(map));
    out.datum.p.push_back(reciprocal(sd.q[j]));
  }
  out.datum = validate(std::move(out.datum), tol);
  return out;
}

bool DualityCheck::passes(double dual_tol) const {
  return std::isfinite(lhs) && std::isfinite(rhs) && std::abs(lhs - rhs) <= dual_tol * rhs;
}

DualityCheck duality_check(const SubspaceDatum& sd, const LiebConfig& config) {
  DualityCheck out;
  out.B_q = beckner_product(sd.factors, sd.q);
  out.primal = bl_constant(subspace_datum(sd, config.tol).datum, config);
  out.dual = bl_constant(subspace_datum(dual_datum(sd), config.tol).datum, config);
  out.lhs = out.primal.constant;
  out.dual_constant = out.dual.constant;
  out.rhs = out.B_q * out.dual_constant;
  out.relative_gap = std::abs(out.lhs - out.rhs) / out.rhs;
  return out;
}

double young_constant(const std::array<double, 3>& q, int dim) {
  if (dim < 1) throw Error(ErrorCode::InvalidInput, "group dimension must be positive");
  double sum = 0;
  for (double qj : q) {
    if (!(qj >= 1.0)) throw Error(ErrorCode::ExponentsNotYoung, "exponents must lie in [1, inf]");
    sum += reciprocal(qj);
  }
  if (std::abs(sum - 2.0) > 1e-12)
    throw Error(ErrorCode::ExponentsNotYoung, "sum of 1/q_j is " + std::to_string(sum) + ", not 2");
  double log_a = 0;
  for (double qj : q) log_a += std::log(beckner_constant(qj));
  return std::exp(dim * log_a);
}

ConvolutionDatum convolution_datum(const std::vector<Matrix>& differentials, const std::vector<double>& p,
                                   const LiebConfig& config) {
  if (differentials.empty() || differentials.size() != p.size())
    throw Error(ErrorCode::DimensionMismatch, "need one exponent per parametrisation");
  const int n = static_cast<int>(differentials.front().rows());
  int total = 0;
  for (std::size_t j = 0; j < differentials.size(); ++j) {
    const Matrix& d = differentials[j];
    if (d.rows() != n) throw Error(ErrorCode::DimensionMismatch, "differentials must share the row count");
    if (d.cols() > n || numerical_rank(d, config.tol.rank_tol) < d.cols())
      throw Error(ErrorCode::RankDeficientParametrization,
                  "differential " + std::to_string(j) + " lacks full column rank");
    total += static_cast<int>(d.cols());
  }
  Matrix stacked(n, total);
  BLDatum adjoint;
  adjoint.n = n;
  int col = 0;
  for (std::size_t j = 0; j < differentials.size(); ++j) {
    const Matrix& d = differentials[j];
    stacked.middleCols(col, d.cols()) = d;
    col += static_cast<int>(d.cols());
    adjoint.maps.push_back(d.transpose());
    adjoint.p.push_back(p[j]);
  }
  ConvolutionDatum out;
  out.tangent = Subspace{orthonormal_kernel(stacked, config.tol.rank_tol)};
  out.normal = Subspace::span_of(stacked.transpose(), config.tol.rank_tol);
  out.adjoint = validate(std::move(adjoint), config.tol);
  out.report = bl_constant(out.adjoint, config);
  return out;
}

}  // namespace blkit
