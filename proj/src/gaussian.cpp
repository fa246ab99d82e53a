#include "blkit/gaussian.hpp"

#include "blkit/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace blkit {

GaussianTuple make_gaussian_tuple(std::vector<Matrix> blocks, const Tolerances& tol) {
  GaussianTuple out;
  double log_ecc = 0.0;
  for (std::size_t j = 0; j < blocks.size(); ++j) {
    const Matrix& a = blocks[j];
    if (a.rows() != a.cols() || a.rows() == 0) {
      throw Error(ErrorCode::DimensionMismatch, "gaussian block " + std::to_string(j) + " is not square");
    }
    const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
    if (symmetry_defect(a) > tol.sym_tol * scale) {
      throw Error(ErrorCode::NotSymmetric, "gaussian block " + std::to_string(j) + " is not symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (a + a.transpose()), Eigen::EigenvaluesOnly);
    const double lo = eig.eigenvalues().minCoeff();
    const double hi = eig.eigenvalues().maxCoeff();
    if (!(lo > 0.0)) {
      throw Error(ErrorCode::NotPositiveDefinite,
                  "gaussian block " + std::to_string(j) + " has eigenvalue " + std::to_string(lo));
    }
    log_ecc = std::max({log_ecc, std::log(hi), -std::log(lo)});
  }
  out.blocks = std::move(blocks);
  out.log_eccentricity = log_ecc;
  out.eccentricity = std::exp(log_ecc);
  return out;
}

GaussianTuple identity_tuple(const BLDatum& datum) {
  std::vector<Matrix> blocks;
  for (int j = 0; j < datum.m(); ++j) {
    blocks.push_back(Matrix::Identity(datum.out_dim(j), datum.out_dim(j)));
  }
  return make_gaussian_tuple(std::move(blocks));
}

GaussianTuple scaled_tuple(const GaussianTuple& a, double lambda) {
  std::vector<Matrix> blocks;
  for (const auto& block : a.blocks) blocks.push_back(lambda * block);
  return make_gaussian_tuple(std::move(blocks), Tolerances{});
}

namespace {

void check_shapes(const BLDatum& datum, const GaussianTuple& a) {
  if (a.m() != datum.m()) {
    throw Error(ErrorCode::DimensionMismatch, "gaussian tuple has " + std::to_string(a.m()) +
                                                  " blocks for " + std::to_string(datum.m()) + " maps");
  }
  for (int j = 0; j < datum.m(); ++j) {
    if (a.blocks[j].rows() != datum.out_dim(j)) {
      throw Error(ErrorCode::DimensionMismatch, "block " + std::to_string(j) + " has the wrong size");
    }
  }
}

}  // namespace

Matrix gaussian_quadratic_form(const BLDatum& datum, const GaussianTuple& a) {
  check_shapes(datum, a);
  Matrix form = Matrix::Zero(datum.n, datum.n);
  for (int j = 0; j < datum.m(); ++j) {
    form += datum.p[j] * datum.maps[j].transpose() * a.blocks[j] * datum.maps[j];
  }
  return 0.5 * (form + form.transpose());
}

double log_blg(const BLDatum& datum, const GaussianTuple& a, const Tolerances& tol) {
  const Matrix form = gaussian_quadratic_form(datum, a);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(form, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (!(hi > 0.0) || lo <= tol.det_tol * hi) {
    throw Error(ErrorCode::SingularDenominator,
                "sum_j p_j L_j^* A_j L_j is singular (eigenvalue ratio " + std::to_string(lo / hi) + ")");
  }
  double numerator = 0.0;
  for (int j = 0; j < datum.m(); ++j) {
    if (datum.p[j] != 0.0) numerator += 0.5 * datum.p[j] * log_det_spd(a.blocks[j]);
  }
  double log_det_form = 0.0;
  try {
    log_det_form = log_det_spd(form);
  } catch (const Error&) {
    throw Error(ErrorCode::SingularDenominator, "Cholesky of the quadratic form failed");
  }
  return numerator - 0.5 * log_det_form;
}

double blg(const BLDatum& datum, const GaussianTuple& a, const Tolerances& tol) {
  return std::exp(log_blg(datum, a, tol));
}

double scale_invariance_check(const BLDatum& datum, const GaussianTuple& a, double lambda,
                              const Tolerances& tol) {
  const double base = log_blg(datum, a, tol);
  const double moved = log_blg(datum, scaled_tuple(a, lambda), tol);
  return std::abs(std::expm1(moved - base));
}

BallCheck ball_inequality_check(const BLDatum& datum, const GaussianTuple& a,
                                const GaussianTuple& b, const Tolerances& tol) {
  check_shapes(datum, a);
  check_shapes(datum, b);
  std::vector<Matrix> product;
  std::vector<Matrix> convolution;
  for (int j = 0; j < datum.m(); ++j) {
    product.push_back(a.blocks[j] + b.blocks[j]);
    const Matrix sum_inv = a.blocks[j].inverse() + b.blocks[j].inverse();
    Matrix conv = sum_inv.inverse();
    convolution.push_back(0.5 * (conv + conv.transpose()));
  }
  Tolerances loose = tol;
  loose.sym_tol = std::max(tol.sym_tol, 1e-8);
  const GaussianTuple h0 = make_gaussian_tuple(std::move(product), loose);
  const GaussianTuple fg = make_gaussian_tuple(std::move(convolution), loose);
  BallCheck out;
  out.lhs = std::exp(log_blg(datum, a, tol) + log_blg(datum, b, tol));
  out.rhs = std::exp(log_blg(datum, h0, tol) + log_blg(datum, fg, tol));
  return out;
}

}  // namespace blkit
