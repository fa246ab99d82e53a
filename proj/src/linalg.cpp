#include "blkit/linalg.hpp"

#include "blkit/error.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>

namespace blkit {

namespace {

double effective_scale(const Eigen::VectorXd& singular_values, double scale) {
  if (scale >= 0.0) return scale;
  return singular_values.size() > 0 ? singular_values(0) : 0.0;
}

}  // namespace

Subspace Subspace::span_of(const Matrix& vectors, double rel_tol) {
  return {orthonormal_range(vectors, rel_tol)};
}

int numerical_rank(const Matrix& a, double rel_tol, double scale) {
  if (a.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(a);
  const auto& sv = svd.singularValues();
  const double s = effective_scale(sv, scale);
  if (s <= 0.0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > rel_tol * s) ++rank;
  }
  return rank;
}

Matrix orthonormal_range(const Matrix& a, double rel_tol, double scale) {
  if (a.cols() == 0 || a.rows() == 0) return Matrix(a.rows(), 0);
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullU);
  const auto& sv = svd.singularValues();
  const double s = effective_scale(sv, scale);
  int rank = 0;
  if (s > 0.0) {
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
      if (sv(i) > rel_tol * s) ++rank;
    }
  }
  return svd.matrixU().leftCols(rank);
}

Matrix orthonormal_kernel(const Matrix& a, double rel_tol, double scale) {
  const Eigen::Index n = a.cols();
  if (a.rows() == 0) return Matrix::Identity(n, n);
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double s = effective_scale(sv, scale);
  int rank = 0;
  if (s > 0.0) {
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
      if (sv(i) > rel_tol * s) ++rank;
    }
  }
  return svd.matrixV().rightCols(n - rank);
}

Subspace subspace_sum(const Subspace& a, const Subspace& b, double rel_tol) {
  Matrix stacked(a.ambient(), a.dim() + b.dim());
  stacked << a.basis, b.basis;
  // Both bases are orthonormal, so unit scale is the natural reference.
  return {orthonormal_range(stacked, rel_tol, 1.0)};
}

Subspace orthogonal_complement(const Subspace& a) {
  const int n = a.ambient();
  if (a.dim() == 0) return Subspace::full(n);
  return {orthonormal_kernel(a.basis.transpose(), 1e-12, 1.0)};
}

Subspace subspace_intersection(const Subspace& a, const Subspace& b, double rel_tol) {
  return orthogonal_complement(
      subspace_sum(orthogonal_complement(a), orthogonal_complement(b), rel_tol));
}

double max_principal_sine(const Subspace& a, const Subspace& b) {
  if (a.dim() != b.dim() || a.ambient() != b.ambient()) return 1.0;
  if (a.dim() == 0) return 0.0;
  const Matrix residual = b.basis - a.basis * (a.basis.transpose() * b.basis);
  Eigen::JacobiSVD<Matrix> svd(residual);
  return std::min(1.0, svd.singularValues()(0));
}

bool same_subspace(const Subspace& a, const Subspace& b, double tol) {
  return a.dim() == b.dim() && max_principal_sine(a, b) <= tol;
}

double orthonormality_defect(const Matrix& basis) {
  if (basis.cols() == 0) return 0.0;
  const Matrix gram = basis.transpose() * basis;
  return (gram - Matrix::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
}

double log_det_spd(const Matrix& a) {
  Eigen::LLT<Matrix> llt(a);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::NotPositiveDefinite, "Cholesky factorisation failed");
  }
  const auto& l = llt.matrixLLT();
  double sum = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    const double diag = l(i, i);
    if (!(diag > 0.0)) {
      throw Error(ErrorCode::NotPositiveDefinite, "non-positive Cholesky pivot");
    }
    sum += std::log(diag);
  }
  return 2.0 * sum;
}

double symmetry_defect(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  return (a - a.transpose()).cwiseAbs().maxCoeff();
}

Matrix spd_sqrt(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(a);
  if (eig.eigenvalues().minCoeff() <= 0.0) {
    throw Error(ErrorCode::NotPositiveDefinite, "square root of a non-positive matrix");
  }
  return eig.eigenvectors() * eig.eigenvalues().cwiseSqrt().asDiagonal() *
         eig.eigenvectors().transpose();
}

Matrix spd_inverse_sqrt(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(a);
  if (eig.eigenvalues().minCoeff() <= 0.0) {
    throw Error(ErrorCode::NotPositiveDefinite, "inverse square root of a non-positive matrix");
  }
  return eig.eigenvectors() * eig.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
         eig.eigenvectors().transpose();
}

int skew_parameter_count(int k) { return k * (k - 1) / 2; }

Matrix skew_from_parameters(const Vector& params, int k) {
  Matrix s = Matrix::Zero(k, k);
  int idx = 0;
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) {
      s(i, j) = params(idx);
      s(j, i) = -params(idx);
      ++idx;
    }
  }
  return s;
}

Matrix rotation_from_parameters(const Vector& params, int k) {
  if (k <= 1) return Matrix::Identity(k, k);
  const Matrix s = skew_from_parameters(params, k);
  return s.exp();
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double result = 1.0;
  for (int i = 1; i <= k; ++i) {
    result = result * static_cast<double>(n - k + i) / static_cast<double>(i);
  }
  return std::round(result);
}

std::vector<std::vector<int>> combinations(int n, int k) {
  std::vector<std::vector<int>> out;
  if (k < 0 || k > n) return out;
  std::vector<int> current(k);
  for (int i = 0; i < k; ++i) current[i] = i;
  while (true) {
    out.push_back(current);
    int i = k - 1;
    while (i >= 0 && current[i] == n - k + i) --i;
    if (i < 0) break;
    ++current[i];
    for (int j = i + 1; j < k; ++j) current[j] = current[j - 1] + 1;
  }
  return out;
}

}  // namespace blkit
