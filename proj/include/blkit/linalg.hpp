#pragma once

#include <Eigen/Dense>

#include <vector>

namespace blkit {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// A linear subspace of R^ambient, stored as an orthonormal column basis.
struct Subspace {
  Matrix basis;

  int ambient() const { return static_cast<int>(basis.rows()); }
  int dim() const { return static_cast<int>(basis.cols()); }

  static Subspace zero(int ambient) { return {Matrix(ambient, 0)}; }
  static Subspace full(int ambient) { return {Matrix::Identity(ambient, ambient)}; }
  /// Orthonormalised column span of `vectors`.
  static Subspace span_of(const Matrix& vectors, double rel_tol = 1e-9);
};

/// Number of singular values above rel_tol * scale. A negative scale means
/// "relative to the largest singular value of a".
int numerical_rank(const Matrix& a, double rel_tol, double scale = -1.0);

Matrix orthonormal_range(const Matrix& a, double rel_tol, double scale = -1.0);
Matrix orthonormal_kernel(const Matrix& a, double rel_tol, double scale = -1.0);

Subspace subspace_sum(const Subspace& a, const Subspace& b, double rel_tol);
Subspace subspace_intersection(const Subspace& a, const Subspace& b, double rel_tol);
Subspace orthogonal_complement(const Subspace& a);

/// Sine of the largest principal angle between two subspaces of equal
/// dimension; 1 when dimensions differ.
double max_principal_sine(const Subspace& a, const Subspace& b);
bool same_subspace(const Subspace& a, const Subspace& b, double tol);

/// Largest deviation of basis^T basis from the identity.
double orthonormality_defect(const Matrix& basis);

/// log det of a symmetric positive-definite matrix (Cholesky); throws
/// NotPositiveDefinite when the factorisation fails.
double log_det_spd(const Matrix& a);
double symmetry_defect(const Matrix& a);

/// Symmetric square root, and inverse square root, of an SPD matrix.
Matrix spd_sqrt(const Matrix& a);
Matrix spd_inverse_sqrt(const Matrix& a);

int skew_parameter_count(int k);
/// Skew-symmetric k x k generator filled row-wise above the diagonal.
Matrix skew_from_parameters(const Vector& params, int k);
/// exp of the skew generator: a rotation with determinant +1.
Matrix rotation_from_parameters(const Vector& params, int k);

double binomial(int n, int k);
/// All k-element subsets of {0..n-1} in lexicographic order.
std::vector<std::vector<int>> combinations(int n, int k);

}  // namespace blkit
