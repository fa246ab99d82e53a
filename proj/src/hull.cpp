#include "blkit/hull.hpp"

#include "blkit/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace blkit {

namespace {

constexpr double kPivotTol = 1e-12;

void pivot(Matrix& t, std::vector<int>& basis, int row, int col) {
  t.row(row) /= t(row, col);
  for (int i = 0; i < t.rows(); ++i) {
    if (i != row && t(i, col) != 0.0) t.row(i) -= t(i, col) * t.row(row);
  }
  basis[row] = col;
}

// Runs simplex iterations on the first `rows` constraint rows with the
// objective in the last row. Returns false when unbounded.
bool run_simplex(Matrix& t, std::vector<int>& basis, int rows, int entering_limit) {
  const int rhs = static_cast<int>(t.cols()) - 1;
  const int obj = static_cast<int>(t.rows()) - 1;
  const int max_iters = 100 * (rows + entering_limit + 1);
  for (int iter = 0; iter < max_iters; ++iter) {
    int enter = -1;
    for (int j = 0; j < entering_limit; ++j) {
      if (t(obj, j) < -1e-12) {
        enter = j;
        break;
      }
    }
    if (enter < 0) return true;
    int leave = -1;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < rows; ++i) {
      if (t(i, enter) > kPivotTol) {
        const double ratio = std::max(0.0, t(i, rhs)) / t(i, enter);
        if (ratio < best - 1e-15 || (std::abs(ratio - best) <= 1e-15 && basis[i] < basis[leave])) {
          best = ratio;
          leave = i;
        }
      }
    }
    if (leave < 0) return false;
    pivot(t, basis, leave, enter);
  }
  throw Error(ErrorCode::DegenerateLP, "simplex iteration limit reached");
}

}  // namespace

LPResult solve_lp(const Matrix& a, const Vector& b, const Vector& c, double feas_tol) {
  const int m = static_cast<int>(a.rows());
  const int n = static_cast<int>(a.cols());
  if (b.size() != m || c.size() != n) throw Error(ErrorCode::DimensionMismatch, "LP shapes disagree");

  // Columns: n structural, m artificial, then the right-hand side.
  Matrix t = Matrix::Zero(m + 1, n + m + 1);
  std::vector<int> basis(m);
  for (int i = 0; i < m; ++i) {
    const double sign = b(i) < 0 ? -1.0 : 1.0;
    t.row(i).head(n) = sign * a.row(i);
    t(i, n + i) = 1.0;
    t(i, n + m) = sign * b(i);
    basis[i] = n + i;
  }
  for (int i = 0; i < m; ++i) t.row(m) -= t.row(i);
  t.row(m).segment(n, m).setZero();

  run_simplex(t, basis, m, n + m);
  const double scale = 1.0 + b.cwiseAbs().maxCoeff();
  LPResult result;
  if (-t(m, n + m) > feas_tol * scale) return result;

  // Drive artificial variables out of the basis; rows that cannot be pivoted
  // are redundant and get dropped.
  std::vector<int> keep;
  for (int i = 0; i < m; ++i) {
    if (basis[i] >= n) {
      int col = -1;
      for (int j = 0; j < n; ++j) {
        if (std::abs(t(i, j)) > 1e-9) {
          col = j;
          break;
        }
      }
      if (col >= 0) pivot(t, basis, i, col);
    }
    if (basis[i] < n) keep.push_back(i);
  }
  const int rows = static_cast<int>(keep.size());
  Matrix t2 = Matrix::Zero(rows + 1, n + 1);
  std::vector<int> basis2(rows);
  for (int r = 0; r < rows; ++r) {
    t2.row(r).head(n) = t.row(keep[r]).head(n);
    t2(r, n) = std::max(0.0, t(keep[r], n + m));
    basis2[r] = basis[keep[r]];
  }
  t2.row(rows).head(n) = -c.transpose();
  for (int r = 0; r < rows; ++r) t2.row(rows) += c(basis2[r]) * t2.row(r);

  result.status = run_simplex(t2, basis2, rows, n) ? LPStatus::Optimal : LPStatus::Unbounded;
  result.x = Vector::Zero(n);
  for (int r = 0; r < rows; ++r) result.x(basis2[r]) = t2(r, n);
  result.value = c.dot(result.x);
  return result;
}

MinNormPoint min_norm_point(const Matrix& points) {
  const int k = static_cast<int>(points.cols());
  const int dim = static_cast<int>(points.rows());
  if (k == 0) throw Error(ErrorCode::DimensionMismatch, "min-norm point of an empty set");
  const double scale = std::max(1.0, points.colwise().squaredNorm().maxCoeff());
  const double z1 = 1e-12 * scale;
  const double z2 = 1e-10;

  Vector lambda = Vector::Zero(k);
  std::vector<int> active;
  {
    int start = 0;
    points.colwise().squaredNorm().minCoeff(&start);
    active.push_back(start);
    lambda(start) = 1.0;
  }
  Vector x = points * lambda;

  for (int outer = 0; outer < 50 * (k + dim + 1); ++outer) {
    Eigen::RowVectorXd dots = x.transpose() * points;
    int j = 0;
    const double lowest = dots.minCoeff(&j);
    if (lowest > x.squaredNorm() - z1) break;
    if (std::find(active.begin(), active.end(), j) != active.end()) break;
    active.push_back(j);

    for (int inner = 0; inner < 2 * k + 2; ++inner) {
      // Affine minimum-norm point of the active columns.
      const int s = static_cast<int>(active.size());
      Matrix system = Matrix::Zero(s + 1, s + 1);
      Vector rhs = Vector::Zero(s + 1);
      for (int a = 0; a < s; ++a) {
        for (int b = 0; b < s; ++b) system(a, b) = points.col(active[a]).dot(points.col(active[b]));
        system(a, s) = 1.0;
        system(s, a) = 1.0;
      }
      rhs(s) = 1.0;
      const Vector sol = system.completeOrthogonalDecomposition().solve(rhs);
      Vector mu = sol.head(s);
      const double sum = mu.sum();
      if (std::abs(sum) > 0) mu /= sum;

      if (mu.minCoeff() > z2) {
        lambda.setZero();
        for (int a = 0; a < s; ++a) lambda(active[a]) = mu(a);
        break;
      }
      double theta = 1.0;
      for (int a = 0; a < s; ++a) {
        const double current = lambda(active[a]);
        if (mu(a) <= z2 && current - mu(a) > 0) theta = std::min(theta, current / (current - mu(a)));
      }
      std::vector<int> survivors;
      for (int a = 0; a < s; ++a) {
        const double updated = (1.0 - theta) * lambda(active[a]) + theta * mu(a);
        lambda(active[a]) = updated;
        if (updated > z2) {
          survivors.push_back(active[a]);
        } else {
          lambda(active[a]) = 0.0;
        }
      }
      if (survivors.empty()) {
        survivors.push_back(active.back());
        lambda(active.back()) = 1.0;
      }
      active = std::move(survivors);
      const double total = lambda.sum();
      lambda /= total;
    }
    const Vector next = points * lambda;
    if (next.squaredNorm() >= x.squaredNorm() - 1e-15 * scale && outer > 0) {
      x = next;
      break;
    }
    x = next;
  }
  MinNormPoint out;
  out.point = x;
  out.weights = lambda;
  out.distance = x.norm();
  return out;
}

double relative_inradius(const Matrix& points, double rel_tol) {
  const Matrix basis = orthonormal_range(points, rel_tol, std::max(1.0, points.norm()));
  const int r = static_cast<int>(basis.cols());
  if (r == 0) return std::numeric_limits<double>::infinity();
  const Matrix coords = basis.transpose() * points;  // r x k
  const int k = static_cast<int>(coords.cols());
  const double scale = std::max(1.0, coords.colwise().norm().maxCoeff());
  double best = std::numeric_limits<double>::infinity();
  for (const auto& subset : combinations(k, r)) {
    Matrix face(r, r);
    for (int a = 0; a < r; ++a) face.col(a) = coords.col(subset[a]);
    Eigen::FullPivLU<Matrix> lu(face.transpose());
    if (lu.rank() < r) continue;
    // Hyperplane <normal, x> = 1 through the chosen points.
    const Vector normal = lu.solve(Vector::Ones(r));
    if (!normal.allFinite()) continue;
    const Eigen::RowVectorXd values = normal.transpose() * coords;
    if (values.maxCoeff() <= 1.0 + 1e-9 * scale) best = std::min(best, 1.0 / normal.norm());
  }
  return best;
}

double flat_distance(const Matrix& affine, const Matrix& linear) {
  const Vector origin = affine.col(0);
  Matrix directions(origin.size(), affine.cols() - 1 + linear.cols());
  for (int a = 1; a < affine.cols(); ++a) directions.col(a - 1) = affine.col(a) - origin;
  if (linear.cols() > 0) directions.rightCols(linear.cols()) = linear;
  if (directions.cols() == 0) return origin.norm();
  const Vector coeffs = directions.completeOrthogonalDecomposition().solve(origin);
  return (origin - directions * coeffs).norm();
}

}  // namespace blkit
