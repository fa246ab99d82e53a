#include "blkit/datum.hpp"

#include "blkit/error.hpp"

#include <cmath>
#include <string>

namespace blkit {

int BLDatum::total_dim() const {
  int total = 0;
  for (const auto& map : maps) total += static_cast<int>(map.rows());
  return total;
}

BLDatum validate(BLDatum datum, const Tolerances& tol) {
  if (datum.n < 1) throw Error(ErrorCode::DimensionMismatch, "ambient dimension must be positive");
  if (datum.maps.empty()) throw Error(ErrorCode::DimensionMismatch, "datum needs at least one map");
  if (datum.p.size() != datum.maps.size()) {
    throw Error(ErrorCode::DimensionMismatch,
                std::to_string(datum.maps.size()) + " maps but " + std::to_string(datum.p.size()) +
                    " exponents");
  }
  datum.min_singular_values.clear();
  for (int j = 0; j < datum.m(); ++j) {
    const Matrix& map = datum.maps[j];
    if (map.cols() != datum.n || map.rows() < 1 || map.rows() > datum.n) {
      throw Error(ErrorCode::DimensionMismatch,
                  "map " + std::to_string(j) + " is " + std::to_string(map.rows()) + "x" +
                      std::to_string(map.cols()) + " for ambient dimension " +
                      std::to_string(datum.n));
    }
    if (!map.allFinite()) throw Error(ErrorCode::InvalidInput, "map has non-finite entries");
    const double pj = datum.p[j];
    if (!(pj >= 0.0 && pj <= 1.0)) {
      throw Error(ErrorCode::ExponentOutOfRange,
                  "exponent " + std::to_string(j) + " = " + std::to_string(pj) + " not in [0,1]");
    }
    Eigen::JacobiSVD<Matrix> svd(map);
    const auto& sv = svd.singularValues();
    const double largest = sv(0);
    const double smallest = sv(sv.size() - 1);
    if (!(largest > 0.0) || smallest <= tol.rank_tol * largest) {
      throw Error(ErrorCode::NotSurjective,
                  "map " + std::to_string(j) + " has smallest singular value " +
                      std::to_string(smallest));
    }
    datum.min_singular_values.push_back(smallest);
  }
  return datum;
}

double scaling_condition(const BLDatum& datum) {
  double sum = 0.0;
  for (int j = 0; j < datum.m(); ++j) sum += datum.p[j] * datum.out_dim(j);
  return static_cast<double>(datum.n) - sum;
}

ProjectionNormalization projection_normalize(const BLDatum& datum, const Tolerances& tol) {
  ProjectionNormalization out;
  out.datum = datum;
  out.datum.min_singular_values.clear();
  for (int j = 0; j < datum.m(); ++j) {
    const Matrix gram = datum.maps[j] * datum.maps[j].transpose();
    Eigen::SelfAdjointEigenSolver<Matrix> eig(gram);
    const auto& ev = eig.eigenvalues();
    if (ev.minCoeff() <= tol.rank_tol * tol.rank_tol * ev.maxCoeff()) {
      throw Error(ErrorCode::NotSurjective, "L_j L_j^* is singular for map " + std::to_string(j));
    }
    const Matrix& q = eig.eigenvectors();
    Matrix c = q * ev.cwiseSqrt().asDiagonal() * q.transpose();
    Matrix c_inv = q * ev.cwiseSqrt().cwiseInverse().asDiagonal() * q.transpose();
    out.datum.maps[j] = c_inv * datum.maps[j];
    out.log_det_factor += datum.p[j] * ev.array().log().sum();
    out.c.push_back(std::move(c));
    out.c_inverse.push_back(std::move(c_inv));
    out.datum.min_singular_values.push_back(1.0);
  }
  out.det_factor = std::exp(out.log_det_factor);
  return out;
}

std::vector<Matrix> pull_back_blocks(const ProjectionNormalization& norm,
                                     const std::vector<Matrix>& normalized_blocks) {
  std::vector<Matrix> out;
  out.reserve(normalized_blocks.size());
  for (std::size_t j = 0; j < normalized_blocks.size(); ++j) {
    Matrix a = norm.c_inverse[j] * normalized_blocks[j] * norm.c_inverse[j];
    out.push_back(0.5 * (a + a.transpose()));
  }
  return out;
}

namespace {

bool contains(const std::vector<Subspace>& set, const Subspace& s, double tol) {
  for (const auto& member : set) {
    if (same_subspace(member, s, tol)) return true;
  }
  return false;
}

}  // namespace

std::vector<Subspace> kernel_lattice(const BLDatum& datum, int depth, const Tolerances& tol) {
  std::vector<Subspace> lattice;
  for (const auto& map : datum.maps) {
    Subspace kernel{orthonormal_kernel(map, tol.rank_tol)};
    if (kernel.dim() > 0 && !contains(lattice, kernel, tol.dedup_tol)) {
      lattice.push_back(std::move(kernel));
    }
  }
  for (int round = 0; round < depth; ++round) {
    const std::size_t previous = lattice.size();
    std::vector<Subspace> next = lattice;
    for (std::size_t a = 0; a < previous; ++a) {
      for (std::size_t b = a + 1; b < previous; ++b) {
        Subspace sum = subspace_sum(lattice[a], lattice[b], tol.rank_tol);
        if (sum.dim() > 0 && !contains(next, sum, tol.dedup_tol)) next.push_back(std::move(sum));
        Subspace meet = subspace_intersection(lattice[a], lattice[b], tol.rank_tol);
        if (meet.dim() > 0 && !contains(next, meet, tol.dedup_tol)) next.push_back(std::move(meet));
      }
    }
    const bool grew = next.size() > previous;
    lattice = std::move(next);
    if (!grew) break;
  }
  Subspace whole = Subspace::full(datum.n);
  if (!contains(lattice, whole, tol.dedup_tol)) lattice.push_back(std::move(whole));
  return lattice;
}

std::string_view to_string(FinitenessTag tag) {
  switch (tag) {
    case FinitenessTag::InfiniteScalingFails: return "Infinite-ScalingFails";
    case FinitenessTag::InfiniteSubspaceWitness: return "Infinite-SubspaceWitness";
    case FinitenessTag::FiniteNumerical: return "Finite-Numerical";
    case FinitenessTag::Inconclusive: return "Inconclusive";
  }
  return "Unknown";
}

double transversality_defect(const BLDatum& datum, const Subspace& v, const Tolerances& tol) {
  double weighted = 0.0;
  for (int j = 0; j < datum.m(); ++j) {
    if (v.dim() == 0) break;
    const double scale = Eigen::JacobiSVD<Matrix>(datum.maps[j]).singularValues()(0);
    const int image_dim = numerical_rank(datum.maps[j] * v.basis, tol.rank_tol, scale);
    weighted += datum.p[j] * image_dim;
  }
  return static_cast<double>(v.dim()) - weighted;
}

FinitenessVerdict transversality_check(const BLDatum& datum,
                                       const std::vector<Subspace>& candidates,
                                       const Tolerances& tol) {
  FinitenessVerdict verdict;
  verdict.scaling_residual = scaling_condition(datum);
  if (std::abs(verdict.scaling_residual) > tol.scaling_tol * datum.n) {
    verdict.tag = FinitenessTag::InfiniteScalingFails;
    return verdict;
  }
  double worst = tol.rank_tol;
  for (const auto& candidate : candidates) {
    if (candidate.ambient() != datum.n) {
      throw Error(ErrorCode::DimensionMismatch, "candidate subspace lives in the wrong space");
    }
    const double defect = transversality_defect(datum, candidate, tol);
    if (defect > worst) {
      worst = defect;
      verdict.witness = candidate;
    }
  }
  verdict.tag = verdict.witness ? FinitenessTag::InfiniteSubspaceWitness : FinitenessTag::Inconclusive;
  return verdict;
}

FinitenessVerdict classify_finiteness(const BLDatum& datum, int depth, const Tolerances& tol) {
  return transversality_check(datum, kernel_lattice(datum, depth, tol), tol);
}

}  // namespace blkit
