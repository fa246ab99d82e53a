#pragma once

#include "blkit/config.hpp"
#include "blkit/linalg.hpp"

#include <optional>
#include <string_view>
#include <vector>

namespace blkit {

/// A Brascamp-Lieb datum: m linear maps R^n -> R^{n_j} with exponents p_j.
struct BLDatum {
  int n = 0;
  std::vector<Matrix> maps;
  std::vector<double> p;
  /// Filled in by validate(): smallest singular value of each map.
  std::vector<double> min_singular_values;

  int m() const { return static_cast<int>(maps.size()); }
  int out_dim(int j) const { return static_cast<int>(maps[j].rows()); }
  /// Sum of the target dimensions n_j.
  int total_dim() const;
};

/// Checks shapes, exponent range and surjectivity of every map.
BLDatum validate(BLDatum datum, const Tolerances& tol = {});

/// n - sum_j p_j n_j.
double scaling_condition(const BLDatum& datum);

struct ProjectionNormalization {
  BLDatum datum;          // maps C_j^{-1} L_j, each with orthonormal rows
  double det_factor = 1;  // prod_j det(L_j L_j^*)^{p_j}
  double log_det_factor = 0;
  std::vector<Matrix> c;          // C_j = (L_j L_j^*)^{1/2}
  std::vector<Matrix> c_inverse;  // C_j^{-1}
};

ProjectionNormalization projection_normalize(const BLDatum& datum, const Tolerances& tol = {});

/// Pulls gaussian blocks for the normalised datum back to the original maps:
/// A_j = C_j^{-1} A'_j C_j^{-1}.
std::vector<Matrix> pull_back_blocks(const ProjectionNormalization& norm,
                                     const std::vector<Matrix>& normalized_blocks);

/// Kernels of the maps closed under pairwise sum and intersection, `depth`
/// rounds deep. The zero subspace is dropped and R^n is always present.
std::vector<Subspace> kernel_lattice(const BLDatum& datum, int depth, const Tolerances& tol = {});

enum class FinitenessTag {
  InfiniteScalingFails,
  InfiniteSubspaceWitness,
  FiniteNumerical,
  Inconclusive,
};

std::string_view to_string(FinitenessTag tag);

struct FinitenessVerdict {
  FinitenessTag tag = FinitenessTag::Inconclusive;
  std::optional<Subspace> witness;
  double scaling_residual = 0.0;
  std::optional<double> numeric_lower_bound;
};

/// dim V - sum_j p_j dim(L_j V); positive values violate transversality.
double transversality_defect(const BLDatum& datum, const Subspace& v, const Tolerances& tol = {});

/// Scaling first, then each candidate subspace. Never reports a finite
/// constant on its own: the best it can say is Inconclusive.
FinitenessVerdict transversality_check(const BLDatum& datum,
                                       const std::vector<Subspace>& candidates,
                                       const Tolerances& tol = {});

/// kernel_lattice followed by transversality_check.
FinitenessVerdict classify_finiteness(const BLDatum& datum, int depth = 2,
                                      const Tolerances& tol = {});

}  // namespace blkit
