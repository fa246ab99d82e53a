#pragma once

#include "blkit/config.hpp"
#include "blkit/datum.hpp"
#include "blkit/expsum.hpp"
#include "blkit/gaussian.hpp"
#include "blkit/linalg.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace blkit {

/// Column bookkeeping for det(sum_j p_j L_j^* A_j L_j) expanded over n-subsets
/// of the M = sum_j n_j columns.
struct LiebExpansion {
  int n = 0;
  int M = 0;
  Vector q;                                   // p_j repeated n_j times
  std::vector<std::vector<int>> family;       // n-subsets, lexicographic
  std::vector<Vector> u;                      // 1_I - q
  std::vector<std::pair<int, int>> index_map;  // k -> (j, l)
  std::vector<int> block_start;               // first column of block j
};

LiebExpansion build_expansion(const BLDatum& datum, std::size_t budget = 1000000);

struct RotationTuple {
  std::vector<Matrix> blocks;      // R_j
  std::vector<Vector> parameters;  // skew generators, R_j = exp(theta_j)
};

int rotation_parameter_count(const BLDatum& datum);
RotationTuple identity_rotations(const BLDatum& datum);
/// Splits a flat parameter vector into per-block generators.
RotationTuple rotations_from_parameters(const BLDatum& datum, const Vector& flat);

/// d_I = q_I det(V_I)^2 with V = [v_1 ... v_M], v_k = L_j^* R_j^* e_l.
Vector coefficients(const BLDatum& datum, const LiebExpansion& expansion, const RotationTuple& r);
/// The exponential sum sum_I d_I exp(<u_I, y>) on R^M.
ExpSumInstance expansion_instance(const LiebExpansion& expansion, const Vector& d);

/// (sum_I d_I exp(<u_I, y>))^{-1/2}
double blg_via_expansion(const BLDatum& datum, const LiebExpansion& expansion, const RotationTuple& r,
                         const Vector& y, const Tolerances& tol = {});
/// A_j = R_j^* diag(e^{y_k} : k in block j) R_j
GaussianTuple tuple_from_rotations(const BLDatum& datum, const LiebExpansion& expansion,
                                   const RotationTuple& r, const Vector& y);

struct OptimizerDiagnostics {
  int restarts = 0;
  int evaluations = 0;
  std::vector<double> restart_values;  // inner infimum at each restart's end point
  std::vector<Vector> restart_parameters;
  std::vector<bool> restart_attained;
  int agreeing = 0;     // restarts within agreement_tol of the best
  double spread = 0;    // max - min of restart values
  Vector best_parameters;
  double inner_value = 0;  // g at the best rotation tuple
  bool inner_attained = false;
  HullTag inner_tag = HullTag::InteriorMin;
};

struct ExtremiserCertificate {
  GaussianTuple tuple;
  double blg = 0;
  double log_blg = 0;
  double delta = 0;
  double delta_eff = 0;  // blg >= (1 - delta_eff) * constant
  double log_eccentricity_bound = 0;  // log of delta^{-N}
  bool eccentricity_ok = false;
  ExpSumConstants constants;
  NearMinimiserCertificate inner;
};

struct BLReport {
  double constant = 0;
  double log_constant = 0;
  FinitenessVerdict finiteness;
  double det_factor = 1;
  OptimizerDiagnostics diagnostics;
  std::optional<ExtremiserCertificate> certificate;
};

/// BL(L, p)^{-2} = det_factor * inf_R g(d(R)) on projection-normalised data,
/// searched with seeded Nelder-Mead restarts over the rotation generators.
BLReport bl_constant(const BLDatum& datum, const LiebConfig& config = {});

/// Near-minimiser of the inner sum at the best rotation, assembled into
/// gaussian blocks for the original maps.
ExtremiserCertificate near_extremiser(const BLDatum& datum, const BLReport& report, double delta,
                                      const LiebConfig& config = {});

struct HolderRow {
  double radius = 0;
  double max_difference = 0;  // max |BL^{-2}(L + dL) - BL^{-2}(L)|
  double ratio = 0;           // max_difference / radius^alpha
};

struct HolderTable {
  double base_value = 0;  // BL^{-2} at the datum
  double alpha = 0;
  double log_alpha = 0;
  std::vector<HolderRow> rows;
  bool bounded = false;
};

/// Perturbs the maps by seeded random dL with ||dL||_F = r (several samples
/// per radius) and tabulates the change of BL^{-2}.
HolderTable holder_experiment(const BLDatum& datum, const std::vector<double>& radii,
                              const LiebConfig& config = {}, int samples = 3);

}  // namespace blkit
