#pragma once

#include "blkit/config.hpp"
#include "blkit/linalg.hpp"

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace blkit {

/// f(y) = sum_j d_j exp(<u_j, y>) over a fixed finite family of exponents.
struct ExpSumInstance {
  int dim = 0;
  std::vector<Vector> exponents;
  std::vector<double> coeffs;

  int size() const { return static_cast<int>(exponents.size()); }
  /// Indices with d_j > 0.
  std::vector<int> support() const;
};

/// Checks dimensions, nonnegative coefficients and pairwise-distinct exponents.
ExpSumInstance make_instance(int dim, std::vector<Vector> exponents, std::vector<double> coeffs,
                             const Tolerances& tol = {});
/// Same exponents, new coefficients.
ExpSumInstance with_coeffs(const ExpSumInstance& inst, std::vector<double> coeffs);

double log_evaluate(const ExpSumInstance& inst, const Vector& y);
double evaluate(const ExpSumInstance& inst, const Vector& y);

enum class ConstantsMode { Exact, Bound };

struct ExpSumConstants {
  ConstantsMode mode = ConstantsMode::Exact;
  int size = 0;  // |J|
  double C0 = 1;
  double c0 = 1;
  double c1 = 1;
  double C1 = 4;
  double N1 = 16;
  double N = 1;
  double log_N = 0;
  double delta0 = 1;
  double log_alpha = 0;  // alpha = 1 / (1 + C0 N)
  double alpha() const;
};

/// Exact per-instance constants by enumeration of every subset of J.
ExpSumConstants constants(const ExpSumInstance& inst, const Tolerances& tol = {});

/// Lower bounds for c0 and c1 that avoid the subset enumeration: the smallest
/// distance from 0 to a flat aff(T) + span(U) over small index sets T, U that
/// misses the origin. Every facet and every separation margin is such a
/// distance, so the result is valid for both constants.
ExpSumConstants bound_constants(const ExpSumInstance& inst, const Tolerances& tol = {},
                                std::uint64_t pair_budget = 20000000);

/// Exact constants when |J| fits the subset budget, bound constants otherwise.
ExpSumConstants constants_auto(const ExpSumInstance& inst, const Tolerances& tol = {});

enum class HullTag { InteriorMin, BoundaryInf, OutsideZero };
std::string_view to_string(HullTag tag);

struct TrichotomyResult {
  HullTag tag = HullTag::InteriorMin;
  std::vector<int> face;           // I_1, indices into the instance
  std::optional<Vector> separator;  // <v, u_j> = 0 on I_1 and >= margin off it
  double margin = 0;
  double min_weight = 0;  // largest achievable minimum barycentric weight
};

TrichotomyResult hull_classify(const ExpSumInstance& inst, const std::vector<int>& subset,
                               const Tolerances& tol = {});

struct InteriorMinimum {
  Vector y;
  double value = 0;
  double log_value = 0;
  int iterations = 0;
  double inradius = 1;      // local constant for this subset
  double radius_bound = 0;  // (1 / inradius) log(|I| / Delta)
};

/// Newton on log f restricted to span K(I), started at 0.
InteriorMinimum minimise_interior(const ExpSumInstance& inst, const std::vector<int>& subset,
                                  const Tolerances& tol = {});

struct Infimum {
  double value = 0;
  double log_value = 0;
  bool attained = false;
  HullTag tag = HullTag::InteriorMin;
  std::vector<int> face;  // indices where the infimum is realised
  Vector minimiser;       // minimiser of the face sum (zero vector if face empty)
};

Infimum infimum(const ExpSumInstance& inst, const Tolerances& tol = {});

enum class CertificateMode { ExactMin, ShiftedFace, Pigeonhole };
std::string_view to_string(CertificateMode mode);

struct NearMinimiserCertificate {
  Vector y;
  double value = 0;
  double delta = 0;
  double radius_bound = 0;
  double log_radius_bound = 0;
  CertificateMode mode = CertificateMode::ExactMin;
  double upper_bound = 0;  // max d * (g_{face} + delta^2 + |J| delta^2)
  int band = 0;            // first empty coefficient band
  std::vector<int> active;  // I'
  double shift = 0;        // s, zero when no shift was needed
};

NearMinimiserCertificate near_minimise(const ExpSumInstance& inst, double delta,
                                       const ExpSumConstants& k, const Tolerances& tol = {});
NearMinimiserCertificate near_minimise(const ExpSumInstance& inst, double delta,
                                       const Tolerances& tol = {});

struct HolderCheck {
  double lhs = 0;
  double bound = 0;
};

/// |g(d) - g(d')| against (D + |J| + 2 D |J| / delta0) ||d - d'||_inf^alpha.
HolderCheck holder_check(const ExpSumInstance& inst, const std::vector<double>& d,
                         const std::vector<double>& d_prime, double coeff_bound,
                         const Tolerances& tol = {});
HolderCheck holder_check(const ExpSumInstance& inst, const ExpSumConstants& k,
                         const std::vector<double>& d, const std::vector<double>& d_prime,
                         double coeff_bound, const Tolerances& tol = {});

/// Brute force: grid over the ball of the given radius, then simplex
/// refinement from the best grid points. An upper bound on the infimum.
double oracle_infimum(const ExpSumInstance& inst, double radius, int grid);

}  // namespace blkit
