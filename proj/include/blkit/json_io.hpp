#pragma once

#include "blkit/config.hpp"
#include "blkit/datum.hpp"
#include "blkit/duality.hpp"
#include "blkit/expsum.hpp"
#include "blkit/lieb.hpp"
#include "blkit/nonlinear.hpp"
#include "blkit/poly.hpp"
#include "blkit/quadrature.hpp"

#include <json.hpp>

namespace blkit::io {

using Json = nlohmann::json;

/// Finite values as numbers; inf, -inf and nan as strings.
Json number(double x);
/// Accepts plain numbers and the strings "inf", "-inf", "nan".
double read_number(const Json& j);

Json matrix_json(const Matrix& m);  // list of rows
Matrix read_matrix(const Json& j);
Json vector_json(const Vector& v);
Vector read_vector(const Json& j);

/// {"n": int, "maps": [matrix, ...], "p": [...]}
BLDatum read_datum(const Json& j, const Tolerances& tol = {});
Json datum_json(const BLDatum& d);

/// {"dim": int, "exponents": [[...], ...], "coeffs": [...]}
ExpSumInstance read_instance(const Json& j, const Tolerances& tol = {});

/// {"factors": [n_1, ...], "H_basis": [[...], ...], "q": [...]}, basis vectors as rows.
SubspaceDatum read_subspace_datum(const Json& j, const Tolerances& tol = {});

/// {"n": int, "outputs": [[{"exps": [...], "coef": c}, ...], ...]}
PolyMap read_poly_map(const Json& j);
Json poly_map_json(const PolyMap& map);

/// {"maps": [PolyMap, ...], "p": [...], "x0": [...], "delta_schedule": [...]} plus optional
/// "epsilon", "gamma", "random_inputs", "certificate_delta", "noise_tol".
NonlinearProblem read_problem(const Json& j);

/// Everything a run depends on besides its input file.
struct RunConfig {
  LiebConfig lieb;
  QuadratureConfig quadrature;
  double epsilon = 0.05;
  double gamma = 0.1;
  double dual_tol = 1e-3;
  std::optional<double> delta;    // near-minimiser accuracy for expsum-min
  std::optional<double> certify;  // near-extremiser accuracy for compute
};

Json config_json(const RunConfig& c);
/// Overrides the fields present in j; unknown keys are rejected.
void apply_config(RunConfig& c, const Json& j);

Json verdict_json(const FinitenessVerdict& v);
Json report_json(const BLReport& r);
Json certificate_json(const ExtremiserCertificate& c);
Json infimum_json(const Infimum& g);
Json near_minimiser_json(const NearMinimiserCertificate& c);
Json duality_json(const DualityCheck& d, double dual_tol);
Json convolution_json(const ConvolutionDatum& c);
Json verification_json(const VerificationReport& r);
Json holder_json(const HolderTable& t);

}  // namespace blkit::io
