#include "blkit/json_io.hpp"

#include "blkit/error.hpp"

#include <cmath>
#include <set>
#include <string>

namespace blkit::io {

namespace {

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw Error(ErrorCode::InvalidInput, std::string("missing field \"") + key + "\"");
  return j.at(key);
}

int read_int(const Json& j) {
  if (!j.is_number_integer()) throw Error(ErrorCode::InvalidInput, "expected an integer");
  return j.get<int>();
}

std::vector<double> read_list(const Json& j) {
  if (!j.is_array()) throw Error(ErrorCode::InvalidInput, "expected a list of numbers");
  std::vector<double> out;
  for (const auto& x : j) out.push_back(read_number(x));
  return out;
}

Json list_json(const std::vector<double>& xs) {
  Json out = Json::array();
  for (double x : xs) out.push_back(number(x));
  return out;
}

Json subspace_json(const Subspace& s) {
  Json out = Json::array();
  for (int c = 0; c < s.dim(); ++c) out.push_back(vector_json(s.basis.col(c)));
  return out;
}

Json tolerances_json(const Tolerances& t) {
  return {{"rank_tol", t.rank_tol},         {"proj_tol", t.proj_tol},       {"scaling_tol", t.scaling_tol},
          {"dedup_tol", t.dedup_tol},       {"sym_tol", t.sym_tol},         {"det_tol", t.det_tol},
          {"sep_tol", t.sep_tol},           {"distinct_tol", t.distinct_tol}, {"grad_tol", t.grad_tol},
          {"max_newton_iters", t.max_newton_iters}, {"subset_budget", t.subset_budget}};
}

template <class T>
void set_if(const Json& j, const char* key, T& target, std::set<std::string>& seen) {
  if (!j.contains(key)) return;
  seen.insert(key);
  if constexpr (std::is_same_v<T, double>)
    target = read_number(j.at(key));
  else
    target = j.at(key).get<T>();
}

void reject_unknown(const Json& j, const std::set<std::string>& seen, const std::string& where) {
  for (const auto& [key, _] : j.items()) {
    if (!seen.count(key)) throw Error(ErrorCode::InvalidInput, "unknown " + where + " key \"" + key + "\"");
  }
}

}  // namespace

Json number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

double read_number(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf" || s == "infinity" || s == "Infinity") return INFINITY;
    if (s == "-inf" || s == "-infinity" || s == "-Infinity") return -INFINITY;
    if (s == "nan") return NAN;
  }
  throw Error(ErrorCode::InvalidInput, "expected a number, got " + j.dump());
}

Json matrix_json(const Matrix& m) {
  Json out = Json::array();
  for (int r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(number(m(r, c)));
    out.push_back(row);
  }
  return out;
}

Matrix read_matrix(const Json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_array())
    throw Error(ErrorCode::InvalidInput, "expected a non-empty list of rows");
  const std::size_t cols = j[0].size();
  Matrix m(j.size(), cols);
  for (std::size_t r = 0; r < j.size(); ++r) {
    if (!j[r].is_array() || j[r].size() != cols) throw Error(ErrorCode::DimensionMismatch, "ragged matrix rows");
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = read_number(j[r][c]);
  }
  return m;
}

Json vector_json(const Vector& v) {
  Json out = Json::array();
  for (int i = 0; i < v.size(); ++i) out.push_back(number(v(i)));
  return out;
}

Vector read_vector(const Json& j) {
  const std::vector<double> xs = read_list(j);
  return Eigen::Map<const Vector>(xs.data(), static_cast<Eigen::Index>(xs.size()));
}

BLDatum read_datum(const Json& j, const Tolerances& tol) {
  BLDatum d;
  d.n = read_int(field(j, "n"));
  const Json& maps = field(j, "maps");
  if (!maps.is_array()) throw Error(ErrorCode::InvalidInput, "\"maps\" must be a list of matrices");
  for (const auto& m : maps) d.maps.push_back(read_matrix(m));
  d.p = read_list(field(j, "p"));
  return validate(std::move(d), tol);
}

Json datum_json(const BLDatum& d) {
  Json maps = Json::array();
  for (const auto& m : d.maps) maps.push_back(matrix_json(m));
  return {{"n", d.n}, {"maps", maps}, {"p", list_json(d.p)}};
}

ExpSumInstance read_instance(const Json& j, const Tolerances& tol) {
  const int dim = read_int(field(j, "dim"));
  std::vector<Vector> exps;
  const Json& e = field(j, "exponents");
  if (!e.is_array()) throw Error(ErrorCode::InvalidInput, "\"exponents\" must be a list");
  for (const auto& u : e) exps.push_back(read_vector(u));
  return make_instance(dim, std::move(exps), read_list(field(j, "coeffs")), tol);
}

SubspaceDatum read_subspace_datum(const Json& j, const Tolerances& tol) {
  const Json& f = field(j, "factors");
  if (!f.is_array()) throw Error(ErrorCode::InvalidInput, "\"factors\" must be a list");
  std::vector<int> factors;
  for (const auto& x : f) factors.push_back(read_int(x));
  const Matrix rows = read_matrix(field(j, "H_basis"));
  return make_subspace_datum(std::move(factors), rows.transpose(), read_list(field(j, "q")), tol);
}

PolyMap read_poly_map(const Json& j) {
  const int n = read_int(field(j, "n"));
  const Json& outs = field(j, "outputs");
  if (!outs.is_array()) throw Error(ErrorCode::InvalidInput, "\"outputs\" must be a list");
  std::vector<std::vector<Monomial>> outputs;
  for (const auto& out : outs) {
    if (!out.is_array()) throw Error(ErrorCode::InvalidInput, "each output must be a list of monomials");
    std::vector<Monomial> monos;
    for (const auto& m : out) {
      Monomial mono;
      const Json& e = field(m, "exps");
      if (!e.is_array()) throw Error(ErrorCode::InvalidInput, "\"exps\" must be a list");
      for (const auto& k : e) mono.exps.push_back(read_int(k));
      mono.coef = read_number(field(m, "coef"));
      monos.push_back(std::move(mono));
    }
    outputs.push_back(std::move(monos));
  }
  return make_poly_map(n, std::move(outputs));
}

Json poly_map_json(const PolyMap& map) {
  Json outs = Json::array();
  for (const auto& out : map.outputs) {
    Json monos = Json::array();
    for (const auto& m : out) monos.push_back({{"exps", m.exps}, {"coef", number(m.coef)}});
    outs.push_back(monos);
  }
  return {{"n", map.n}, {"outputs", outs}};
}

NonlinearProblem read_problem(const Json& j) {
  NonlinearProblem p;
  const Json& maps = field(j, "maps");
  if (!maps.is_array()) throw Error(ErrorCode::InvalidInput, "\"maps\" must be a list");
  for (const auto& m : maps) p.maps.push_back(read_poly_map(m));
  p.p = read_list(field(j, "p"));
  p.x0 = read_vector(field(j, "x0"));
  p.delta_schedule = read_list(field(j, "delta_schedule"));
  if (j.contains("epsilon")) p.epsilon = read_number(j.at("epsilon"));
  if (j.contains("gamma")) p.gamma = read_number(j.at("gamma"));
  if (j.contains("certificate_delta")) p.certificate_delta = read_number(j.at("certificate_delta"));
  if (j.contains("noise_tol")) p.noise_tol = read_number(j.at("noise_tol"));
  if (j.contains("random_inputs")) p.random_inputs = read_int(j.at("random_inputs"));
  return p;
}

Json config_json(const RunConfig& c) {
  const LiebConfig& l = c.lieb;
  const QuadratureConfig& q = c.quadrature;
  return {{"tolerances", tolerances_json(l.tol)},
          {"restarts", l.restarts},
          {"seed", l.seed},
          {"threads", l.threads},
          {"expansion_budget", l.expansion_budget},
          {"lattice_depth", l.lattice_depth},
          {"max_evaluations", l.max_evaluations},
          {"pos_tol", l.pos_tol},
          {"opt_tol", l.opt_tol},
          {"agreement_tol", l.agreement_tol},
          {"quadrature",
           {{"order", q.order},
            {"max_evaluations", q.max_evaluations},
            {"rel_tol", q.rel_tol},
            {"tensor_max_dim", q.tensor_max_dim},
            {"samples", q.samples},
            {"batches", q.batches},
            {"seed", q.seed}}},
          {"epsilon", number(c.epsilon)},
          {"gamma", number(c.gamma)},
          {"dual_tol", number(c.dual_tol)},
          {"delta", c.delta ? number(*c.delta) : Json(nullptr)},
          {"certify", c.certify ? number(*c.certify) : Json(nullptr)}};
}

void apply_config(RunConfig& c, const Json& j) {
  if (!j.is_object()) throw Error(ErrorCode::InvalidInput, "configuration must be a JSON object");
  std::set<std::string> seen;
  LiebConfig& l = c.lieb;
  if (j.contains("tolerances")) {
    seen.insert("tolerances");
    const Json& t = j.at("tolerances");
    std::set<std::string> tseen;
    set_if(t, "rank_tol", l.tol.rank_tol, tseen);
    set_if(t, "proj_tol", l.tol.proj_tol, tseen);
    set_if(t, "scaling_tol", l.tol.scaling_tol, tseen);
    set_if(t, "dedup_tol", l.tol.dedup_tol, tseen);
    set_if(t, "sym_tol", l.tol.sym_tol, tseen);
    set_if(t, "det_tol", l.tol.det_tol, tseen);
    set_if(t, "sep_tol", l.tol.sep_tol, tseen);
    set_if(t, "distinct_tol", l.tol.distinct_tol, tseen);
    set_if(t, "grad_tol", l.tol.grad_tol, tseen);
    set_if(t, "max_newton_iters", l.tol.max_newton_iters, tseen);
    set_if(t, "subset_budget", l.tol.subset_budget, tseen);
    reject_unknown(t, tseen, "tolerance");
  }
  set_if(j, "restarts", l.restarts, seen);
  set_if(j, "seed", l.seed, seen);
  set_if(j, "threads", l.threads, seen);
  set_if(j, "expansion_budget", l.expansion_budget, seen);
  set_if(j, "lattice_depth", l.lattice_depth, seen);
  set_if(j, "max_evaluations", l.max_evaluations, seen);
  set_if(j, "pos_tol", l.pos_tol, seen);
  set_if(j, "opt_tol", l.opt_tol, seen);
  set_if(j, "agreement_tol", l.agreement_tol, seen);
  if (j.contains("quadrature")) {
    seen.insert("quadrature");
    const Json& q = j.at("quadrature");
    std::set<std::string> qseen;
    set_if(q, "order", c.quadrature.order, qseen);
    set_if(q, "max_evaluations", c.quadrature.max_evaluations, qseen);
    set_if(q, "rel_tol", c.quadrature.rel_tol, qseen);
    set_if(q, "tensor_max_dim", c.quadrature.tensor_max_dim, qseen);
    set_if(q, "samples", c.quadrature.samples, qseen);
    set_if(q, "batches", c.quadrature.batches, qseen);
    set_if(q, "seed", c.quadrature.seed, qseen);
    reject_unknown(q, qseen, "quadrature");
  }
  set_if(j, "epsilon", c.epsilon, seen);
  set_if(j, "gamma", c.gamma, seen);
  set_if(j, "dual_tol", c.dual_tol, seen);
  for (const char* key : {"delta", "certify"}) {
    if (!j.contains(key)) continue;
    seen.insert(key);
    std::optional<double>& target = std::string(key) == "delta" ? c.delta : c.certify;
    if (j.at(key).is_null())
      target.reset();
    else
      target = read_number(j.at(key));
  }
  reject_unknown(j, seen, "configuration");
  if (l.restarts < 1 || l.threads < 1) throw Error(ErrorCode::InvalidInput, "restarts and threads must be positive");
}

Json verdict_json(const FinitenessVerdict& v) {
  Json out = {{"tag", std::string(to_string(v.tag))}, {"scaling_residual", number(v.scaling_residual)}};
  out["witness"] = v.witness ? subspace_json(*v.witness) : Json(nullptr);
  out["numeric_lower_bound"] = v.numeric_lower_bound ? number(*v.numeric_lower_bound) : Json(nullptr);
  return out;
}

Json report_json(const BLReport& r) {
  const OptimizerDiagnostics& d = r.diagnostics;
  Json restarts = Json::array();
  for (std::size_t i = 0; i < d.restart_values.size(); ++i) {
    restarts.push_back({{"value", number(d.restart_values[i])},
                        {"parameters", vector_json(d.restart_parameters[i])},
                        {"attained", static_cast<bool>(d.restart_attained[i])}});
  }
  Json out = {{"constant", number(r.constant)},
              {"log_constant", number(r.log_constant)},
              {"finiteness", verdict_json(r.finiteness)},
              {"det_factor", number(r.det_factor)},
              {"diagnostics",
               {{"restarts", d.restarts},
                {"evaluations", d.evaluations},
                {"agreeing", d.agreeing},
                {"spread", number(d.spread)},
                {"best_parameters", vector_json(d.best_parameters)},
                {"inner_value", number(d.inner_value)},
                {"inner_attained", d.inner_attained},
                {"inner_tag", std::string(to_string(d.inner_tag))},
                {"per_restart", restarts}}}};
  if (r.certificate) out["certificate"] = certificate_json(*r.certificate);
  return out;
}

Json certificate_json(const ExtremiserCertificate& c) {
  Json blocks = Json::array();
  for (const auto& a : c.tuple.blocks) blocks.push_back(matrix_json(a));
  return {{"blocks", blocks},
          {"blg", number(c.blg)},
          {"log_blg", number(c.log_blg)},
          {"delta", number(c.delta)},
          {"delta_eff", number(c.delta_eff)},
          {"log_eccentricity", number(c.tuple.log_eccentricity)},
          {"log_eccentricity_bound", number(c.log_eccentricity_bound)},
          {"eccentricity_ok", c.eccentricity_ok},
          {"constants_mode", c.constants.mode == ConstantsMode::Exact ? "exact" : "bound"},
          {"log_N", number(c.constants.log_N)},
          {"inner", near_minimiser_json(c.inner)}};
}

Json infimum_json(const Infimum& g) {
  return {{"infimum", number(g.value)},
          {"log_infimum", number(g.log_value)},
          {"attained", g.attained},
          {"tag", std::string(to_string(g.tag))},
          {"face", g.face},
          {"minimiser", vector_json(g.minimiser)}};
}

Json near_minimiser_json(const NearMinimiserCertificate& c) {
  return {{"y", vector_json(c.y)},
          {"value", number(c.value)},
          {"delta", number(c.delta)},
          {"radius_bound", number(c.radius_bound)},
          {"log_radius_bound", number(c.log_radius_bound)},
          {"mode", std::string(to_string(c.mode))},
          {"upper_bound", number(c.upper_bound)},
          {"band", c.band},
          {"active", c.active},
          {"shift", number(c.shift)}};
}

Json duality_json(const DualityCheck& d, double dual_tol) {
  return {{"lhs", number(d.lhs)},
          {"rhs", number(d.rhs)},
          {"B_q", number(d.B_q)},
          {"dual_constant", number(d.dual_constant)},
          {"relative_gap", number(d.relative_gap)},
          {"dual_tol", number(dual_tol)},
          {"pass", d.passes(dual_tol)},
          {"primal", report_json(d.primal)},
          {"dual", report_json(d.dual)}};
}

Json convolution_json(const ConvolutionDatum& c) {
  return {{"tangent", subspace_json(c.tangent)},
          {"normal", subspace_json(c.normal)},
          {"adjoint", datum_json(c.adjoint)},
          {"report", report_json(c.report)}};
}

Json verification_json(const VerificationReport& r) {
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    Json inputs = Json::array();
    for (const auto& in : row.inputs) {
      inputs.push_back({{"ratio", number(in.ratio)},
                        {"error", number(in.error)},
                        {"gaussian_value", number(in.gaussian_value)}});
    }
    rows.push_back({{"delta", number(row.delta)},
                    {"max_ratio", number(row.max_ratio)},
                    {"max_error", number(row.max_error)},
                    {"gap", number(row.gap)},
                    {"bound_holds", row.bound_holds},
                    {"inputs", inputs}});
  }
  return {{"constant", number(r.constant)},
          {"bound", number(r.bound)},
          {"linear_reference", number(r.linear_reference)},
          {"linear", report_json(r.linear)},
          {"rows", rows},
          {"threshold", r.threshold ? number(*r.threshold) : Json(nullptr)},
          {"monotone", r.monotone},
          {"verdict", r.pass ? "PASS" : "FAIL"}};
}

Json holder_json(const HolderTable& t) {
  Json rows = Json::array();
  for (const auto& row : t.rows) {
    rows.push_back({{"radius", number(row.radius)},
                    {"max_difference", number(row.max_difference)},
                    {"ratio", number(row.ratio)}});
  }
  return {{"base_value", number(t.base_value)},
          {"alpha", number(t.alpha)},
          {"log_alpha", number(t.log_alpha)},
          {"rows", rows},
          {"bounded", t.bounded}};
}

}  // namespace blkit::io
