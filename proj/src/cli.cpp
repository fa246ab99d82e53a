#include "blkit/cli.hpp"

#include "blkit/error.hpp"

#include <fstream>
#include <sstream>

namespace blkit::cli {

namespace {

using io::Json;

Json load_json(const std::string& path, const char* what) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidInput, std::string("cannot open ") + what + " \"" + path + "\"");
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return Json::parse(buffer.str());
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::InvalidInput, std::string(what) + " is not valid JSON: " + e.what());
  }
}

struct Outcome {
  Json result;
  bool pass = true;
};

Outcome compute(const Json& in, const io::RunConfig& c) {
  const BLDatum datum = io::read_datum(in, c.lieb.tol);
  BLReport report = bl_constant(datum, c.lieb);
  if (c.certify) report.certificate = near_extremiser(datum, report, *c.certify, c.lieb);
  return {io::report_json(report)};
}

Outcome classify(const Json& in, const io::RunConfig& c) {
  const BLDatum datum = io::read_datum(in, c.lieb.tol);
  return {io::verdict_json(classify_finiteness(datum, c.lieb.lattice_depth, c.lieb.tol))};
}

Outcome expsum_min(const Json& in, const io::RunConfig& c) {
  const ExpSumInstance inst = io::read_instance(in, c.lieb.tol);
  Json out = io::infimum_json(infimum(inst, c.lieb.tol));
  if (c.delta) {
    const ExpSumConstants k = constants_auto(inst, c.lieb.tol);
    out["certificate"] = io::near_minimiser_json(near_minimise(inst, *c.delta, k, c.lieb.tol));
  }
  return {out};
}

Outcome dualize(const Json& in, const io::RunConfig& c) {
  const DualityCheck check = duality_check(io::read_subspace_datum(in, c.lieb.tol), c.lieb);
  return {io::duality_json(check, c.dual_tol), check.passes(c.dual_tol)};
}

Outcome young(const Json& in, const io::RunConfig&) {
  if (!in.contains("q") || !in.at("q").is_array() || in.at("q").size() != 3)
    throw Error(ErrorCode::InvalidInput, "\"q\" must hold three exponents");
  const std::array<double, 3> q = {io::read_number(in["q"][0]), io::read_number(in["q"][1]),
                                   io::read_number(in["q"][2])};
  const int dim = in.contains("dim") ? in.at("dim").get<int>() : 1;
  return {{{"q", {io::number(q[0]), io::number(q[1]), io::number(q[2])}},
           {"dim", dim},
           {"constant", io::number(young_constant(q, dim))}}};
}

Outcome convolution(const Json& in, const io::RunConfig& c) {
  if (!in.contains("differentials") || !in.at("differentials").is_array())
    throw Error(ErrorCode::InvalidInput, "missing field \"differentials\"");
  std::vector<Matrix> ds;
  for (const auto& m : in.at("differentials")) ds.push_back(io::read_matrix(m));
  std::vector<double> p;
  if (!in.contains("p") || !in.at("p").is_array()) throw Error(ErrorCode::InvalidInput, "missing field \"p\"");
  for (const auto& x : in.at("p")) p.push_back(io::read_number(x));
  return {io::convolution_json(convolution_datum(ds, p, c.lieb))};
}

Outcome verify_nonlinear(const Json& in, const io::RunConfig& c, const Command& cmd) {
  NonlinearProblem problem = io::read_problem(in);
  if (!in.contains("epsilon") || cmd.epsilon) problem.epsilon = c.epsilon;
  if (!in.contains("gamma")) problem.gamma = c.gamma;
  problem.quadrature = c.quadrature;
  problem.lieb = c.lieb;
  problem.seed = c.lieb.seed;
  const VerificationReport report = verify_theorem1(problem);
  Json out = io::verification_json(report);
  out["epsilon"] = io::number(problem.epsilon);
  out["gamma"] = io::number(problem.gamma);
  return {out, report.pass};
}

Outcome holder(const Json& in, const io::RunConfig& c) {
  const BLDatum datum = io::read_datum(in.contains("datum") ? in.at("datum") : in, c.lieb.tol);
  std::vector<double> radii = {1e-2, 1e-3, 1e-4};
  if (in.contains("radii")) {
    radii.clear();
    for (const auto& r : in.at("radii")) radii.push_back(io::read_number(r));
  }
  const int samples = in.contains("samples") ? in.at("samples").get<int>() : 3;
  const HolderTable table = holder_experiment(datum, radii, c.lieb, samples);
  return {io::holder_json(table), table.bounded};
}

}  // namespace

const std::vector<std::string>& verbs() {
  static const std::vector<std::string> v = {"compute", "classify",    "expsum-min",       "dualize",
                                             "young",   "convolution", "verify-nonlinear", "holder"};
  return v;
}

io::RunConfig resolve_config(const Command& cmd) {
  io::RunConfig c;
  if (cmd.config_file && !cmd.config_file->empty()) io::apply_config(c, load_json(*cmd.config_file, "config file"));
  if (cmd.seed) {
    c.lieb.seed = *cmd.seed;
    c.quadrature.seed = *cmd.seed;
  }
  if (cmd.threads) c.lieb.threads = *cmd.threads;
  if (cmd.restarts) c.lieb.restarts = *cmd.restarts;
  if (cmd.budget) c.lieb.expansion_budget = *cmd.budget;
  if (cmd.delta) c.delta = *cmd.delta;
  if (cmd.epsilon) c.epsilon = *cmd.epsilon;
  if (cmd.certify) c.certify = *cmd.certify;
  if (c.lieb.threads < 1 || c.lieb.restarts < 1)
    throw Error(ErrorCode::InvalidInput, "threads and restarts must be positive");
  return c;
}

RunResult run(const Command& cmd) {
  RunResult out;
  Json& report = out.report;
  report["schema"] = "blkit/1";
  report["verb"] = cmd.verb;
  report["input"] = cmd.input;
  try {
    const io::RunConfig config = resolve_config(cmd);
    report["config"] = io::config_json(config);
    const Json in = load_json(cmd.input, "input");
    Outcome o;
    if (cmd.verb == "compute")
      o = compute(in, config);
    else if (cmd.verb == "classify")
      o = classify(in, config);
    else if (cmd.verb == "expsum-min")
      o = expsum_min(in, config);
    else if (cmd.verb == "dualize")
      o = dualize(in, config);
    else if (cmd.verb == "young")
      o = young(in, config);
    else if (cmd.verb == "convolution")
      o = convolution(in, config);
    else if (cmd.verb == "verify-nonlinear")
      o = verify_nonlinear(in, config, cmd);
    else if (cmd.verb == "holder")
      o = holder(in, config);
    else
      throw Error(ErrorCode::InvalidInput, "unknown verb \"" + cmd.verb + "\"");
    report["result"] = std::move(o.result);
    report["status"] = o.pass ? "ok" : "fail";
    out.exit_code = o.pass ? kSuccess : kFail;
  } catch (const Error& e) {
    const bool input = is_input_error(e.code());
    report["status"] = "error";
    report["error"] = {{"code", std::string(to_string(e.code()))},
                       {"kind", input ? "input" : "numerical"},
                       {"message", e.what()}};
    out.exit_code = input ? kInputError : kNumericalError;
  } catch (const Json::exception& e) {
    report["status"] = "error";
    report["error"] = {{"code", "InvalidInput"}, {"kind", "input"}, {"message", e.what()}};
    out.exit_code = kInputError;
  }
  return out;
}

std::string render(const io::Json& report) { return report.dump(2) + "\n"; }

}  // namespace blkit::cli
