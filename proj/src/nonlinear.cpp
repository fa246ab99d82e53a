#include "blkit/nonlinear.hpp"

#include "blkit/error.hpp"

#include <atomic>
#include <cmath>
#include <random>
#include <string>
#include <thread>

namespace blkit {

GaussianInput make_gaussian_input(const GaussianTuple& tuple, double sigma, std::vector<Vector> centers) {
  if (!(sigma > 0)) throw Error(ErrorCode::InvalidInput, "gaussian scale must be positive");
  GaussianInput in;
  in.blocks = tuple.blocks;
  in.sigma = sigma;
  if (centers.empty()) {
    for (const auto& a : tuple.blocks) centers.push_back(Vector::Zero(a.rows()));
  }
  if (centers.size() != tuple.blocks.size())
    throw Error(ErrorCode::DimensionMismatch, "need one centre per block");
  for (std::size_t j = 0; j < centers.size(); ++j) {
    if (centers[j].size() != tuple.blocks[j].rows())
      throw Error(ErrorCode::DimensionMismatch, "centre " + std::to_string(j) + " has the wrong size");
    in.log_det.push_back(log_det_spd(tuple.blocks[j]));
  }
  in.centers = std::move(centers);
  return in;
}

double log_input_density(const GaussianInput& input, int j, const Vector& z) {
  const Vector d = z - input.centers[j];
  const double nj = static_cast<double>(d.size());
  return -nj * std::log(input.sigma) + 0.5 * input.log_det[j] -
         M_PI * d.dot(input.blocks[j] * d) / (input.sigma * input.sigma);
}

double input_mass(const GaussianInput& input, int j) {
  const double nj = static_cast<double>(input.blocks[j].rows());
  const double log_prefactor = -nj * std::log(input.sigma) + 0.5 * input.log_det[j];
  // int exp(-pi <A z, z> / s^2) dz = s^n det(A)^{-1/2}
  const double log_integral = nj * std::log(input.sigma) - 0.5 * input.log_det[j];
  return std::exp(log_prefactor + log_integral);
}

GaussianInput scaled_gaussian_inputs(const GaussianTuple& tuple, double delta, double gamma,
                                     std::vector<Vector> centers) {
  if (!(delta > 0)) throw Error(ErrorCode::InvalidInput, "delta must be positive");
  return make_gaussian_input(tuple, std::pow(delta, 1 + gamma), std::move(centers));
}

GaussianInput scaled_gaussian_inputs(const BLDatum& datum, double delta, double gamma, double delta_acc,
                                     const LiebConfig& config) {
  const BLReport report = bl_constant(datum, config);
  const ExtremiserCertificate cert = near_extremiser(datum, report, delta_acc, config);
  return scaled_gaussian_inputs(cert.tuple, delta, gamma);
}

void validate(const NonlinearProblem& problem, const Tolerances& tol) {
  if (problem.maps.empty() || problem.maps.size() != problem.p.size())
    throw Error(ErrorCode::DimensionMismatch, "need one exponent per map");
  const int n = static_cast<int>(problem.x0.size());
  for (std::size_t j = 0; j < problem.maps.size(); ++j) {
    if (problem.maps[j].n != n)
      throw Error(ErrorCode::DimensionMismatch, "map " + std::to_string(j) + " has the wrong input dimension");
    if (!(problem.p[j] >= 0.0 && problem.p[j] <= 1.0))
      throw Error(ErrorCode::ExponentOutOfRange, "exponents must lie in [0, 1]");
    const Matrix d = differential(problem.maps[j], problem.x0);
    if (numerical_rank(d, tol.rank_tol) < d.rows())
      throw Error(ErrorCode::NotSurjective, "map " + std::to_string(j) + " is not a submersion at x0");
  }
  if (problem.delta_schedule.empty()) throw Error(ErrorCode::InvalidInput, "empty delta schedule");
  for (std::size_t i = 0; i < problem.delta_schedule.size(); ++i) {
    const double d = problem.delta_schedule[i];
    if (!(d > 0) || (i > 0 && !(d < problem.delta_schedule[i - 1])))
      throw Error(ErrorCode::InvalidInput, "delta schedule must be positive and strictly decreasing");
  }
  if (!(problem.epsilon > 0)) throw Error(ErrorCode::InvalidInput, "epsilon must be positive");
}

BLDatum linearization(const NonlinearProblem& problem, const Tolerances& tol) {
  BLDatum datum;
  datum.n = static_cast<int>(problem.x0.size());
  for (const auto& map : problem.maps) datum.maps.push_back(differential(map, problem.x0));
  datum.p = problem.p;
  return validate(std::move(datum), tol);
}

RatioResult nonlinear_ratio(const NonlinearProblem& problem, double delta, const GaussianInput& input) {
  if (input.m() != static_cast<int>(problem.maps.size()))
    throw Error(ErrorCode::DimensionMismatch, "need one input per map");
  for (int j = 0; j < input.m(); ++j) {
    if (input.blocks[j].rows() != problem.maps[j].out_dim())
      throw Error(ErrorCode::DimensionMismatch, "input " + std::to_string(j) + " has the wrong dimension");
  }
  auto log_integrand = [&](const Vector& x) {
    double s = 0;
    for (int j = 0; j < input.m(); ++j) {
      if (problem.p[j] == 0.0) continue;
      s += problem.p[j] * log_input_density(input, j, evaluate(problem.maps[j], x));
    }
    return s;
  };
  RatioResult out;
  out.quadrature = integrate_ball(log_integrand, problem.x0, delta, problem.quadrature);
  double log_den = 0;
  for (int j = 0; j < input.m(); ++j) log_den += problem.p[j] * std::log(input_mass(input, j));
  out.denominator = std::exp(log_den);
  out.numerator = out.quadrature.value;
  out.value = out.numerator / out.denominator;
  out.error = out.quadrature.error / out.denominator;
  if (out.error > 0.1 * std::abs(out.value))
    throw Error(ErrorCode::ErrorEstimateTooLarge, "quadrature error " + std::to_string(out.error) +
                                                      " exceeds a tenth of the value " +
                                                      std::to_string(out.value));
  return out;
}

namespace {

std::vector<GaussianTuple> input_suite(const NonlinearProblem& problem, const BLDatum& linear,
                                       const BLReport& report) {
  std::vector<GaussianTuple> suite;
  suite.push_back(near_extremiser(linear, report, problem.certificate_delta, problem.lieb).tuple);
  std::mt19937_64 rng(problem.seed);
  std::normal_distribution<double> normal;
  for (int k = 0; k < problem.random_inputs; ++k) {
    std::vector<Matrix> blocks;
    for (int j = 0; j < linear.m(); ++j) {
      const int nj = linear.out_dim(j);
      Matrix g(nj, nj);
      for (int a = 0; a < nj; ++a)
        for (int b = 0; b < nj; ++b) g(a, b) = normal(rng);
      Matrix a = g * g.transpose() / nj + 0.25 * Matrix::Identity(nj, nj);
      blocks.push_back(0.5 * (a + a.transpose()));
    }
    suite.push_back(make_gaussian_tuple(std::move(blocks)));
  }
  return suite;
}

}  // namespace

VerificationReport verify_theorem1(const NonlinearProblem& problem) {
  validate(problem, problem.lieb.tol);
  const BLDatum linear = linearization(problem, problem.lieb.tol);
  VerificationReport report;
  report.linear = bl_constant(linear, problem.lieb);
  if (report.linear.finiteness.tag != FinitenessTag::FiniteNumerical)
    throw Error(ErrorCode::NotFinite, "the linearised datum is not Finite-Numerical");
  report.constant = report.linear.constant;
  report.bound = (1 + problem.epsilon) * report.constant;

  const std::vector<GaussianTuple> suite = input_suite(problem, linear, report.linear);
  std::vector<double> gaussian_values;
  for (const auto& t : suite) {
    gaussian_values.push_back(blg(linear, t));
    report.linear_reference = std::max(report.linear_reference, gaussian_values.back());
  }
  std::vector<Vector> centers;
  for (const auto& map : problem.maps) centers.push_back(evaluate(map, problem.x0));

  const int rows = static_cast<int>(problem.delta_schedule.size());
  const int members = static_cast<int>(suite.size());
  report.rows.resize(rows);
  for (int r = 0; r < rows; ++r) {
    report.rows[r].delta = problem.delta_schedule[r];
    report.rows[r].inputs.resize(members);
  }
  // Every (delta, input) pair is independent; results land in fixed slots.
  const int jobs = rows * members;
  std::vector<std::exception_ptr> failures(jobs);
  auto run = [&](int job) {
    const int r = job / members, k = job % members;
    try {
      const double delta = problem.delta_schedule[r];
      const GaussianInput input = scaled_gaussian_inputs(suite[k], delta, problem.gamma, centers);
      const RatioResult ratio = nonlinear_ratio(problem, delta, input);
      report.rows[r].inputs[k] = {ratio.value, ratio.error, gaussian_values[k]};
    } catch (...) {
      failures[job] = std::current_exception();
    }
  };
  const int threads = std::clamp(problem.lieb.threads, 1, jobs);
  if (threads == 1) {
    for (int i = 0; i < jobs; ++i) run(i);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (int i = next++; i < jobs; i = next++) run(i);
      });
    }
    for (auto& worker : pool) worker.join();
  }
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }

  for (auto& row : report.rows) {
    for (const auto& in : row.inputs) {
      row.max_ratio = std::max(row.max_ratio, in.ratio);
      row.max_error = std::max(row.max_error, in.error);
    }
    row.gap = std::abs(row.max_ratio - report.linear_reference);
    row.bound_holds = row.max_ratio <= report.bound;
  }
  // The threshold is the first entry of the longest tail on which the bound holds.
  int start = rows;
  while (start > 0 && report.rows[start - 1].bound_holds) --start;
  if (start < rows) report.threshold = report.rows[start].delta;
  report.monotone = true;
  for (int r = start + 1; r < rows; ++r) {
    const double slack = problem.noise_tol * report.linear_reference + report.rows[r].max_error +
                         report.rows[r - 1].max_error;
    if (report.rows[r].gap > report.rows[r - 1].gap + slack) report.monotone = false;
  }
  report.pass = report.threshold.has_value() && report.monotone;
  return report;
}

}  // namespace blkit
