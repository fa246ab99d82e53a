#include "blkit/quadrature.hpp"

#include "blkit/error.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/random/sobol.hpp>

#include <cmath>
#include <queue>
#include <random>
#include <string>
#include <vector>

namespace blkit {

namespace {

struct Rule {
  std::vector<double> nodes;  // on [-1, 1]
  std::vector<double> weights;
};

template <unsigned N>
Rule boost_rule() {
  using G = boost::math::quadrature::gauss<double, N>;
  Rule r;
  const auto& a = G::abscissa();
  const auto& w = G::weights();
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0.0) {
      r.nodes.push_back(0.0);
      r.weights.push_back(w[i]);
    } else {
      r.nodes.push_back(a[i]);
      r.weights.push_back(w[i]);
      r.nodes.push_back(-a[i]);
      r.weights.push_back(w[i]);
    }
  }
  return r;
}

Rule gauss_legendre(int order) {
  switch (order) {
    case 1: return boost_rule<1>();
    case 3: return boost_rule<3>();
    case 5: return boost_rule<5>();
    case 7: return boost_rule<7>();
    case 9: return boost_rule<9>();
    case 11: return boost_rule<11>();
    default:
      throw Error(ErrorCode::InvalidInput, "quadrature order must be odd, between 3 and 11");
  }
}

struct Cell {
  Vector lo, hi;
  double value = 0;
  double error = 0;
  std::size_t id = 0;
};

// Tensor rules on a box of polar coordinates (rho, theta_1..theta_{n-2}, phi)
// covering the ball exactly; n = 1 uses the interval itself.
class PolarIntegrator {
 public:
  PolarIntegrator(const std::function<double(const Vector&)>& log_f, const Vector& center, double radius,
                  int order)
      : log_f_(log_f), c_(center), r_(radius), n_(static_cast<int>(center.size())),
        high_(gauss_legendre(order)), low_(gauss_legendre(order - 2)) {}

  std::size_t cost() const {
    std::size_t a = 1, b = 1;
    for (int i = 0; i < n_; ++i) {
      a *= high_.nodes.size();
      b *= low_.nodes.size();
    }
    return a + b;
  }

  /// The coordinate box, pre-split once along each angle.
  std::vector<Cell> initial_cells() const {
    Vector lo(n_), hi(n_);
    if (n_ == 1) {
      lo(0) = -r_;
      hi(0) = r_;
      return {Cell{lo, hi, 0, 0, 0}};
    }
    lo(0) = 0;
    hi(0) = r_;
    for (int i = 1; i < n_ - 1; ++i) {
      lo(i) = 0;
      hi(i) = M_PI;
    }
    lo(n_ - 1) = 0;
    hi(n_ - 1) = 2 * M_PI;
    std::vector<Cell> cells{Cell{lo, hi, 0, 0, 0}};
    for (int i = 1; i < n_; ++i) {
      std::vector<Cell> next;
      for (const Cell& c : cells) {
        const double mid = 0.5 * (c.lo(i) + c.hi(i));
        Cell left = c, right = c;
        left.hi(i) = mid;
        right.lo(i) = mid;
        next.push_back(left);
        next.push_back(right);
      }
      cells = std::move(next);
    }
    return cells;
  }

  void evaluate(Cell& cell, std::size_t& evaluations) const {
    const double hi = apply(high_, cell, evaluations);
    cell.value = hi;
    cell.error = std::abs(hi - apply(low_, cell, evaluations));
  }

 private:
  // Point and volume element for polar coordinates u.
  double map(const Vector& u, Vector& x) const {
    if (n_ == 1) {
      x(0) = c_(0) + u(0);
      return 1.0;
    }
    const double rho = u(0);
    double jac = std::pow(rho, n_ - 1);
    double sines = 1;
    for (int i = 1; i < n_ - 1; ++i) {
      x(i - 1) = c_(i - 1) + rho * sines * std::cos(u(i));
      sines *= std::sin(u(i));
      jac *= std::pow(std::sin(u(i)), n_ - 1 - i);
    }
    x(n_ - 2) = c_(n_ - 2) + rho * sines * std::cos(u(n_ - 1));
    x(n_ - 1) = c_(n_ - 1) + rho * sines * std::sin(u(n_ - 1));
    return jac;
  }

  double apply(const Rule& rule, const Cell& cell, std::size_t& evaluations) const {
    const int k = static_cast<int>(rule.nodes.size());
    std::vector<int> idx(n_, 0);
    Vector u(n_), x(n_);
    double scale = 1;
    for (int i = 0; i < n_; ++i) scale *= 0.5 * (cell.hi(i) - cell.lo(i));
    double total = 0;
    while (true) {
      double w = 1;
      for (int i = 0; i < n_; ++i) {
        u(i) = 0.5 * (cell.lo(i) + cell.hi(i)) + 0.5 * (cell.hi(i) - cell.lo(i)) * rule.nodes[idx[i]];
        w *= rule.weights[idx[i]];
      }
      const double jac = map(u, x);
      const double lf = log_f_(x);
      if (lf > -INFINITY) total += w * jac * std::exp(lf);
      ++evaluations;
      int i = 0;
      while (i < n_ && ++idx[i] == k) idx[i++] = 0;
      if (i == n_) break;
    }
    return scale * total;
  }

  const std::function<double(const Vector&)>& log_f_;
  Vector c_;
  double r_;
  int n_;
  Rule high_, low_;
};

struct ByError {
  bool operator()(const Cell& a, const Cell& b) const {
    if (a.error != b.error) return a.error < b.error;
    return a.id > b.id;
  }
};

QuadratureResult tensor_ball(const std::function<double(const Vector&)>& log_f, const Vector& center,
                             double radius, const QuadratureConfig& config) {
  const int n = static_cast<int>(center.size());
  if (config.order < 3) throw Error(ErrorCode::InvalidInput, "quadrature order must be at least 3");
  PolarIntegrator integrator(log_f, center, radius, config.order);
  const std::size_t cell_cost = integrator.cost();
  const std::size_t children = std::size_t{1} << n;
  if (cell_cost << (n - 1) > config.max_evaluations)
    throw Error(ErrorCode::QuadratureBudgetExceeded,
                "one cell needs " + std::to_string(cell_cost) + " evaluations, budget is " +
                    std::to_string(config.max_evaluations));

  QuadratureResult out;
  std::size_t next_id = 0;
  std::priority_queue<Cell, std::vector<Cell>, ByError> queue(ByError{}, {});
  double value = 0, error = 0;
  for (Cell& cell : integrator.initial_cells()) {
    cell.id = next_id++;
    integrator.evaluate(cell, out.evaluations);
    value += cell.value;
    error += cell.error;
    queue.push(std::move(cell));
  }

  while (error > config.rel_tol * std::abs(value) && error > 0) {
    if (out.evaluations + children * cell_cost > config.max_evaluations) break;
    Cell parent = queue.top();
    queue.pop();
    value -= parent.value;
    error -= parent.error;
    const Vector mid = 0.5 * (parent.lo + parent.hi);
    for (std::size_t mask = 0; mask < children; ++mask) {
      Cell child{parent.lo, parent.hi, 0, 0, next_id++};
      for (int i = 0; i < n; ++i) {
        if (mask & (std::size_t{1} << i))
          child.lo(i) = mid(i);
        else
          child.hi(i) = mid(i);
      }
      integrator.evaluate(child, out.evaluations);
      value += child.value;
      error += child.error;
      queue.push(std::move(child));
    }
  }

  // Re-sum the leaves in creation order so the result does not carry the
  // running-update rounding.
  std::vector<Cell> leaves;
  leaves.reserve(queue.size());
  while (!queue.empty()) {
    leaves.push_back(queue.top());
    queue.pop();
  }
  std::sort(leaves.begin(), leaves.end(), [](const Cell& a, const Cell& b) { return a.id < b.id; });
  out.value = 0;
  out.error = 0;
  for (const Cell& c : leaves) {
    out.value += c.value;
    out.error += c.error;
  }
  out.cells = static_cast<int>(leaves.size());
  out.converged = out.error <= config.rel_tol * std::abs(out.value);
  out.rule = QuadratureRule::TensorGaussLegendre;
  return out;
}

QuadratureResult sobol_ball(const std::function<double(const Vector&)>& log_f, const Vector& center,
                            double radius, const QuadratureConfig& config) {
  const int n = static_cast<int>(center.size());
  const int batches = std::max(2, config.batches);
  const std::size_t per_batch = config.samples / batches;
  if (per_batch == 0) throw Error(ErrorCode::InvalidInput, "too few quasi-random samples");
  if (per_batch * batches > config.max_evaluations * 8)
    throw Error(ErrorCode::QuadratureBudgetExceeded, "quasi-random sample count exceeds the budget");
  boost::random::sobol engine(n);
  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double scale = 1.0 / (static_cast<double>(engine.max()) - static_cast<double>(engine.min()) + 1.0);
  const double volume = std::pow(2 * radius, n);

  std::vector<double> means(batches);
  std::vector<double> points(per_batch * n);
  for (std::size_t s = 0; s < per_batch * n; ++s)
    points[s] = (static_cast<double>(engine()) - static_cast<double>(engine.min())) * scale;
  QuadratureResult out;
  Vector x(n);
  for (int b = 0; b < batches; ++b) {
    std::vector<double> shift(n);
    for (double& v : shift) v = unit(rng);
    double sum = 0;
    for (std::size_t s = 0; s < per_batch; ++s) {
      double r2 = 0;
      for (int i = 0; i < n; ++i) {
        double u = points[s * n + i] + shift[i];
        if (u >= 1) u -= 1;
        const double t = 2 * u - 1;
        x(i) = center(i) + radius * t;
        r2 += t * t;
      }
      if (r2 > 1) continue;
      const double lf = log_f(x);
      if (lf > -INFINITY) sum += std::exp(lf);
    }
    out.evaluations += per_batch;
    means[b] = volume * sum / static_cast<double>(per_batch);
  }
  double mean = 0;
  for (double m : means) mean += m;
  mean /= batches;
  double var = 0;
  for (double m : means) var += (m - mean) * (m - mean);
  var /= (batches - 1);
  out.value = mean;
  out.error = std::sqrt(var / batches);
  out.converged = out.error <= config.rel_tol * std::abs(mean);
  out.rule = QuadratureRule::QuasiRandom;
  return out;
}

}  // namespace

std::string_view to_string(QuadratureRule rule) {
  switch (rule) {
    case QuadratureRule::TensorGaussLegendre: return "tensor-gauss-legendre";
    case QuadratureRule::QuasiRandom: return "quasi-random";
  }
  return "unknown";
}

QuadratureResult integrate_ball(const std::function<double(const Vector&)>& log_f, const Vector& center,
                                double radius, const QuadratureConfig& config) {
  if (center.size() < 1) throw Error(ErrorCode::DimensionMismatch, "empty centre");
  if (!(radius > 0)) throw Error(ErrorCode::InvalidInput, "ball radius must be positive");
  if (center.size() <= config.tensor_max_dim) return tensor_ball(log_f, center, radius, config);
  return sobol_ball(log_f, center, radius, config);
}

}  // namespace blkit
