#include "blkit/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace blkit {

NelderMeadResult nelder_mead(const std::function<double(const Vector&)>& f, const Vector& x0,
                             const NelderMeadOptions& options) {
  const int n = static_cast<int>(x0.size());
  NelderMeadResult result;
  if (n == 0) {
    result.x = x0;
    result.value = f(x0);
    result.evaluations = 1;
    result.converged = true;
    return result;
  }
  int evaluations = 0;
  auto eval = [&](const Vector& x) {
    ++evaluations;
    const double v = f(x);
    return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
  };

  std::vector<Vector> simplex(n + 1, x0);
  std::vector<double> values(n + 1);
  for (int i = 0; i < n; ++i) simplex[i + 1](i) += options.initial_step;
  for (int i = 0; i <= n; ++i) values[i] = eval(simplex[i]);

  std::vector<int> order(n + 1);
  while (evaluations < options.max_evaluations) {
    std::iota(order.begin(), order.end(), 0);
    // Ties broken by index so the run is reproducible.
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return values[a] < values[b]; });
    const int best = order.front();
    const int worst = order.back();
    const int second = order[n - 1];

    double diameter = 0.0;
    for (int i = 0; i <= n; ++i) diameter = std::max(diameter, (simplex[i] - simplex[best]).norm());
    const double spread = std::abs(values[worst] - values[best]);
    if (diameter <= options.x_tol ||
        (std::isfinite(values[worst]) &&
         spread <= options.f_tol * std::max(1.0, std::abs(values[best])) && diameter <= 1e-6)) {
      result.converged = true;
      break;
    }

    Vector centroid = Vector::Zero(n);
    for (int i = 0; i <= n; ++i) {
      if (i != worst) centroid += simplex[i];
    }
    centroid /= n;

    const Vector reflected = centroid + (centroid - simplex[worst]);
    const double f_reflected = eval(reflected);
    if (f_reflected < values[best]) {
      const Vector expanded = centroid + 2.0 * (centroid - simplex[worst]);
      const double f_expanded = eval(expanded);
      if (f_expanded < f_reflected) {
        simplex[worst] = expanded;
        values[worst] = f_expanded;
      } else {
        simplex[worst] = reflected;
        values[worst] = f_reflected;
      }
      continue;
    }
    if (f_reflected < values[second]) {
      simplex[worst] = reflected;
      values[worst] = f_reflected;
      continue;
    }
    const bool outside = f_reflected < values[worst];
    const Vector contracted = outside ? Vector(centroid + 0.5 * (reflected - centroid))
                                      : Vector(centroid + 0.5 * (simplex[worst] - centroid));
    const double f_contracted = eval(contracted);
    if (f_contracted < (outside ? f_reflected : values[worst])) {
      simplex[worst] = contracted;
      values[worst] = f_contracted;
      continue;
    }
    for (int i = 0; i <= n; ++i) {
      if (i == best) continue;
      simplex[i] = simplex[best] + 0.5 * (simplex[i] - simplex[best]);
      values[i] = eval(simplex[i]);
    }
  }
  const int best = static_cast<int>(std::min_element(values.begin(), values.end()) - values.begin());
  result.x = simplex[best];
  result.value = values[best];
  result.evaluations = evaluations;
  return result;
}

}  // namespace blkit
