#include "blkit/poly.hpp"

#include "blkit/error.hpp"

#include <cmath>
#include <map>
#include <string>

namespace blkit {

namespace {

using Terms = std::map<std::vector<int>, double>;

Terms multiply(const Terms& a, const Terms& b) {
  Terms out;
  for (const auto& [ea, ca] : a) {
    for (const auto& [eb, cb] : b) {
      std::vector<int> e(ea.size());
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      out[e] += ca * cb;
    }
  }
  return out;
}

std::vector<Monomial> to_monomials(const Terms& terms) {
  std::vector<Monomial> out;
  for (const auto& [e, c] : terms) {
    if (c != 0.0) out.push_back({e, c});
  }
  return out;
}

double power(double x, int k) {
  double r = 1;
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

}  // namespace

int PolyMap::degree() const {
  int d = 0;
  for (const auto& out : outputs) {
    for (const auto& mono : out) {
      int s = 0;
      for (int e : mono.exps) s += e;
      d = std::max(d, s);
    }
  }
  return d;
}

PolyMap make_poly_map(int n, std::vector<std::vector<Monomial>> outputs, int max_degree) {
  if (n < 1) throw Error(ErrorCode::DimensionMismatch, "input dimension must be positive");
  if (outputs.empty()) throw Error(ErrorCode::DimensionMismatch, "map needs at least one output");
  PolyMap map{n, {}};
  for (std::size_t k = 0; k < outputs.size(); ++k) {
    Terms terms;
    for (const auto& mono : outputs[k]) {
      if (static_cast<int>(mono.exps.size()) != n)
        throw Error(ErrorCode::DimensionMismatch, "monomial in output " + std::to_string(k) + " has " +
                                                      std::to_string(mono.exps.size()) + " exponents");
      int deg = 0;
      for (int e : mono.exps) {
        if (e < 0) throw Error(ErrorCode::InvalidInput, "negative monomial exponent");
        deg += e;
      }
      if (deg > max_degree)
        throw Error(ErrorCode::InvalidInput, "monomial degree " + std::to_string(deg) + " exceeds " +
                                                 std::to_string(max_degree));
      if (!std::isfinite(mono.coef)) throw Error(ErrorCode::InvalidInput, "non-finite coefficient");
      terms[mono.exps] += mono.coef;
    }
    map.outputs.push_back(to_monomials(terms));
  }
  return map;
}

PolyMap linear_poly_map(const Matrix& l, const Vector& b) {
  const int n = static_cast<int>(l.cols());
  std::vector<std::vector<Monomial>> outputs(l.rows());
  for (int r = 0; r < l.rows(); ++r) {
    if (b.size() > 0) outputs[r].push_back({std::vector<int>(n, 0), b(r)});
    for (int c = 0; c < n; ++c) {
      std::vector<int> e(n, 0);
      e[c] = 1;
      outputs[r].push_back({e, l(r, c)});
    }
  }
  return make_poly_map(n, std::move(outputs), 1);
}

Vector evaluate(const PolyMap& map, const Vector& x) {
  Vector y = Vector::Zero(map.out_dim());
  for (int r = 0; r < map.out_dim(); ++r) {
    for (const auto& mono : map.outputs[r]) {
      double t = mono.coef;
      for (int i = 0; i < map.n; ++i) t *= power(x(i), mono.exps[i]);
      y(r) += t;
    }
  }
  return y;
}

Matrix differential(const PolyMap& map, const Vector& x) {
  Matrix j = Matrix::Zero(map.out_dim(), map.n);
  for (int r = 0; r < map.out_dim(); ++r) {
    for (const auto& mono : map.outputs[r]) {
      for (int i = 0; i < map.n; ++i) {
        if (mono.exps[i] == 0) continue;
        double t = mono.coef * mono.exps[i];
        for (int k = 0; k < map.n; ++k) t *= power(x(k), k == i ? mono.exps[k] - 1 : mono.exps[k]);
        j(r, i) += t;
      }
    }
  }
  return j;
}

PolyMap compose_affine(const PolyMap& map, const Matrix& q, const Vector& x0) {
  const int n = map.n;
  // Coordinate i of x0 + Q (x - x0) as a degree-1 polynomial in x.
  std::vector<Terms> coord(n);
  for (int i = 0; i < n; ++i) {
    const double shift = x0(i) - q.row(i).dot(x0);
    if (shift != 0.0) coord[i][std::vector<int>(n, 0)] = shift;
    for (int c = 0; c < n; ++c) {
      if (q(i, c) == 0.0) continue;
      std::vector<int> e(n, 0);
      e[c] = 1;
      coord[i][e] += q(i, c);
    }
  }
  std::vector<std::vector<Monomial>> outputs;
  for (const auto& out : map.outputs) {
    Terms sum;
    for (const auto& mono : out) {
      Terms t{{std::vector<int>(n, 0), mono.coef}};
      for (int i = 0; i < n; ++i)
        for (int k = 0; k < mono.exps[i]; ++k) t = multiply(t, coord[i]);
      for (const auto& [e, c] : t) sum[e] += c;
    }
    outputs.push_back(to_monomials(sum));
  }
  return make_poly_map(n, std::move(outputs), std::max(1, map.degree()));
}

}  // namespace blkit
