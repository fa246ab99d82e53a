#pragma once

#include "blkit/linalg.hpp"

#include <vector>

namespace blkit {

struct Monomial {
  std::vector<int> exps;  // one exponent per input coordinate
  double coef = 0;
};

/// Polynomial map R^n -> R^{n_j}: one list of monomials per output coordinate.
struct PolyMap {
  int n = 0;
  std::vector<std::vector<Monomial>> outputs;

  int out_dim() const { return static_cast<int>(outputs.size()); }
  int degree() const;
};

inline constexpr int kDefaultMaxDegree = 3;

/// Checks exponent shapes and the degree cap, merges repeated monomials and
/// drops zero coefficients.
PolyMap make_poly_map(int n, std::vector<std::vector<Monomial>> outputs, int max_degree = kDefaultMaxDegree);
/// x -> L x + b as a degree-1 map.
PolyMap linear_poly_map(const Matrix& l, const Vector& b = {});

Vector evaluate(const PolyMap& map, const Vector& x);
/// Exact Jacobian at x by formal differentiation.
Matrix differential(const PolyMap& map, const Vector& x);

/// x -> map(x0 + Q (x - x0)), expanded back into monomials.
PolyMap compose_affine(const PolyMap& map, const Matrix& q, const Vector& x0);

}  // namespace blkit
