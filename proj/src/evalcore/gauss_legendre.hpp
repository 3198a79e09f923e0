#pragma once

#include <vector>

namespace mills::detail {

/// Gauss-Legendre rule on [-1, 1].
template <class Real>
struct GaussRule {
  std::vector<Real> nodes;
  std::vector<Real> weights;
};

/// Nodes and weights computed in long double, rounded to double.
GaussRule<double> gauss_legendre(int n);

/// Nodes and weights in IEEE binary128.
GaussRule<__float128> gauss_legendre_quad(int n);

}  // namespace mills::detail
