#include "evalcore/gauss_legendre.hpp"

#include <quadmath.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mills::detail {
namespace {

long double cos_of(long double v) { return std::cos(v); }
long double abs_of(long double v) { return std::fabs(v); }
__float128 cos_of(__float128 v) { return cosq(v); }
__float128 abs_of(__float128 v) { return fabsq(v); }

// Newton iteration on P_n from the Tricomi initial guesses. The tolerance
// is a few units of the working precision.
template <class Real>
GaussRule<Real> build_rule(int n, Real eps) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  const Real pi = Real(3.14159265358979323846264338327950288Q);
  GaussRule<Real> rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    Real z = cos_of(pi * (Real(i) + Real(0.75)) / (Real(n) + Real(0.5)));
    Real dp = 0;
    for (int iter = 0; iter < 100; ++iter) {
      Real p0 = 1;
      Real p1 = z;
      for (int j = 2; j <= n; ++j) {
        const Real p2 = ((2 * j - 1) * z * p1 - (j - 1) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1;
      dp = n * (z * p1 - p0) / (z * z - 1);
      const Real step = p1 / dp;
      z -= step;
      if (abs_of(step) <= eps) {
        // Refresh the derivative at the converged node.
        p0 = 1;
        p1 = z;
        for (int j = 2; j <= n; ++j) {
          const Real p2 = ((2 * j - 1) * z * p1 - (j - 1) * p0) / j;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (z * p1 - p0) / (z * z - 1);
        break;
      }
    }
    const Real w = 2 / ((1 - z * z) * dp * dp);
    rule.nodes[i] = -z;
    rule.nodes[n - 1 - i] = z;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0;
  return rule;
}

}  // namespace

GaussRule<double> gauss_legendre(int n) {
  const auto wide = build_rule<long double>(n, 4e-19L);
  GaussRule<double> rule;
  rule.nodes.assign(wide.nodes.begin(), wide.nodes.end());
  rule.weights.assign(wide.weights.begin(), wide.weights.end());
  return rule;
}

GaussRule<__float128> gauss_legendre_quad(int n) {
  return build_rule<__float128>(n, 1e-32Q);
}

}  // namespace mills::detail
