#include <fmt/format.h>

#include <cmath>
#include <limits>

#include "mills/evaluation.hpp"

namespace mills {

// Modified Lentz on V(x) = 1/(x + a_2/(x + a_3/(x + ...))), a_j = (j - 1)/2.
// All partial numerators are positive, so consecutive convergents bracket
// V and the last change bounds the truncation error.
Evaluation cf_v(double x, int max_depth) {
  if (!(x >= kContinuedFractionMinX) || !std::isfinite(x)) {
    throw DomainError(fmt::format("cf_v: x = {:g} outside [{:g}, inf)", x,
                                  kContinuedFractionMinX));
  }
  if (max_depth < 1) throw std::invalid_argument("cf_v: max_depth must be >= 1");

  constexpr double tiny = 1e-300;
  const double eps = std::numeric_limits<double>::epsilon();

  // Lentz runs on the denominator W = x + a_2/(x + ...), V = 1/W.
  double f = x;
  double c = x;
  double d = 0.0;
  double previous = f;
  for (int j = 2; j <= max_depth; ++j) {
    const double a = 0.5 * (j - 1);
    d = x + a * d;
    if (d == 0.0) d = tiny;
    c = x + a / c;
    if (c == 0.0) c = tiny;
    d = 1.0 / d;
    const double delta = c * d;
    previous = f;
    f *= delta;
    if (std::fabs(delta - 1.0) <= eps) {
      const double value = 1.0 / f;
      const double bound =
          std::fabs(value - 1.0 / previous) + 4 * j * eps * value;
      return {x, value, Method::continued_fraction, bound};
    }
  }
  throw ConvergenceError(fmt::format(
      "cf_v: no convergence at x = {:g} within depth {} (last change {:g})", x,
      max_depth, std::fabs(1.0 / f - 1.0 / previous)));
}

}  // namespace mills
