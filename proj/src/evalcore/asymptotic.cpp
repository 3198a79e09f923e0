#include <cmath>
#include <limits>

#include "mills/evaluation.hpp"

namespace mills {

Evaluation asymptotic_v(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError("asymptotic_v: x must be finite and > 0");
  }
  const double eps = std::numeric_limits<double>::epsilon();
  const double inv2x2 = 1.0 / (2 * x * x);
  double term = 1.0 / x;
  double sum = term;
  double omitted = 0.0;
  for (int n = 1;; ++n) {
    const double next = -term * (2 * n - 1) * inv2x2;
    if (std::fabs(next) >= std::fabs(term) ||
        std::fabs(next) <= 0.25 * eps * std::fabs(sum)) {
      omitted = std::fabs(next);
      break;
    }
    sum += next;
    term = next;
  }
  // Remainder of the erfc expansion is bounded by the first omitted term.
  return {x, sum, Method::asymptotic, omitted + 2 * eps * std::fabs(sum)};
}

}  // namespace mills
