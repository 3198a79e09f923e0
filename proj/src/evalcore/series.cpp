#include <fmt/format.h>

#include <cmath>
#include <limits>

#include "mills/evaluation.hpp"

namespace mills {

SeriesState::SeriesState(int n) : n_terms(n) {
  if (n < 1) throw std::invalid_argument("SeriesState: n_terms must be >= 1");
  coefficients.resize(static_cast<std::size_t>(n));
  coefficients[0] = kSqrtPi;
  if (n > 1) coefficients[1] = -2.0;
  for (int k = 1; k + 1 < n; ++k) {
    coefficients[k + 1] = 2.0 * coefficients[k - 1] / (k + 1);
  }
}

Evaluation series_v(double x, int n_terms) {
  if (!(x >= 0.0 && x <= kSeriesMaxX)) {
    throw DomainError(fmt::format("series_v: x = {:g} outside [0, {:g}]", x,
                                  kSeriesMaxX));
  }
  if (n_terms < 1 || n_terms > kSeriesMaxTerms) {
    throw std::invalid_argument(fmt::format(
        "series_v: n_terms must lie in [1, {}]", kSeriesMaxTerms));
  }
  // Two extra coefficients feed the truncation estimate.
  const SeriesState state(n_terms + 2);
  const auto& c = state.coefficients;

  // Horner with a running rounding-error bound (Higham, Alg. 5.1).
  double p = c[n_terms - 1];
  double mu = 0.5 * std::fabs(p);
  for (int k = n_terms - 2; k >= 0; --k) {
    p = p * x + c[k];
    mu = x * mu + std::fabs(p);
  }
  const double u = std::numeric_limits<double>::epsilon() / 2;
  // Coefficients carry their own rounding, a few ulps after the recurrence.
  double coefficient_error = 0.0;
  {
    double power = 1.0;
    for (int k = 0; k < n_terms; ++k) {
      coefficient_error += (k + 1) * u * std::fabs(c[k]) * power;
      power *= x;
    }
  }
  const double rounding = u * (2 * mu - std::fabs(p)) + coefficient_error;

  // Tail: |t_{n+2}| = |t_n| * 2x^2/(n+2), so the even and odd subsequences
  // each decay geometrically once n + 2 > 2x^2.
  double tail = 0.0;
  if (x > 0.0) {
    double t_even = std::fabs(c[n_terms]) * std::pow(x, n_terms);
    double t_odd = std::fabs(c[n_terms + 1]) * std::pow(x, n_terms + 1);
    int n = n_terms;
    double ratio = 2 * x * x / (n + 2);
    while (ratio >= 0.5) {
      tail += t_even + t_odd;
      t_even *= ratio;
      t_odd *= 2 * x * x / (n + 3);
      n += 2;
      ratio = 2 * x * x / (n + 2);
    }
    tail += (t_even + t_odd) / (1 - ratio);
  }
  return {x, p, Method::series, tail + rounding};
}

}  // namespace mills
