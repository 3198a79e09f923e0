#include <fmt/format.h>

#include <cmath>
#include <limits>
#include <vector>

#include "mills/verify.hpp"

namespace mills {
namespace {

// Scan abscissas: geometric from x_lo, or 0 followed by a geometric run
// starting six decades below x_hi.
std::vector<double> scan_points(double x_lo, double x_hi, int count) {
  if (x_lo > 0.0) {
    return abscissas(GridSpec{x_lo, x_hi, count, Spacing::logarithmic, x_lo});
  }
  std::vector<double> xs{0.0};
  const auto tail = abscissas(
      GridSpec{0.0, x_hi, count - 1, Spacing::logarithmic, x_hi * 1e-6});
  xs.insert(xs.end(), tail.begin(), tail.end());
  return xs;
}

}  // namespace

Counterexample find_crossing(double k, double x_lo, double x_hi,
                             double oracle_tol, CrossingOptions options) {
  if (!(k > 0.0) || !std::isfinite(k)) {
    throw DomainError(fmt::format("find_crossing: k = {:g} must be > 0", k));
  }
  if (!(x_lo >= 0.0 && x_hi > x_lo) || !std::isfinite(x_hi)) {
    throw DomainError("find_crossing: need 0 <= x_lo < x_hi");
  }
  if (options.scan_points < 2) {
    throw std::invalid_argument("find_crossing: scan_points must be >= 2");
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  auto h = [&](double x) { return h_gap(k, x, oracle_tol).h; };

  if (options.probe_zero && x_lo == 0.0) {
    const double h0 = h(0.0);
    if (h0 > oracle_tol) {
      return {k, 0.0, h0, CounterexampleKind::lower_bound_fails_at_zero, nan};
    }
  }

  const std::vector<double> xs = scan_points(x_lo, x_hi, options.scan_points);
  std::vector<double> hs(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) hs[i] = h(xs[i]);

  std::size_t first = xs.size();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (hs[i] < -oracle_tol) {
      first = i;
      break;
    }
  }
  if (first == xs.size()) {
    std::size_t lowest = 0;
    for (std::size_t i = 1; i < xs.size(); ++i) {
      if (hs[i] < hs[lowest]) lowest = i;
    }
    return {k, xs[lowest], hs[lowest], CounterexampleKind::none_found, nan};
  }

  double crossing = nan;
  if (first > 0) {
    // h(left) >= -tol > h(right); locate the sign change of h itself.
    double left = xs[first - 1];
    double right = xs[first];
    if (hs[first - 1] >= 0.0) {
      for (int step = 0; step < options.bisection_steps; ++step) {
        const double mid = 0.5 * (left + right);
        if (mid <= left || mid >= right) break;
        (h(mid) < 0.0 ? right : left) = mid;
      }
    }
    crossing = 0.5 * (left + right);
  }

  // Most adverse scanned point; for 3 < k < 4 only points beyond a_k count.
  const bool threshold_regime = k > 3.0 && k < 4.0;
  const double floor_x = threshold_regime ? a_threshold(k) : -1.0;
  std::size_t witness = xs.size();
  for (std::size_t i = first; i < xs.size(); ++i) {
    if (xs[i] <= floor_x || !(hs[i] < -oracle_tol)) continue;
    if (witness == xs.size() || hs[i] < hs[witness]) witness = i;
  }
  if (witness == xs.size()) {
    return {k, nan, nan, CounterexampleKind::none_found, crossing};
  }
  return {k, xs[witness], hs[witness], CounterexampleKind::upper_bound_fails,
          crossing};
}

}  // namespace mills
