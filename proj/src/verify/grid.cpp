#include "mills/grid.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mills {

void validate(const GridSpec& spec) {
  if (!std::isfinite(spec.x_min) || !std::isfinite(spec.x_max) ||
      spec.x_min < 0.0 || !(spec.x_max > spec.x_min)) {
    throw std::invalid_argument(fmt::format(
        "grid: need 0 <= x_min < x_max, got [{:g}, {:g}]", spec.x_min,
        spec.x_max));
  }
  if (spec.count < 1) throw std::invalid_argument("grid: count must be >= 1");
  if (spec.spacing == Spacing::logarithmic && spec.x_min == 0.0 &&
      !(spec.log_floor > 0.0 && spec.log_floor < spec.x_max)) {
    throw std::invalid_argument(
        "grid: log_floor must lie in (0, x_max) for a logarithmic grid from 0");
  }
}

std::vector<double> abscissas(const GridSpec& spec) {
  validate(spec);
  const int n = spec.count;
  std::vector<double> xs(static_cast<std::size_t>(n));
  if (spec.spacing == Spacing::linear) {
    if (n == 1) return {spec.x_min};
    const double step = (spec.x_max - spec.x_min) / (n - 1);
    for (int i = 0; i < n; ++i) xs[i] = spec.x_min + i * step;
  } else {
    const double lo = spec.x_min > 0.0 ? spec.x_min : spec.log_floor;
    if (n == 1) return {lo};
    const double log_lo = std::log(lo);
    const double step = (std::log(spec.x_max) - log_lo) / (n - 1);
    for (int i = 0; i < n; ++i) xs[i] = std::exp(log_lo + i * step);
    xs.front() = lo;
  }
  xs.back() = spec.x_max;
  if (std::adjacent_find(xs.begin(), xs.end(), std::greater_equal<>()) !=
      xs.end()) {
    throw std::invalid_argument("grid: abscissas are not strictly increasing");
  }
  return xs;
}

std::vector<double> merge_abscissas(std::span<const GridSpec> specs) {
  std::vector<double> all;
  for (const auto& s : specs) {
    const auto xs = abscissas(s);
    all.insert(all.end(), xs.begin(), xs.end());
  }
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  return all;
}

std::vector<GridSpec> default_sweep_grids() {
  return {
      GridSpec{1e-6, 50.0, 100'000, Spacing::logarithmic, 1e-6},
      GridSpec{0.0, 1.0, 1'000, Spacing::linear, 1e-6},
  };
}

}  // namespace mills
