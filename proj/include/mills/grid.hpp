#pragma once

#include <span>
#include <vector>

namespace mills {

enum class Spacing { linear, logarithmic };

struct GridSpec {
  double x_min = 0.0;
  double x_max = 1.0;
  int count = 2;
  Spacing spacing = Spacing::linear;
  /// First abscissa of a logarithmic grid whose x_min is 0.
  double log_floor = 1e-6;
};

/// Throws std::invalid_argument for an unusable spec.
void validate(const GridSpec& spec);

/// Strictly increasing abscissas in [x_min, x_max]. A logarithmic grid with
/// x_min = 0 starts at log_floor.
std::vector<double> abscissas(const GridSpec& spec);

/// Sorted union of several grids with exact duplicates removed.
std::vector<double> merge_abscissas(std::span<const GridSpec> specs);

/// 10^5 logarithmic points on [1e-6, 50] and 10^3 linear points on [0, 1].
std::vector<GridSpec> default_sweep_grids();

}  // namespace mills
