#include <quadmath.h>

#include <cmath>
#include <fmt/format.h>
#include <vector>

#include "evalcore/double_double.hpp"
#include "evalcore/gauss_legendre.hpp"
#include "mills/evaluation.hpp"

// V(x) = int_0^inf 2 s exp(-s^2) / sqrt(x^2 + s^2) ds.
//
// The integrand is smooth on the real axis but has branch points at s = +-ix,
// so for small x the mesh is graded toward s = 0. All breakpoints are powers
// of two, which lets every panel's nodes and exp(-s^2) factors be tabulated
// once in binary128 and stored as double-double. A query then only needs a
// double-double sqrt and divide per node.

namespace mills {
namespace {

using detail::DoubleDouble;

constexpr int kDyadicLevels = 60;   // finest breakpoint 2^-60
constexpr double kUniformStart = 1.0;
constexpr double kUniformWidth = 0.5;
constexpr int kUniformPanels = 16;  // [1, 9]; exp(-81) is far below 1e-30
constexpr int kCoarseNodes = 16;
constexpr int kFineNodes = 32;
constexpr double kLargeX = 1e100;   // beyond this V(x) = 1/x to double-double

struct NodeTerm {
  DoubleDouble s_squared;
  DoubleDouble weight;  // half-width * w_i * 2 s exp(-s^2)
};

struct Panel {
  std::vector<NodeTerm> coarse;
  std::vector<NodeTerm> fine;
};

DoubleDouble to_dd(__float128 v) {
  const double hi = static_cast<double>(v);
  const double lo = static_cast<double>(v - static_cast<__float128>(hi));
  return {hi, lo};
}

std::vector<NodeTerm> tabulate(const detail::GaussRule<__float128>& rule,
                               __float128 a, __float128 b) {
  const __float128 half = (b - a) / 2;
  const __float128 mid = (a + b) / 2;
  std::vector<NodeTerm> terms;
  terms.reserve(rule.nodes.size());
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const __float128 s = mid + half * rule.nodes[i];
    const __float128 s2 = s * s;
    const __float128 w = half * rule.weights[i] * 2 * s * expq(-s2);
    terms.push_back({to_dd(s2), to_dd(w)});
  }
  return terms;
}

struct OracleMesh {
  std::vector<Panel> prefix;   // [0, 2^-m], m = 0..kDyadicLevels
  std::vector<Panel> dyadic;   // [2^-(m+1), 2^-m], m = 0..kDyadicLevels-1
  std::vector<Panel> uniform;  // [1 + j/2, 1.5 + j/2]

  OracleMesh() {
    const auto coarse = detail::gauss_legendre_quad(kCoarseNodes);
    const auto fine = detail::gauss_legendre_quad(kFineNodes);
    auto make = [&](__float128 a, __float128 b) {
      return Panel{tabulate(coarse, a, b), tabulate(fine, a, b)};
    };
    for (int m = 0; m <= kDyadicLevels; ++m) {
      prefix.push_back(make(0, ldexpq(1, -m)));
    }
    for (int m = 0; m < kDyadicLevels; ++m) {
      dyadic.push_back(make(ldexpq(1, -m - 1), ldexpq(1, -m)));
    }
    for (int j = 0; j < kUniformPanels; ++j) {
      const __float128 a = kUniformStart + j * kUniformWidth;
      uniform.push_back(make(a, a + kUniformWidth));
    }
  }
};

const OracleMesh& mesh() {
  static const OracleMesh instance;
  return instance;
}

void accumulate(const std::vector<NodeTerm>& terms, const DoubleDouble& x2,
                DoubleDouble& sum) {
  for (const auto& t : terms) {
    sum += t.weight / detail::sqrt(x2 + t.s_squared);
  }
}

// Smallest m in [0, kDyadicLevels] with 2^-m <= x.
int first_level(double x) {
  if (x >= 1.0) return 0;
  int m = 0;
  while (m < kDyadicLevels && std::ldexp(1.0, -m) > x) ++m;
  return m;
}

}  // namespace

Evaluation oracle_v(double x, double target_abs_error) {
  if (!(x >= 0.0) || !std::isfinite(x)) {
    throw DomainError("oracle_v: x must be finite and >= 0");
  }
  if (!(target_abs_error >= kOracleFinestTolerance)) {
    throw PrecisionError(fmt::format(
        "oracle_v: target_abs_error {:g} is below the attainable {:g}",
        target_abs_error, kOracleFinestTolerance));
  }

  Evaluation out{x, 0.0, Method::oracle, 0.0};
  if (x > kLargeX) {
    // 1/sqrt(x^2 + s^2) = (1/x)(1 + O(s^2/x^2)) and the weights integrate to 1.
    out.value = 1.0 / x;
    out.abs_error_bound = 0.5 * detail::ulp(out.value);
    return out;
  }

  const OracleMesh& m = mesh();
  const DoubleDouble x2 = detail::two_prod(x, x);
  const int level = first_level(x);

  DoubleDouble coarse;
  DoubleDouble fine;
  auto add_panel = [&](const Panel& p) {
    accumulate(p.coarse, x2, coarse);
    accumulate(p.fine, x2, fine);
  };
  add_panel(m.prefix[level]);
  for (int j = level - 1; j >= 0; --j) add_panel(m.dyadic[j]);
  for (const auto& p : m.uniform) add_panel(p);

  out.value = fine.to_double();
  double bound = detail::abs(fine - coarse).to_double();
  bound += 0.5 * detail::ulp(out.value);
  if (x > 0.0 && x < std::ldexp(1.0, -kDyadicLevels)) {
    // Branch points sit inside the first panel; its whole contribution is
    // below 2 * 2^-60.
    bound += std::ldexp(1.0, 1 - kDyadicLevels);
  }
  out.abs_error_bound = bound;
  if (bound > target_abs_error) {
    throw PrecisionError(fmt::format(
        "oracle_v: estimated error {:g} exceeds target {:g} at x = {:g}",
        bound, target_abs_error, x));
  }
  return out;
}

}  // namespace mills
