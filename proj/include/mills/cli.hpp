#pragma once

// Command-line front end: eval, tabulate, verify, optimality, bench.
//
// Exit codes: 0 success, 1 verification failure or I/O error, 2 usage or
// domain error.

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mills/verify.hpp"

namespace mills::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

inline constexpr std::string_view kCsvHeader =
    "x,v,g_pi,g_4,komatsu_lo,komatsu_hi,gap,rel_width";

/// One tabulated abscissa. gap = g_4 - g_pi, rel_width = gap / v.
struct OutputRecord {
  double x = 0.0;
  double v = 0.0;
  double g_pi = 0.0;
  double g_4 = 0.0;
  double komatsu_lo = 0.0;
  double komatsu_hi = 0.0;
  double gap = 0.0;
  double rel_width = 0.0;
};

OutputRecord make_record(double x, double oracle_tol);

/// 17 significant digits, trailing zeros kept.
std::string format_number(double v);

std::string format_csv(std::span<const OutputRecord> rows);
std::string format_json(std::span<const OutputRecord> rows);
std::string format_reports_json(std::span<const VerificationReport> reports);

/// Runs the CLI on argv-style arguments (args[0] is the program name).
int run(std::span<const std::string> args, std::ostream& out,
        std::ostream& err);
int run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err);

}  // namespace mills::cli
