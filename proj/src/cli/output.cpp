#include <fmt/format.h>

#include <cmath>
#include <json.hpp>
#include <numbers>

#include "mills/bounds.hpp"
#include "mills/cli.hpp"

namespace mills::cli {

OutputRecord make_record(double x, double oracle_tol) {
  OutputRecord r;
  r.x = x;
  r.v = oracle_v(x, oracle_tol).value;
  r.g_pi = g(std::numbers::pi, x);
  r.g_4 = g(4.0, x);
  const Enclosure kom = komatsu_bounds(x);
  r.komatsu_lo = kom.lower;
  r.komatsu_hi = kom.upper;
  r.gap = r.g_4 - r.g_pi;
  r.rel_width = r.gap / r.v;
  return r;
}

std::string format_number(double v) { return fmt::format("{:#.17g}", v); }

std::string format_csv(std::span<const OutputRecord> rows) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const auto& r : rows) {
    out += fmt::format("{},{},{},{},{},{},{},{}\n", format_number(r.x),
                       format_number(r.v), format_number(r.g_pi),
                       format_number(r.g_4), format_number(r.komatsu_lo),
                       format_number(r.komatsu_hi), format_number(r.gap),
                       format_number(r.rel_width));
  }
  return out;
}

std::string format_json(std::span<const OutputRecord> rows) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    arr.push_back({{"x", r.x},
                   {"v", r.v},
                   {"g_pi", r.g_pi},
                   {"g_4", r.g_4},
                   {"komatsu_lo", r.komatsu_lo},
                   {"komatsu_hi", r.komatsu_hi},
                   {"gap", r.gap},
                   {"rel_width", r.rel_width}});
  }
  return arr.dump(2) + "\n";
}

std::string format_reports_json(std::span<const VerificationReport> reports) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : reports) {
    arr.push_back({{"claim_id", r.claim_id},
                   {"points_checked", r.points_checked},
                   {"violations", r.violations},
                   {"worst_margin", r.worst_margin},
                   {"worst_x", r.worst_x},
                   {"tolerance", r.tolerance},
                   {"passed", r.passed}});
  }
  return arr.dump(2) + "\n";
}

}  // namespace mills::cli
