#pragma once

#include <cmath>
#include <string>
#include <utility>

#include "mills/verify.hpp"

namespace mills::detail {

// Accumulates one claim's sweep. Ties on the worst margin keep the first x.
class ReportBuilder {
 public:
  ReportBuilder(std::string claim_id, double tolerance) {
    report_.claim_id = std::move(claim_id);
    report_.tolerance = tolerance;
  }

  void record(double x, double margin, bool violated) {
    ++report_.points_checked;
    if (violated) ++report_.violations;
    if (!seen_ || margin < report_.worst_margin) {
      report_.worst_margin = margin;
      report_.worst_x = x;
      seen_ = true;
    }
  }

  VerificationReport finish() && {
    report_.passed = report_.violations == 0;
    return std::move(report_);
  }

 private:
  VerificationReport report_;
  bool seen_ = false;
};

}  // namespace mills::detail
