#pragma once

#include "trapres/scaling/deformed_operator.hpp"
#include "trapres/scaling/resolvent.hpp"
#include "trapres/weyl/census.hpp"

#include <functional>
#include <string>
#include <vector>

namespace trapres::weyl {

/// Block-diagonal complex-scaled operator at a given h.
using OperatorBuilder = std::function<std::vector<scaling::DeformedOperator>(double h)>;

struct GapSample {
  cplx omega;
  double norm = 0.0;  // infinity when the shifted operator is singular
  double h = 0.0;
  double line = 0.0;  // Im omega / h
  bool flagged = false;
};

struct GapLineFit {
  double line = 0.0;
  double slope = 0.0;  // d log(max norm) / d log(1/h)
  double intercept = 0.0;
  std::vector<std::pair<double, double>> max_norm;  // (h, max unflagged norm)
  int flagged = 0;
};

struct GapScanOptions {
  double step_fraction = 0.125;  // Re omega step in units of h
  double collision_norm = 1e12;
  double margin_fraction = 0.05;  // required distance from gap edges, units of h
  unsigned threads = 1;
  scaling::ResolventOptions resolvent;
};

struct GapScan {
  std::vector<GapSample> samples;
  std::vector<GapLineFit> fits;
};

/// `line_count` lines spread over both gap components of `spec` (upper first).
std::vector<double> default_gap_lines(const BandSpec& spec, int line_count);

/// Resolvent norm on horizontal lines Im omega = line * h across re_window, per h.
/// Lines must sit inside a gap with margin; samples above collision_norm are
/// flagged and left out of the log-log fit of max norm against 1/h.
GapScan gap_scan(const OperatorBuilder& build, const BandSpec& spec, const std::vector<double>& h_values,
                 const std::vector<double>& lines, const GapScanOptions& opts = {});

}  // namespace trapres::weyl
