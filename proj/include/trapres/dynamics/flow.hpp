#pragma once

#include "trapres/dynamics/phase_space.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace trapres::dynamics {

struct FlowSample {
  double t = 0.0;
  PhasePoint point;
};

struct FlowResult {
  std::vector<FlowSample> points;
  std::vector<Mat> monodromy;  // empty unless the variational flow was requested
  bool escaped = false;
  std::optional<double> escape_time;
  int escape_side = 0;  // sign of the radial coordinate at escape
  double quadrature = 0.0;  // integral of FlowOptions::integrand along the path

  const PhasePoint& final_point() const { return points.back().point; }
};

struct FlowOptions {
  double tolerance = 1e-10;
  double initial_step = 1e-3;
  double max_step = 0.25;
  long max_steps = 2000000;
  bool stop_on_escape = true;
  /// Only the endpoints are stored when false.
  bool store_path = true;
  /// Optional scalar integrated along the trajectory (dq/dt = integrand).
  std::function<double(const PhasePoint&)> integrand;
};

/// Dormand-Prince 5(4) integration of H_p from t_span.first to t_span.second
/// (either direction). With `with_variational` the fundamental matrix of
/// dM/dt = J Hess(p) M, M(0) = I, is carried along.
FlowResult integrate_flow(const HamiltonianSystem& sys, const PhasePoint& start,
                          std::pair<double, double> t_span, bool with_variational,
                          const FlowOptions& opts = {});

/// Endpoint of the flow at time t, no escape test.
PhasePoint flow_to(const HamiltonianSystem& sys, const PhasePoint& start, double t,
                   double tolerance = 1e-10);

struct FlowDiagnostics {
  double energy_drift = 0.0;      // max |p(t) - p(0)|
  /// max |det M - 1| / max(1, prod of column norms)
  double det_defect = 0.0;
  /// max ||M^T J M - J|| / max(1, ||M||^2): relative to the size of the terms
  double symplectic_defect = 0.0;
};

FlowDiagnostics diagnose(const HamiltonianSystem& sys, const FlowResult& flow);

}  // namespace trapres::dynamics
