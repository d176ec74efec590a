#pragma once

#include "trapres/dynamics/phase_space.hpp"

#include <functional>

namespace trapres::dynamics {

struct DefiningFunction {
  std::function<double(const PhasePoint&)> value;
  std::function<Vec(const PhasePoint&)> grad;  // stacked (d_x, d_xi)
};

struct DefiningData {
  double c_plus = 0.0;
  double c_minus = 0.0;
  double bracket = 0.0;  // {phi_+, phi_-}
};

/// H_p phi = {p, phi}.
double hamilton_derivative(const HamiltonianSystem& sys, const DefiningFunction& phi, const PhasePoint& pt);

/// c_+- = -+ H_p phi_+- / phi_+-. Where |phi| <= 1e-8 the quotient is 0/0 and is
/// replaced by the ratio of derivatives along the unit normal grad(phi)/|grad(phi)|.
DefiningData defining_function_data(const HamiltonianSystem& sys, const DefiningFunction& phi_plus,
                                    const DefiningFunction& phi_minus, const PhasePoint& point);

enum class Sign { plus, minus };

struct TransportOptions {
  double nu_min = 1.0;          // decay rate assumed for the tail estimate
  double tail_fraction = 1e-6;  // tail allowed relative to the integral
  double tolerance = 1e-10;     // integrator tolerance (quadrature rides along)
  double k_tolerance = 1e-6;    // |f| allowed at the limit point on K
};

struct TransportResult {
  double value = 0.0;
  double tail = 0.0;
  double integral = 0.0;
  double f_at_end = 0.0;
};

/// a = +- int_0^inf f(exp(-+t H_p) rho) dt, truncated at `horizon` plus the tail
/// f(end) / nu_min.
TransportResult solve_transport(const HamiltonianSystem& sys, Sign sign,
                                const std::function<double(const PhasePoint&)>& f, const PhasePoint& point,
                                double horizon, const TransportOptions& opts = {});

}  // namespace trapres::dynamics
