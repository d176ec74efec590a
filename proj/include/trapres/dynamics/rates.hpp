#pragma once

#include "trapres/dynamics/trapping.hpp"

#include <functional>
#include <vector>

namespace trapres::dynamics {

struct ExpansionRates {
  double nu_min = 0.0;
  double nu_max = 0.0;
  double mu_max = 0.0;
  double horizon = 0.0;
  int sample_count = 0;
  long r_normal_order = 0;
  /// Largest fit residual seen over all transverse exponents (same units as nu).
  double fit_residual = 0.0;
  /// Largest |lambda_i + lambda_{2m-1-i}| over samples: the +/- pairing defect.
  double pairing_defect = 0.0;
  /// Per-sample finite-time exponents in decreasing order.
  std::vector<std::vector<double>> exponents;
};

struct RateOptions {
  double reorthonormalize_every = 1.0;
  long r_cap = 1000000;
  double mu_tolerance = 1e-6;
  /// Fit residual allowed as a fraction of the transverse exponent.
  double residual_fraction = 0.1;
};

/// Finite-time Lyapunov spectrum per sample (QR re-orthonormalisation, linear
/// fit of the accumulated logarithms over the trailing half of the horizon).
/// The two extreme exponents are transverse, nu = (l_max - l_min)/2; the
/// remaining ones bound the tangential rate.
ExpansionRates expansion_rates(const HamiltonianSystem& sys, const std::vector<TrappedSample>& trapped,
                               double horizon, const RateOptions& opts = {});

/// floor(nu_min / mu_max) limited to cap, or cap when mu_max <= mu_tolerance.
long r_normal_order(double nu_min, double mu_max, long cap = 1000000, double mu_tolerance = 1e-6);

struct PinchingVerdict {
  bool pinched = false;
  long r_normal_order = 0;
  double margin = 0.0;
};

PinchingVerdict check_pinching(const ExpansionRates& rates, double epsilon, long cap = 1000000,
                               double mu_tolerance = 1e-6);

/// s-dependent correction added to p; value, gradient and Hessian in the
/// stacked (x, xi) layout. All three must vanish identically at s = 0.
struct Perturbation {
  std::function<double(const PhasePoint&, double)> value;
  std::function<Vec(const PhasePoint&, double)> grad;
  std::function<Mat(const PhasePoint&, double)> hess;
};

HamiltonianSystem perturbed_system(const HamiltonianSystem& base, const Perturbation& pert, double s);

struct StabilityRow {
  double s = 0.0;
  ExpansionRates rates;
  bool flagged = false;
  std::string note;
};

/// For each s, relocates every base sample on {p_s = p(sample)} by bisection
/// between seeds displaced by +/- `displacement` in the first position
/// coordinate, then recomputes the rates. The s = 0 row reuses the base samples.
std::vector<StabilityRow> perturbation_stability_scan(const HamiltonianSystem& base,
                                                      const std::vector<TrappedSample>& base_samples,
                                                      const Perturbation& pert,
                                                      const std::vector<double>& s_values,
                                                      double horizon, const RateOptions& opts = {},
                                                      double displacement = 0.25);

}  // namespace trapres::dynamics
