#pragma once

#include "trapres/scaling/eigensolver.hpp"

#include <vector>

namespace trapres::scaling {

struct SearchBox {
  double re_min = 0.0;
  double re_max = 0.0;
  double im_min = 0.0;
  double im_max = 0.0;

  bool contains(cplx w) const {
    return w.real() >= re_min && w.real() <= re_max && w.imag() >= im_min && w.imag() <= im_max;
  }
  bool contains(const SearchBox& b) const {
    return b.re_min >= re_min && b.re_max <= re_max && b.im_min >= im_min && b.im_max <= im_max;
  }
  bool empty() const { return !(re_min <= re_max && im_min <= im_max); }
};

struct Resonance {
  cplx omega;
  cplx energy;
  int mode = -1;
  int multiplicity = 1;
  double residual = 0.0;
  double theta_drift = 0.0;
  bool flagged = false;  // ambiguous theta matching
};

struct ExtractionOptions {
  double sector_margin = 0.05;
  double drift_abs = 1e-4;
  double drift_rel = 1e-3;
  double cluster_radius = 1e-6;
  double separation_required = 10.0;
};

struct ExtractionReport {
  std::vector<Resonance> resonances;
  int candidates = 0;  // theta_1 eigenvalues inside the box and sector
  int rejected = 0;
  /// min over rejected candidates of drift / tolerance (infinity when none).
  double separation_ratio = 0.0;
  bool separation_ok = true;
  double max_accepted_drift = 0.0;
};

double drift_tolerance(cplx omega, const ExtractionOptions& opts = {});

/// omega = sqrt(E) on the branch Re omega >= 0.
cplx frequency(cplx energy);

/// Two-angle stability filter on precomputed spectra.
ExtractionReport filter_resonances(const DeformedOperator& op1, const std::vector<cplx>& eig1,
                                   const std::vector<cplx>& eig2, double theta1, const SearchBox& box,
                                   const ExtractionOptions& opts = {});

/// Requires shared grid, h and potential, and theta_2 >= theta_1 + 0.1.
ExtractionReport extract_resonances(const DeformedOperator& op1, const DeformedOperator& op2,
                                    const SearchBox& box, const ExtractionOptions& opts = {});

}  // namespace trapres::scaling
