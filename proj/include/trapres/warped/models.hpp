#pragma once

#include "trapres/scaling/resonances.hpp"
#include "trapres/warped/cross_section.hpp"

#include <utility>
#include <vector>

namespace trapres::warped {

using scaling::cplx;

/// dr^2 + cosh^2(r) C^2 g_N on R x N, dim_n = 1 + dim N.
struct WarpedModel {
  CrossSection cross_section = CrossSection::circle(6.283185307179586);
  int dim_n = 2;
  double h = 0.1;
  double scale_C = 1.0;

  void validate() const;
  /// Laplace eigenvalue of the scaled cross-section for mode k.
  double scaled_lambda(const AngularMode& m) const { return m.lambda / (scale_C * scale_C); }
};

struct EffectiveBarrier {
  double V0 = 0.0;
  bool sub_barrier = false;  // V0 <= h^2/4
  scaling::Potential potential;
};

/// V0 = h^2 lambda - h^2 (n-1)(n-3)/4; the mode reduces to -h^2 d_r^2 + V0 sech^2 r.
EffectiveBarrier effective_barrier(const WarpedModel& model, double lambda);

struct OracleResult {
  std::vector<cplx> omegas;  // for each k: +branch then -branch
  bool sub_barrier = false;
};

/// omega_k = +-sqrt(V0 - h^2/4) - i h (k + 1/2), k = 0..k_max.
OracleResult poschl_teller_oracle(double V0, double h, int k_max);

struct SolverSettings {
  double theta = 0.5;
  double theta2 = 0.65;
  double R = 0.75;
  double grid_max = 3.0;
  int N = 2000;
  unsigned threads = 1;
  scaling::ExtractionOptions extraction;
};

struct ModeRecord {
  AngularMode mode;
  double V0 = 0.0;
  bool sub_barrier = false;
  int resonances = 0;
  bool separation_ok = true;
  double separation_ratio = 0.0;
};

struct ModelResonances {
  std::vector<scaling::Resonance> resonances;
  std::vector<ModeRecord> modes;
  scaling::SearchBox box;
  bool use_solver = false;
};

/// Enumerates modes with h sqrt(lambda_scaled) within [re_min - 3h, re_max + 3h]
/// and collects their resonances inside `box` (oracle or complex-scaling solver),
/// each labelled by mode index and carrying the angular multiplicity.
ModelResonances model_resonances(const WarpedModel& model, const scaling::SearchBox& box, bool use_solver,
                                 const SolverSettings& settings = {}, long mode_cap = 10000);

/// Vol_sigma(K cap p^{-1}([a, b])) = Vol(N) C^d omega_d (b^d - a^d), d = dim N
/// (2 L C (b - a) for the circle).
double trapped_volume(const WarpedModel& model, std::pair<double, double> band);

/// Line operator for a single mode, the solver's building block.
scaling::DeformedOperator mode_operator(const WarpedModel& model, double V0, double theta,
                                        const SolverSettings& settings);

}  // namespace trapres::warped
