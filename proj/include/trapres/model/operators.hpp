#pragma once

#include "trapres/model/grid_function.hpp"

#include <functional>
#include <vector>

namespace trapres::model {

/// Pi0 f(x', x_n) = f(x', 0).
GridFunction model_projector(const GridFunction& f);

/// Xi0 f = (f - f(x', 0)) / x_n; on the x_n = 0 row the centred difference of f.
/// Each quotient component is the float q nearest f/x_n for which fl(x_n q)
/// reproduces the numerator, when such a q exists within a few ulps.
GridFunction model_xi(const GridFunction& f);

/// U(t) f(x', x_n) = e^{-t/2} f(x', e^{-t} x_n), cubic (Newton form) interpolation
/// in x_n. Throws DomainError when e^{-t} x_n leaves the grid (t < 0).
GridFunction model_propagator(const GridFunction& f, double t);

/// Multiplication by x_n.
GridFunction times_xn(const GridFunction& f);

/// f - g pointwise.
GridFunction subtract(const GridFunction& f, const GridFunction& g);

/// Number of nodes off the x_n = 0 row where x_n Xi0 f differs bitwise from (1 - Pi0) f.
long xi_identity_mismatches(const GridFunction& f);

/// max |h D_{x_n} Pi0 f| (spectral derivative).
double annihilation_defect(const GridFunction& f);

using Cutoff = std::function<double(double xp, double xn)>;

struct KernelDecayRow {
  double t = 0.0;
  double ratio = 0.0;  // ||chi U(t)(1 - Pi0) f|| / ||f||_{H^1_h}
};

struct ImageIdentityRow {
  double t = 0.0;
  double lhs = 0.0;  // ||chi_t Pi0 f||^2, chi_t(x) = chi(x', e^t x_n)
  double rhs = 0.0;  // e^{-t} ||chi Pi0 f||^2
  double relative_error = 0.0;
};

struct DecayReport {
  std::vector<KernelDecayRow> kernel_decay;
  double kernel_rate = 0.0;  // least-squares slope of log(ratio) against t
  std::vector<ImageIdentityRow> image_identity;
};

DecayReport decay_estimates(const GridFunction& f, const Cutoff& cutoff, const std::vector<double>& t_values);

}  // namespace trapres::model
