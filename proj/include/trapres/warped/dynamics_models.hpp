#pragma once

#include "trapres/dynamics/defining.hpp"
#include "trapres/dynamics/rates.hpp"
#include "trapres/warped/models.hpp"

#include <functional>

namespace trapres::warped {

namespace dyn = trapres::dynamics;

/// Dual metric G(y, eta) of the cross-section in local coordinates, with its
/// derivatives in the stacked (y, eta) layout.
struct Cometric {
  int dim = 1;
  std::function<double(const dyn::Vec& y, const dyn::Vec& eta)> G;
  std::function<dyn::Vec(const dyn::Vec& y, const dyn::Vec& eta)> grad;
  std::function<dyn::Mat(const dyn::Vec& y, const dyn::Vec& eta)> hess;
};

/// Circle in arclength with metric multiplied by C^2: G = eta^2 / C^2.
Cometric circle_cometric(double C);

/// Surface of revolution du^2 + rho(u)^2 dv^2 times C^2:
/// G = (eta_u^2 + eta_v^2 / rho^2) / C^2.
struct SurfaceOfRevolution {
  std::function<double(double)> rho, rho_d1, rho_d2;
  /// rho = 1 + a (1 - cos u): a torus-like profile with a neck at u = 0.
  static SurfaceOfRevolution neck(double a);
};
Cometric surface_cometric(const SurfaceOfRevolution& s, double C);

struct ModelDynamics {
  dyn::HamiltonianSystem system;
  dyn::DefiningFunction phi_plus;   // xi_r - p tanh r
  dyn::DefiningFunction phi_minus;  // xi_r + p tanh r
};

/// p = sqrt(xi_r^2 + sech^2(r) G) on T*(R x N), coordinates x = (r, y), xi = (xi_r, eta).
ModelDynamics warped_dynamics(const Cometric& G);

/// Circle cross-sections only (the flow on T*S^1 is explicit).
ModelDynamics dynamics_for_model(const WarpedModel& model);

/// c_+- = 1 +- (xi_r/p) tanh r.
double closed_form_c(const dyn::HamiltonianSystem& sys, const dyn::PhasePoint& pt, int sign);

/// s sin(theta) sech(r) on the circle model; coordinates (r, theta).
dyn::Perturbation circle_bump_perturbation();

}  // namespace trapres::warped
