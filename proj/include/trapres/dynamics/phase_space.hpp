#pragma once

#include <Eigen/Dense>

#include <functional>
#include <random>
#include <utility>

namespace trapres::dynamics {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// A point (x, xi) of T*R^m. Gradients and Hessians on phase space are laid out
/// as (d_x, d_xi), i.e. positions first.
struct PhasePoint {
  Vec x;
  Vec xi;

  PhasePoint() = default;
  PhasePoint(Vec x_, Vec xi_);

  int dim() const { return static_cast<int>(x.size()); }
  Vec stacked() const;
  static PhasePoint from_stacked(const Eigen::Ref<const Vec>& y);
  bool finite() const;
};

double distance(const PhasePoint& a, const PhasePoint& b);

/// Standard symplectic matrix J = [[0, I], [-I, 0]] on R^{2m}, so that
/// d/dt (x, xi) = J grad p.
Mat symplectic_matrix(int m);

/// Symbol p on T*R^m together with its derivatives and the escape geometry.
///
/// `radial` is a signed coordinate whose absolute value measures distance to
/// infinity (for the warped products, r); escape means |radial| reaching
/// escape_radius_outer, and the sign at escape identifies the exit end.
struct HamiltonianSystem {
  int dim = 0;
  std::function<double(const PhasePoint&)> p;
  std::function<Vec(const PhasePoint&)> grad_p;
  std::function<Mat(const PhasePoint&)> hess_p;
  std::function<double(const PhasePoint&)> radial;
  double escape_radius_inner = 1.0;
  double escape_radius_outer = 2.0;
  std::pair<double, double> energy_band{0.5, 1.5};

  double radial_of(const PhasePoint& pt) const;
  /// Throws PreconditionError when the radii or energy band are inconsistent.
  void validate() const;
};

/// Hamilton vector field H_p at a point, stacked as (dx/dt, dxi/dt).
Vec hamilton_field(const HamiltonianSystem& sys, const PhasePoint& pt);

/// Poisson bracket {a, b} = d_xi a . d_x b - d_x a . d_xi b from stacked gradients.
double poisson_bracket(const Vec& grad_a, const Vec& grad_b);

struct GradientCheck {
  double max_relative_error = 0.0;
  bool ok = false;
};

/// Compares grad_p and hess_p against central differences of p (resp. grad_p)
/// at points drawn by `sampler`. Passes when the relative error is below `tol`.
GradientCheck check_derivatives(const HamiltonianSystem& sys,
                                const std::function<PhasePoint(std::mt19937_64&)>& sampler,
                                int samples, std::uint64_t seed, double tol = 1e-6);

}  // namespace trapres::dynamics
