#pragma once

#include "trapres/scaling/profile.hpp"

#include <Eigen/Dense>

#include <complex>
#include <functional>

namespace trapres::scaling {

using cplx = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;

/// Real potential on the axis. When `analytic` is set it is evaluated on the
/// deformed contour r + i f(r) instead, which lifts the compact-support
/// requirement (the continuation must be holomorphic on the swept region).
struct Potential {
  std::function<double(double)> real;
  std::function<cplx(cplx)> analytic;

  static Potential zero();
  /// V0 sech^2(r) with its analytic continuation.
  static Potential sech2(double V0);
};

/// Tridiagonal discretisation of the deformed operator on the interior nodes.
/// Row j: sub[j-1] u_{j-1} + diag[j] u_j + sup[j] u_{j+1}.
struct DeformedOperator {
  ScalingProfile profile;
  double h = 0.0;
  double angular_coefficient = 0.0;
  int dimension_n = 1;
  bool analytic_potential = false;
  std::vector<double> potential;  // V on the real grid
  CVec sub, diag, sup;

  int size() const { return static_cast<int>(diag.size()); }
  CMat dense() const;
  CVec apply(const CVec& v) const;
  double frobenius_norm() const;
};

/// Line grids: (a hD)^2 + V with a = 1/(1+if'), each factor a staggered first
/// order stencil. Radial grids add -(n-1) h^2 a/(r+if) d_r (centred) and
/// angular_coefficient h^2/(r+if)^2. Throws PreconditionError when a
/// non-analytic potential is not below 1e-14 on |r| >= R.
DeformedOperator assemble_deformed(const ScalingProfile& profile, const Potential& potential, double h,
                                   double angular_coefficient = 0.0, int dimension_n = 1);

}  // namespace trapres::scaling
