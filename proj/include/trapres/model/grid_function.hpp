#pragma once

#include <complex>
#include <vector>

namespace trapres::model {

using cplx = std::complex<double>;

/// Values on a uniform tensor grid. dims = 2: axes (x', x_n), row-major with x_n
/// fastest. dims = 1: the single axis is stored as x_n and n1() == 1.
/// The x_n axis has an odd node count with x_n = 0 at the centre node exactly.
struct GridFunction {
  int dims = 1;
  std::vector<double> xp;  // x' nodes (empty when dims = 1)
  std::vector<double> xn;  // x_n nodes
  std::vector<cplx> values;
  double h = 1.0;

  int n1() const { return dims == 2 ? static_cast<int>(xp.size()) : 1; }
  int n2() const { return static_cast<int>(xn.size()); }
  int center() const { return n2() / 2; }
  double dxp() const { return dims == 2 ? xp[1] - xp[0] : 1.0; }
  double dxn() const { return xn[1] - xn[0]; }
  cplx& at(int i, int j) { return values[static_cast<std::size_t>(i) * n2() + j]; }
  const cplx& at(int i, int j) const { return values[static_cast<std::size_t>(i) * n2() + j]; }
  double cell() const { return dxn() * (dims == 2 ? dxp() : 1.0); }

  /// Zero function on the grid; nodes are (j - centre) * spacing so the grid is exactly symmetric.
  static GridFunction zeros(int dims, int n1, double dx1, int n2, double dx2, double h);
  GridFunction same_grid() const;
  void validate() const;
};

/// Trapezoidal L^2 norm (the grid function is assumed to vanish at the edges).
double l2_norm(const GridFunction& f);

/// Spectral derivative d/dx along axis 0 (x') or 1 (x_n), periodic on the window.
GridFunction spectral_derivative(const GridFunction& f, int axis);

/// ||f||^2 + ||grad f||^2 (non-semiclassical) and ||f||^2 + ||h grad f||^2.
double h1_norm(const GridFunction& f);
double h1_semiclassical_norm(const GridFunction& f);

}  // namespace trapres::model
