#include "trapres/model/grid_function.hpp"

#include "trapres/errors.hpp"
#include "fft.hpp"

#include <cmath>
#include <numbers>

namespace trapres::model {

GridFunction GridFunction::zeros(int dims, int n1, double dx1, int n2, double dx2, double h) {
  if (dims != 1 && dims != 2) throw DomainError("GridFunction: dims must be 1 or 2");
  if (n2 < 3 || n2 % 2 == 0) throw DomainError("GridFunction: x_n node count must be odd and >= 3");
  if (dims == 2 && n1 < 2) throw DomainError("GridFunction: x' node count must be >= 2");
  if (!(dx1 > 0) || !(dx2 > 0) || !(h > 0)) throw DomainError("GridFunction: spacings and h must be positive");
  GridFunction f;
  f.dims = dims;
  f.h = h;
  const int c = n2 / 2;
  f.xn.resize(n2);
  for (int j = 0; j < n2; ++j) f.xn[j] = (j - c) * dx2;
  if (dims == 2) {
    f.xp.resize(n1);
    const double c1 = 0.5 * (n1 - 1);
    for (int i = 0; i < n1; ++i) f.xp[i] = (i - c1) * dx1;
  }
  f.values.assign(static_cast<std::size_t>(f.n1()) * n2, cplx(0.0));
  return f;
}

GridFunction GridFunction::same_grid() const {
  GridFunction g = *this;
  std::fill(g.values.begin(), g.values.end(), cplx(0.0));
  return g;
}

void GridFunction::validate() const {
  if (xn.size() < 3 || xn.size() % 2 == 0 || xn[center()] != 0.0)
    throw DomainError("GridFunction: x_n = 0 must be the centre node of an odd grid");
  if (values.size() != static_cast<std::size_t>(n1()) * n2()) throw DomainError("GridFunction: size mismatch");
  for (const auto& v : values)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw DomainError("GridFunction: non-finite value");
}

double l2_norm(const GridFunction& f) {
  double s = 0.0;
  for (const auto& v : f.values) s += std::norm(v);
  return std::sqrt(s * f.cell());
}

GridFunction spectral_derivative(const GridFunction& f, int axis) {
  if (axis == 0 && f.dims != 2) throw DomainError("spectral_derivative: no x' axis");
  const int n = axis == 0 ? f.n1() : f.n2();
  const int howmany = axis == 0 ? f.n2() : f.n1();
  const int stride = axis == 0 ? f.n2() : 1;
  const int dist = axis == 0 ? 1 : f.n2();
  const double dx = axis == 0 ? f.dxp() : f.dxn();
  GridFunction out = f;
  fft_many(out.values.data(), n, howmany, stride, dist, -1);
  for (int b = 0; b < howmany; ++b) {
    for (int k = 0; k < n; ++k) {
      int kk = k <= (n - 1) / 2 ? k : k - n;
      if (n % 2 == 0 && k == n / 2) kk = 0;
      const double w = 2.0 * std::numbers::pi * kk / (n * dx);
      cplx& v = out.values[static_cast<std::size_t>(b) * dist + static_cast<std::size_t>(k) * stride];
      v *= cplx(0.0, w) / static_cast<double>(n);
    }
  }
  fft_many(out.values.data(), n, howmany, stride, dist, +1);
  return out;
}

namespace {
double gradient_sq(const GridFunction& f) {
  double g = std::pow(l2_norm(spectral_derivative(f, 1)), 2);
  if (f.dims == 2) g += std::pow(l2_norm(spectral_derivative(f, 0)), 2);
  return g;
}
}  // namespace

double h1_norm(const GridFunction& f) { return std::sqrt(std::pow(l2_norm(f), 2) + gradient_sq(f)); }

double h1_semiclassical_norm(const GridFunction& f) {
  return std::sqrt(std::pow(l2_norm(f), 2) + f.h * f.h * gradient_sq(f));
}

}  // namespace trapres::model
