#include "trapres/model/quantization.hpp"

#include "trapres/errors.hpp"
#include "fft.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace trapres::model {

LambdaQuantization::LambdaQuantization(const Symbol& a, const GridFunction& grid, const QuantizationOptions& opts)
    : grid_(grid.same_grid()) {
  if (grid.dims != 1) throw DomainError("lambda_quantize: only dims = 1 is supported");
  grid.validate();
  const int n = grid.n2();
  const int c = grid.center();
  const double dx = grid.dxn();
  xi_.resize(n);
  phase_.resize(n);
  for (int k = 0; k < n; ++k) {
    const int kk = k <= (n - 1) / 2 ? k : k - n;
    xi_[k] = 2.0 * std::numbers::pi * grid.h * kk / (n * dx);
    phase_[k] = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>((static_cast<long>(c) * kk) % n) / n);
  }
  symbol_.resize(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) symbol_[static_cast<std::size_t>(i) * n + k] = a(grid.xn[i], xi_[k]) / static_cast<double>(n);

  if (opts.require_decay) {
    const int kmax = (n - 1) / 2;
    const int kmin = n - kmax;  // storage index of the most negative frequency
    double edge = 0.0;
    for (int i = 0; i < n; ++i) {
      edge = std::max(edge, std::abs(a(grid.xn[i], xi_[kmax])));
      edge = std::max(edge, std::abs(a(grid.xn[i], xi_[kmin])));
    }
    for (int k = 0; k < n; ++k) {
      edge = std::max(edge, std::abs(a(grid.xn[0], xi_[k])));
      edge = std::max(edge, std::abs(a(grid.xn[n - 1], xi_[k])));
    }
    if (edge > opts.decay_tolerance)
      throw DomainError("lambda_quantize: symbol does not decay on the window edge (aliasing risk)");
  }
}

GridFunction LambdaQuantization::apply(const GridFunction& u) const {
  const int n = grid_.n2();
  if (u.n2() != n || u.dims != 1) throw DomainError("lambda_quantize: grid mismatch");
  std::vector<cplx> U(u.values);
  fft_many(U.data(), n, 1, 1, n, -1);
  for (int k = 0; k < n; ++k) U[k] *= phase_[k];
  GridFunction out = grid_;
  out.h = u.h;
  for (int i = 0; i < n; ++i) {
    const cplx* row = symbol_.data() + static_cast<std::size_t>(i) * n;
    cplx s = 0.0;
    for (int k = 0; k < n; ++k) s += row[k] * U[k];
    out.values[i] = s;
  }
  return out;
}

GridFunction LambdaQuantization::apply_adjoint(const GridFunction& v) const {
  const int n = grid_.n2();
  std::vector<cplx> w(n, 0.0);
  for (int i = 0; i < n; ++i) {
    const cplx* row = symbol_.data() + static_cast<std::size_t>(i) * n;
    const cplx vi = v.values[i];
    for (int k = 0; k < n; ++k) w[k] += std::conj(row[k]) * vi;
  }
  for (int k = 0; k < n; ++k) w[k] *= std::conj(phase_[k]);
  fft_many(w.data(), n, 1, 1, n, +1);
  GridFunction out = grid_;
  out.h = v.h;
  out.values = std::move(w);
  return out;
}

double LambdaQuantization::operator_norm(int max_iterations, double tolerance) const {
  GridFunction x = grid_;
  std::mt19937_64 rng(42);
  std::normal_distribution<double> N01;
  for (auto& v : x.values) v = cplx(N01(rng), N01(rng));
  double est = 0.0;
  for (int it = 0; it < max_iterations; ++it) {
    double nx = 0.0;
    for (const auto& v : x.values) nx += std::norm(v);
    nx = std::sqrt(nx);
    for (auto& v : x.values) v /= nx;
    x = apply_adjoint(apply(x));
    double ny = 0.0;
    for (const auto& v : x.values) ny += std::norm(v);
    const double next = std::sqrt(std::sqrt(ny));
    if (it > 0 && std::abs(next - est) <= tolerance * next) return next;
    est = next;
  }
  return est;
}

GridFunction lambda_quantize(const Symbol& a, const GridFunction& u, const QuantizationOptions& opts) {
  return LambdaQuantization(a, u, opts).apply(u);
}

}  // namespace trapres::model
