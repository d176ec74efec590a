#pragma once

#include "trapres/model/grid_function.hpp"

#include <functional>

namespace trapres::model {

using Symbol = std::function<cplx(double x, double xi)>;

struct QuantizationOptions {
  /// Reject symbols that exceed decay_tolerance on the edge of the (x, xi) window.
  bool require_decay = true;
  double decay_tolerance = 1e-12;
};

/// Op(a) u(x) = (2 pi h)^{-1} int int e^{-i y xi / h} a(x, xi) u(y) dy dxi on a
/// dims = 1 grid: DFT of u in y, then the xi sum against a(x_i, .) at the DFT
/// frequencies xi_k = 2 pi h k / (N dx).
class LambdaQuantization {
public:
  LambdaQuantization(const Symbol& a, const GridFunction& grid, const QuantizationOptions& opts = {});

  GridFunction apply(const GridFunction& u) const;
  GridFunction apply_adjoint(const GridFunction& v) const;
  /// Largest singular value by power iteration on Op^* Op.
  double operator_norm(int max_iterations = 200, double tolerance = 1e-10) const;
  const std::vector<double>& frequencies() const { return xi_; }

private:
  GridFunction grid_;
  std::vector<double> xi_;     // xi_k in FFT storage order
  std::vector<cplx> phase_;    // e^{2 pi i c k / N}
  std::vector<cplx> symbol_;   // a(x_i, xi_k) / N, row-major in i
};

GridFunction lambda_quantize(const Symbol& a, const GridFunction& u, const QuantizationOptions& opts = {});

}  // namespace trapres::model
