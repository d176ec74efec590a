#include "trapres/dynamics/flow.hpp"

#include "trapres/errors.hpp"

#include <algorithm>
#include <cmath>

namespace trapres::dynamics {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

struct Augmented {
  int m;
  bool variational;
  bool quadrature;
  int size() const { return 2 * m + (variational ? 4 * m * m : 0) + (quadrature ? 1 : 0); }
};

}  // namespace

FlowResult integrate_flow(const HamiltonianSystem& sys, const PhasePoint& start,
                          std::pair<double, double> t_span, bool with_variational,
                          const FlowOptions& opts) {
  const int m = sys.dim;
  if (start.dim() != m) throw DomainError("integrate_flow: start has wrong dimension");
  if (!start.finite()) throw DomainError("integrate_flow: start is not finite");
  if (!std::isfinite(t_span.first) || !std::isfinite(t_span.second))
    throw PreconditionError("integrate_flow: t_span must be finite");
  if (std::abs(sys.radial_of(start)) > sys.escape_radius_outer)
    throw PreconditionError("integrate_flow: start lies outside escape_radius_outer");

  const Augmented aug{m, with_variational, static_cast<bool>(opts.integrand)};
  const int n2 = 2 * m;
  const int dimy = aug.size();
  const Mat J = symplectic_matrix(m);

  auto rhs = [&](double t, const Vec& y) {
    const PhasePoint pt = PhasePoint::from_stacked(y.head(n2));
    Vec dy(dimy);
    const Vec g = sys.grad_p(pt);
    if (!g.allFinite()) throw IntegrationError("non-finite gradient of p", t);
    dy.head(m) = g.tail(m);
    dy.segment(m, m) = -g.head(m);
    int off = n2;
    if (aug.variational) {
      const Mat H = sys.hess_p(pt);
      if (!H.allFinite()) throw IntegrationError("non-finite Hessian of p", t);
      Eigen::Map<const Mat> M(y.data() + off, n2, n2);
      Eigen::Map<Mat> dM(dy.data() + off, n2, n2);
      dM.noalias() = J * H * M;
      off += n2 * n2;
    }
    if (aug.quadrature) {
      const double q = opts.integrand(pt);
      if (!std::isfinite(q)) throw IntegrationError("non-finite integrand", t);
      dy[off] = q;
    }
    return dy;
  };

  auto record = [&](FlowResult& out, double t, const Vec& y) {
    out.points.push_back({t, PhasePoint::from_stacked(y.head(n2))});
    if (aug.variational) out.monodromy.push_back(Eigen::Map<const Mat>(y.data() + n2, n2, n2));
  };

  Vec y(dimy);
  y.head(n2) = start.stacked();
  if (aug.variational) Eigen::Map<Mat>(y.data() + n2, n2, n2).setIdentity();
  if (aug.quadrature) y[dimy - 1] = 0.0;

  FlowResult out;
  double t = t_span.first;
  const double t_end = t_span.second;
  record(out, t, y);
  if (t == t_end) return out;

  const double dir = t_end > t ? 1.0 : -1.0;
  double step = std::min(opts.initial_step, std::abs(t_end - t));
  const double tol = opts.tolerance;

  Vec k1 = rhs(t, y), k2, k3, k4, k5, k6, k7, ytmp, ynew;
  long steps = 0;
  while (dir * (t_end - t) > 0) {
    if (++steps > opts.max_steps) throw IntegrationError("step budget exhausted", t);
    bool last = false;
    if (step >= std::abs(t_end - t)) {
      step = std::abs(t_end - t);
      last = true;
    }
    const double hs = dir * step;
    ytmp = y + hs * a21 * k1;
    k2 = rhs(t + c2 * hs, ytmp);
    ytmp = y + hs * (a31 * k1 + a32 * k2);
    k3 = rhs(t + c3 * hs, ytmp);
    ytmp = y + hs * (a41 * k1 + a42 * k2 + a43 * k3);
    k4 = rhs(t + c4 * hs, ytmp);
    ytmp = y + hs * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    k5 = rhs(t + c5 * hs, ytmp);
    ytmp = y + hs * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    k6 = rhs(t + hs, ytmp);
    ynew = y + hs * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    k7 = rhs(t + hs, ynew);
    const Vec err = hs * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    double en = 0.0;
    for (int i = 0; i < dimy; ++i) {
      const double sc = tol * (1.0 + std::max(std::abs(y[i]), std::abs(ynew[i])));
      en = std::max(en, std::abs(err[i]) / sc);
    }
    if (!std::isfinite(en)) throw IntegrationError("non-finite error estimate", t);

    if (en <= 1.0) {
      t = last ? t_end : t + hs;
      y = ynew;
      k1 = k7;
      if (opts.store_path || last) record(out, t, y);
      const double r = sys.radial_of(PhasePoint::from_stacked(y.head(n2)));
      if (opts.stop_on_escape && std::abs(r) >= sys.escape_radius_outer) {
        out.escaped = true;
        out.escape_time = t;
        out.escape_side = r > 0 ? 1 : -1;
        if (!opts.store_path && !last) record(out, t, y);
        break;
      }
      const double fac = en == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(en, -0.2), 0.2, 5.0);
      step = std::min(step * fac, opts.max_step);
    } else {
      step *= std::max(0.9 * std::pow(en, -0.25), 0.1);
      if (step < 1e-14 * (1.0 + std::abs(t))) throw IntegrationError("step size underflow", t);
    }
  }
  if (aug.quadrature) out.quadrature = y[dimy - 1];
  return out;
}

PhasePoint flow_to(const HamiltonianSystem& sys, const PhasePoint& start, double t,
                   double tolerance) {
  FlowOptions o;
  o.tolerance = tolerance;
  o.stop_on_escape = false;
  o.store_path = false;
  return integrate_flow(sys, start, {0.0, t}, false, o).final_point();
}

FlowDiagnostics diagnose(const HamiltonianSystem& sys, const FlowResult& flow) {
  FlowDiagnostics d;
  if (flow.points.empty()) return d;
  const double p0 = sys.p(flow.points.front().point);
  for (const auto& s : flow.points) d.energy_drift = std::max(d.energy_drift, std::abs(sys.p(s.point) - p0));
  if (!flow.monodromy.empty()) {
    const Mat J = symplectic_matrix(sys.dim);
    for (const auto& M : flow.monodromy) {
      // Rounding in M^T J M and det M scales with |M|^2 and the Hadamard bound.
      double hadamard = 1.0;
      for (int k = 0; k < M.cols(); ++k) hadamard *= M.col(k).norm();
      const double m2 = M.squaredNorm();
      d.det_defect = std::max(d.det_defect, std::abs(M.determinant() - 1.0) / std::max(1.0, hadamard));
      d.symplectic_defect = std::max(d.symplectic_defect, (M.transpose() * J * M - J).norm() / std::max(1.0, m2));
    }
  }
  return d;
}

}  // namespace trapres::dynamics
