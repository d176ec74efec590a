#include "trapres/warped/dynamics_models.hpp"

#include "trapres/errors.hpp"

#include <cmath>

namespace trapres::warped {

using dyn::Mat;
using dyn::PhasePoint;
using dyn::Vec;

Cometric circle_cometric(double C) {
  const double c2 = 1.0 / (C * C);
  Cometric g;
  g.dim = 1;
  g.G = [c2](const Vec&, const Vec& eta) { return c2 * eta[0] * eta[0]; };
  g.grad = [c2](const Vec&, const Vec& eta) {
    Vec v(2);
    v << 0.0, 2.0 * c2 * eta[0];
    return v;
  };
  g.hess = [c2](const Vec&, const Vec&) {
    Mat H = Mat::Zero(2, 2);
    H(1, 1) = 2.0 * c2;
    return H;
  };
  return g;
}

SurfaceOfRevolution SurfaceOfRevolution::neck(double a) {
  SurfaceOfRevolution s;
  s.rho = [a](double u) { return 1.0 + a * (1.0 - std::cos(u)); };
  s.rho_d1 = [a](double u) { return a * std::sin(u); };
  s.rho_d2 = [a](double u) { return a * std::cos(u); };
  return s;
}

Cometric surface_cometric(const SurfaceOfRevolution& s, double C) {
  const double c2 = 1.0 / (C * C);
  Cometric g;
  g.dim = 2;
  // Layout (u, v, eta_u, eta_v).
  g.G = [s, c2](const Vec& y, const Vec& eta) {
    const double r = s.rho(y[0]);
    return c2 * (eta[0] * eta[0] + eta[1] * eta[1] / (r * r));
  };
  g.grad = [s, c2](const Vec& y, const Vec& eta) {
    const double r = s.rho(y[0]), r1 = s.rho_d1(y[0]);
    Vec v(4);
    v << -2.0 * c2 * eta[1] * eta[1] * r1 / (r * r * r), 0.0, 2.0 * c2 * eta[0], 2.0 * c2 * eta[1] / (r * r);
    return v;
  };
  g.hess = [s, c2](const Vec& y, const Vec& eta) {
    const double r = s.rho(y[0]), r1 = s.rho_d1(y[0]), r2 = s.rho_d2(y[0]);
    const double r3 = r * r * r, r4 = r3 * r;
    Mat H = Mat::Zero(4, 4);
    H(0, 0) = c2 * eta[1] * eta[1] * (-2.0 * r2 / r3 + 6.0 * r1 * r1 / r4);
    H(0, 3) = H(3, 0) = -4.0 * c2 * eta[1] * r1 / r3;
    H(2, 2) = 2.0 * c2;
    H(3, 3) = 2.0 * c2 / (r * r);
    return H;
  };
  return g;
}

namespace {

// q = p^2 = xi_r^2 + S(r) G(y, eta), S = sech^2. Stacked layout (r, y, xi_r, eta).
struct Quadratic {
  double q;
  Vec grad;
  Mat hess;
};

Quadratic quadratic(const Cometric& G, const PhasePoint& pt) {
  const int d = G.dim;
  const int m = d + 1;
  const double r = pt.x[0];
  const Vec y = pt.x.tail(d), eta = pt.xi.tail(d);
  const double xr = pt.xi[0];
  const double ch = std::cosh(r);
  const double S = 1.0 / (ch * ch), T = std::tanh(r);
  const double S1 = -2.0 * S * T, S2 = 4.0 * S * T * T - 2.0 * S * S;
  const double g = G.G(y, eta);
  const Vec gg = G.grad(y, eta);   // (d_y, d_eta)
  const Mat gh = G.hess(y, eta);
  Quadratic Q;
  Q.q = xr * xr + S * g;
  Q.grad = Vec::Zero(2 * m);
  Q.grad[0] = S1 * g;
  Q.grad.segment(1, d) = S * gg.head(d);
  Q.grad[m] = 2.0 * xr;
  Q.grad.segment(m + 1, d) = S * gg.tail(d);
  Q.hess = Mat::Zero(2 * m, 2 * m);
  Q.hess(0, 0) = S2 * g;
  // Index map from cometric layout (y, eta) to the stacked phase-space layout.
  auto idx = [&](int i) { return i < d ? 1 + i : m + 1 + (i - d); };
  for (int i = 0; i < 2 * d; ++i) {
    Q.hess(0, idx(i)) = Q.hess(idx(i), 0) = S1 * gg[i];
    for (int j = 0; j < 2 * d; ++j) Q.hess(idx(i), idx(j)) = S * gh(i, j);
  }
  Q.hess(m, m) = 2.0;
  return Q;
}

}  // namespace

ModelDynamics warped_dynamics(const Cometric& G) {
  ModelDynamics md;
  auto& sys = md.system;
  sys.dim = G.dim + 1;
  sys.p = [G](const PhasePoint& pt) { return std::sqrt(quadratic(G, pt).q); };
  sys.grad_p = [G](const PhasePoint& pt) -> Vec {
    const Quadratic Q = quadratic(G, pt);
    return Q.grad / (2.0 * std::sqrt(Q.q));
  };
  sys.hess_p = [G](const PhasePoint& pt) -> Mat {
    const Quadratic Q = quadratic(G, pt);
    const double p = std::sqrt(Q.q);
    return Q.hess / (2.0 * p) - Q.grad * Q.grad.transpose() / (4.0 * p * p * p);
  };
  sys.radial = [](const PhasePoint& pt) { return pt.x[0]; };
  sys.escape_radius_inner = 4.0;
  sys.escape_radius_outer = 6.0;
  sys.energy_band = {0.5, 1.5};

  const int m = sys.dim;
  auto make_phi = [sys, m](double sgn) {
    dyn::DefiningFunction phi;
    phi.value = [sys, sgn](const PhasePoint& pt) { return pt.xi[0] - sgn * sys.p(pt) * std::tanh(pt.x[0]); };
    phi.grad = [sys, sgn, m](const PhasePoint& pt) -> Vec {
      const double r = pt.x[0];
      const double ch = std::cosh(r);
      Vec g = -sgn * std::tanh(r) * sys.grad_p(pt);
      g[0] -= sgn * sys.p(pt) / (ch * ch);
      g[m] += 1.0;
      return g;
    };
    return phi;
  };
  md.phi_plus = make_phi(1.0);
  md.phi_minus = make_phi(-1.0);
  return md;
}

ModelDynamics dynamics_for_model(const WarpedModel& model) {
  model.validate();
  if (model.cross_section.kind() != CrossSection::Kind::circle)
    throw PreconditionError("dynamics_for_model: only circle cross-sections have built-in dynamics");
  return warped_dynamics(circle_cometric(model.scale_C));
}

double closed_form_c(const dyn::HamiltonianSystem& sys, const PhasePoint& pt, int sign) {
  return 1.0 + sign * pt.xi[0] / sys.p(pt) * std::tanh(pt.x[0]);
}

dyn::Perturbation circle_bump_perturbation() {
  dyn::Perturbation P;
  P.value = [](const PhasePoint& pt, double s) {
    return s * std::sin(pt.x[1]) / std::cosh(pt.x[0]);
  };
  P.grad = [](const PhasePoint& pt, double s) -> Vec {
    const double r = pt.x[0], th = pt.x[1];
    const double sech = 1.0 / std::cosh(r), t = std::tanh(r);
    Vec g = Vec::Zero(4);
    g[0] = -s * std::sin(th) * sech * t;
    g[1] = s * std::cos(th) * sech;
    return g;
  };
  P.hess = [](const PhasePoint& pt, double s) -> Mat {
    const double r = pt.x[0], th = pt.x[1];
    const double sech = 1.0 / std::cosh(r), t = std::tanh(r);
    Mat H = Mat::Zero(4, 4);
    H(0, 0) = s * std::sin(th) * sech * (t * t - sech * sech);
    H(0, 1) = H(1, 0) = -s * std::cos(th) * sech * t;
    H(1, 1) = -s * std::sin(th) * sech;
    return H;
  };
  return P;
}

}  // namespace trapres::warped
