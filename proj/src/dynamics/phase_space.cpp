#include "trapres/dynamics/phase_space.hpp"

#include "trapres/errors.hpp"

#include <algorithm>
#include <cmath>

namespace trapres::dynamics {

PhasePoint::PhasePoint(Vec x_, Vec xi_) : x(std::move(x_)), xi(std::move(xi_)) {
  if (x.size() != xi.size()) throw DomainError("PhasePoint: x and xi dimensions differ");
}

Vec PhasePoint::stacked() const {
  Vec y(2 * x.size());
  y << x, xi;
  return y;
}

PhasePoint PhasePoint::from_stacked(const Eigen::Ref<const Vec>& y) {
  const Eigen::Index m = y.size() / 2;
  return PhasePoint(y.head(m), y.segment(m, m));
}

bool PhasePoint::finite() const { return x.allFinite() && xi.allFinite(); }

double distance(const PhasePoint& a, const PhasePoint& b) {
  return std::sqrt((a.x - b.x).squaredNorm() + (a.xi - b.xi).squaredNorm());
}

Mat symplectic_matrix(int m) {
  Mat J = Mat::Zero(2 * m, 2 * m);
  J.topRightCorner(m, m) = Mat::Identity(m, m);
  J.bottomLeftCorner(m, m) = -Mat::Identity(m, m);
  return J;
}

double HamiltonianSystem::radial_of(const PhasePoint& pt) const {
  if (radial) return radial(pt);
  if (dim == 1) return pt.x[0];
  return pt.x.norm();
}

void HamiltonianSystem::validate() const {
  if (dim <= 0) throw PreconditionError("HamiltonianSystem: dim must be positive");
  if (!p || !grad_p || !hess_p) throw PreconditionError("HamiltonianSystem: missing symbol callbacks");
  if (!(escape_radius_inner < escape_radius_outer))
    throw PreconditionError("HamiltonianSystem: escape_radius_inner must be < escape_radius_outer");
  if (!(0.0 < energy_band.first && energy_band.first < energy_band.second))
    throw PreconditionError("HamiltonianSystem: energy band must satisfy 0 < b0 < b1");
}

Vec hamilton_field(const HamiltonianSystem& sys, const PhasePoint& pt) {
  const Vec g = sys.grad_p(pt);
  const int m = sys.dim;
  Vec f(2 * m);
  f.head(m) = g.tail(m);
  f.tail(m) = -g.head(m);
  return f;
}

double poisson_bracket(const Vec& grad_a, const Vec& grad_b) {
  const Eigen::Index m = grad_a.size() / 2;
  return grad_a.tail(m).dot(grad_b.head(m)) - grad_a.head(m).dot(grad_b.tail(m));
}

GradientCheck check_derivatives(const HamiltonianSystem& sys,
                                const std::function<PhasePoint(std::mt19937_64&)>& sampler,
                                int samples, std::uint64_t seed, double tol) {
  std::mt19937_64 rng(seed);
  GradientCheck out;
  const int n = 2 * sys.dim;
  for (int s = 0; s < samples; ++s) {
    const PhasePoint pt = sampler(rng);
    const Vec y = pt.stacked();
    const Vec g = sys.grad_p(pt);
    const Mat H = sys.hess_p(pt);
    Vec g_fd(n);
    Mat H_fd(n, n);
    for (int i = 0; i < n; ++i) {
      const double step = 1e-5 * std::max(1.0, std::abs(y[i]));
      Vec yp = y, ym = y;
      yp[i] += step;
      ym[i] -= step;
      const PhasePoint pp = PhasePoint::from_stacked(yp), pm = PhasePoint::from_stacked(ym);
      g_fd[i] = (sys.p(pp) - sys.p(pm)) / (2 * step);
      H_fd.col(i) = (sys.grad_p(pp) - sys.grad_p(pm)) / (2 * step);
    }
    const double eg = (g - g_fd).norm() / std::max(1.0, g.norm());
    const double eh = (H - H_fd).norm() / std::max(1.0, H.norm());
    out.max_relative_error = std::max({out.max_relative_error, eg, eh});
  }
  out.ok = out.max_relative_error <= tol;
  return out;
}

}  // namespace trapres::dynamics
