#include "trapres/dynamics/defining.hpp"

#include "trapres/dynamics/flow.hpp"
#include "trapres/errors.hpp"

#include <cmath>

namespace trapres::dynamics {

double hamilton_derivative(const HamiltonianSystem& sys, const DefiningFunction& phi, const PhasePoint& pt) {
  return poisson_bracket(sys.grad_p(pt), phi.grad(pt));
}

namespace {

double rate(const HamiltonianSystem& sys, const DefiningFunction& phi, const PhasePoint& pt, double sgn) {
  const double v = phi.value(pt);
  if (std::abs(v) > 1e-8) return -sgn * hamilton_derivative(sys, phi, pt) / v;
  const Vec g = phi.grad(pt);
  const double gn = g.norm();
  if (!(gn > 1e-12)) throw DegeneratePointError("defining_function_data: vanishing gradient of phi");
  const double eps = 1e-5;
  const Vec y = pt.stacked();
  const PhasePoint up = PhasePoint::from_stacked(y + eps * g / gn);
  const PhasePoint dn = PhasePoint::from_stacked(y - eps * g / gn);
  const double dphi = phi.value(up) - phi.value(dn);
  const double dh = hamilton_derivative(sys, phi, up) - hamilton_derivative(sys, phi, dn);
  if (!(std::abs(dphi) > 1e-14))
    throw DegeneratePointError("defining_function_data: phi and its normal derivative vanish");
  return -sgn * dh / dphi;
}

}  // namespace

DefiningData defining_function_data(const HamiltonianSystem& sys, const DefiningFunction& phi_plus,
                                    const DefiningFunction& phi_minus, const PhasePoint& point) {
  DefiningData d;
  d.c_plus = rate(sys, phi_plus, point, 1.0);
  d.c_minus = rate(sys, phi_minus, point, -1.0);
  d.bracket = poisson_bracket(phi_plus.grad(point), phi_minus.grad(point));
  return d;
}

TransportResult solve_transport(const HamiltonianSystem& sys, Sign sign,
                                const std::function<double(const PhasePoint&)>& f, const PhasePoint& point,
                                double horizon, const TransportOptions& opts) {
  if (!(horizon > 0)) throw PreconditionError("solve_transport: horizon must be positive");
  if (!(opts.nu_min > 0)) throw PreconditionError("solve_transport: nu_min must be positive");
  FlowOptions o;
  o.tolerance = opts.tolerance;
  o.store_path = false;
  o.integrand = f;
  const double dir = sign == Sign::plus ? -1.0 : 1.0;
  const FlowResult fr = integrate_flow(sys, point, {0.0, dir * horizon}, false, o);
  if (fr.escaped) throw DomainError("solve_transport: trajectory escapes; point is not on the requested tail");
  TransportResult r;
  // Along a backward flow the accumulated quadrature is -int_0^H.
  r.integral = dir * fr.quadrature;
  r.f_at_end = f(fr.final_point());
  if (std::abs(r.f_at_end) > opts.k_tolerance)
    throw PreconditionError("solve_transport: f does not vanish near the trapped set");
  r.tail = r.f_at_end / opts.nu_min;
  if (std::abs(r.tail) > opts.tail_fraction * std::abs(r.integral) && r.tail != 0.0)
    throw HorizonTooShortError("solve_transport: tail estimate too large", r.tail, r.integral);
  const double total = r.integral + r.tail;
  r.value = sign == Sign::plus ? total : -total;
  return r;
}

}  // namespace trapres::dynamics
