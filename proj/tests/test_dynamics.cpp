#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "trapres/dynamics/defining.hpp"
#include "trapres/dynamics/rates.hpp"
#include "trapres/errors.hpp"
#include "trapres/warped/dynamics_models.hpp"

#include <cmath>
#include <random>

using namespace trapres;
using namespace trapres::dynamics;

namespace {

warped::ModelDynamics cylinder(double C = 1.0) {
  warped::WarpedModel m;
  m.scale_C = C;
  return warped::dynamics_for_model(m);
}

PhasePoint pt(double r, double th, double xr, double eta) {
  Vec x(2), xi(2);
  x << r, th;
  xi << xr, eta;
  return {x, xi};
}

// Gamma_+ at energy E: xi_r = E tanh r, eta = E C.
PhasePoint gamma_plus(double r, double E = 1.0, double C = 1.0) { return pt(r, 0.3, E * std::tanh(r), E * C); }
PhasePoint gamma_minus(double r, double E = 1.0, double C = 1.0) { return pt(r, 0.3, -E * std::tanh(r), E * C); }

}  // namespace

TEST_CASE("cylinder symbol derivatives agree with finite differences") {
  const auto md = cylinder(2.0);
  auto sampler = [](std::mt19937_64& g) {
    std::uniform_real_distribution<double> U(-1.5, 1.5);
    return pt(U(g), U(g), U(g), 0.5 + std::abs(U(g)));
  };
  const auto chk = check_derivatives(md.system, sampler, 50, 11);
  CHECK(chk.ok);
  CHECK(chk.max_relative_error < 1e-6);
}

TEST_CASE("neck torus cometric derivatives agree with finite differences") {
  const auto md = warped::warped_dynamics(warped::surface_cometric(warped::SurfaceOfRevolution::neck(0.25), 3.0));
  auto sampler = [](std::mt19937_64& g) {
    std::uniform_real_distribution<double> U(-1.5, 1.5);
    Vec x(3), xi(3);
    x << U(g), U(g), U(g);
    xi << U(g), U(g), 0.5 + std::abs(U(g));
    return PhasePoint(x, xi);
  };
  CHECK(check_derivatives(md.system, sampler, 50, 5).ok);
}

TEST_CASE("poisson bracket is antisymmetric") {
  std::mt19937_64 g(3);
  std::normal_distribution<double> N;
  for (int k = 0; k < 20; ++k) {
    Vec a(6), b(6);
    for (int i = 0; i < 6; ++i) {
      a[i] = N(g);
      b[i] = N(g);
    }
    CHECK(poisson_bracket(a, b) == doctest::Approx(-poisson_bracket(b, a)).epsilon(1e-14));
    CHECK(poisson_bracket(a, a) == doctest::Approx(0.0).epsilon(1e-14));
  }
}

TEST_CASE("orbit on K rotates at speed 1/C") {
  // At r = 0, xi_r = 0: p = |eta|/C and d theta/dt = eta/(C^2 p) = 1/C.
  for (double C : {1.0, 5.0}) {
    const auto md = cylinder(C);
    const auto end = flow_to(md.system, pt(0.0, 0.2, 0.0, C), 7.0);
    CHECK(end.x[0] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(end.xi[0] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(end.x[1] == doctest::Approx(0.2 + 7.0 / C).epsilon(1e-9));
  }
}

TEST_CASE("radial motion on Gamma_+ follows sinh r(t) = sinh r0 e^t") {
  // dr/dt = xi_r / p = tanh r on Gamma_+.
  const auto md = cylinder();
  const double r0 = 0.4, t = 1.5;
  const auto end = flow_to(md.system, gamma_plus(r0), t);
  CHECK(std::sinh(end.x[0]) == doctest::Approx(std::sinh(r0) * std::exp(t)).epsilon(1e-9));
  const auto back = flow_to(md.system, gamma_minus(r0), -t);
  CHECK(std::sinh(back.x[0]) == doctest::Approx(std::sinh(r0) * std::exp(t)).epsilon(1e-9));
}

TEST_CASE("flow invariants on a K orbit") {
  const auto md = cylinder();
  const auto fl = integrate_flow(md.system, pt(0.0, 0.0, 0.0, 1.0), {0.0, 10.0}, true);
  const auto d = diagnose(md.system, fl);
  CHECK(d.energy_drift <= 1e-8);
  CHECK(d.det_defect <= 1e-6);
  CHECK(d.symplectic_defect <= 1e-6);
}

TEST_CASE("flow group property") {
  const auto md = cylinder();
  const auto start = pt(0.7, 1.0, 0.2, 0.9);
  const auto a = flow_to(md.system, flow_to(md.system, start, 1.1), 0.8);
  const auto b = flow_to(md.system, start, 1.9);
  CHECK(distance(a, b) <= 1e-7);
  const auto back = flow_to(md.system, flow_to(md.system, start, 2.0), -2.0);
  CHECK(distance(back, start) <= 1e-7);
}

TEST_CASE("integration rejects starts beyond the outer radius") {
  const auto md = cylinder();
  CHECK_THROWS_AS(integrate_flow(md.system, pt(md.system.escape_radius_outer + 1.0, 0.0, 0.0, 1.0), {0.0, 1.0}, false),
                  PreconditionError);
}

TEST_CASE("trapping classification of model points") {
  const auto md = cylinder();
  CHECK(classify_trapping(md.system, pt(0.0, 0.0, 0.0, 1.0), 30).classification == Trapping::trapped_both);
  CHECK(classify_trapping(md.system, gamma_plus(1.0), 30).classification == Trapping::trapped_backward);
  CHECK(classify_trapping(md.system, gamma_minus(1.0), 30).classification == Trapping::trapped_forward);
  const double xr = 0.99;
  const auto out = pt(3.0, 0.0, xr, std::sqrt(1 - xr * xr) * std::cosh(3.0));
  CHECK(classify_trapping(md.system, out, 50).classification == Trapping::escaped);
}

TEST_CASE("projection to the energy shell") {
  const auto md = cylinder();
  const auto q = project_to_shell(md.system, pt(0.3, 0.1, 0.4, 2.0), 1.0);
  CHECK(md.system.p(q) == doctest::Approx(1.0).epsilon(1e-12));
  const auto z = project_to_shell(md.system, pt(0.3, 0.1, 0.0, 0.0), 1.0);
  CHECK(md.system.p(z) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("trapped set search finds the equator") {
  const auto md = cylinder();
  const auto ts = find_trapped_set(md.system, 1.0, {pt(-0.5, 0.0, 0.0, 1.0), pt(0.5, 0.0, 0.0, 1.0)}, 20);
  REQUIRE(ts.size() == 1);
  CHECK(std::abs(ts[0].point.x[0]) <= 1e-8);
  CHECK(std::abs(ts[0].point.xi[0]) <= 1e-8);
  CHECK(ts[0].classification == Trapping::trapped_both);
}

TEST_CASE("cylinder expansion rates") {
  const auto md = cylinder();
  const auto ts = find_trapped_set(md.system, 1.0, {pt(-0.5, 0.0, 0.0, 1.0), pt(0.5, 0.0, 0.0, 1.0)}, 20);
  const auto r = expansion_rates(md.system, ts, 30);
  CHECK(r.nu_min == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(r.nu_max == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(r.mu_max <= 1e-6);
  CHECK(r.r_normal_order == 1000000);
  CHECK_THROWS_AS(expansion_rates(md.system, ts, 10), PreconditionError);
  TrappedSample bad = ts[0];
  bad.classification = Trapping::escaped;
  CHECK_THROWS_AS(expansion_rates(md.system, {bad}, 30), PreconditionError);
}

TEST_CASE("r-normal order and pinching") {
  CHECK(r_normal_order(1.0, 0.3) == 3);
  CHECK(r_normal_order(1.0, 0.5) == 2);
  CHECK(r_normal_order(1.0, 0.0) == 1000000);
  CHECK(r_normal_order(1.0, 1e-9, 50) == 50);
  ExpansionRates r;
  r.nu_min = r.nu_max = 1.0;
  r.mu_max = 0.0;
  CHECK(check_pinching(r, 0.1).pinched);
  r.nu_min = 0.5;
  r.nu_max = 1.5;
  CHECK_FALSE(check_pinching(r, 0.1).pinched);
}

TEST_CASE("neck torus tangential rate scales as 1/C") {
  double mu[2];
  int i = 0;
  for (double C : {1.0, 4.0}) {
    const auto md = warped::warped_dynamics(warped::surface_cometric(warped::SurfaceOfRevolution::neck(0.25), C));
    Vec x(3), xi(3);
    x << 0, 0, 0;
    xi << 0, 0, C;
    TrappedSample s;
    s.point = PhasePoint(x, xi);
    s.classification = Trapping::trapped_both;
    s.horizon = 60;
    mu[i++] = expansion_rates(md.system, {s}, 60).mu_max;
  }
  CHECK(mu[1] == doctest::Approx(mu[0] / 4.0).epsilon(0.03));
}

TEST_CASE("defining function rates") {
  const auto md = cylinder();
  const auto onK = defining_function_data(md.system, md.phi_plus, md.phi_minus, pt(0.0, 0.0, 0.0, 1.0));
  CHECK(onK.c_plus == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(onK.c_minus == doctest::Approx(1.0).epsilon(1e-8));
  // {xi_r - p tanh r, xi_r + p tanh r} = 2 p sech^2 r at r = 0.
  CHECK(onK.bracket == doctest::Approx(2.0).epsilon(1e-8));
  for (double r : {0.5, 1.0, 1.7}) {
    const auto q = gamma_plus(r);
    const auto d = defining_function_data(md.system, md.phi_plus, md.phi_minus, q);
    CHECK(d.c_plus == doctest::Approx(1.0 + std::tanh(r) * std::tanh(r)).epsilon(1e-8));
    CHECK(d.c_plus == doctest::Approx(warped::closed_form_c(md.system, q, 1)).epsilon(1e-8));
  }
  // Off Gamma_+- the plain quotient is used.
  const auto q = pt(0.4, 0.0, 0.1, 1.0);
  const auto d = defining_function_data(md.system, md.phi_plus, md.phi_minus, q);
  const double hp = hamilton_derivative(md.system, md.phi_plus, q);
  CHECK(d.c_plus == doctest::Approx(-hp / md.phi_plus.value(q)).epsilon(1e-12));
}

TEST_CASE("transport along Gamma_+- matches the closed form 2 E r") {
  // On Gamma_+ with f = phi_-: f = 2E tanh r along sinh r(-t) = sinh r e^{-t},
  // so the backward integral is 2E asinh(sinh r) = 2E r.
  const auto md = cylinder();
  for (double E : {1.0, 1.3})
    for (double r : {0.5, 1.0, 2.0}) {
      const auto a = solve_transport(md.system, Sign::plus, md.phi_minus.value, gamma_plus(r, E), 20);
      CHECK(a.value == doctest::Approx(2.0 * E * r).epsilon(1e-7));
      const auto b = solve_transport(md.system, Sign::minus, md.phi_plus.value, gamma_minus(r, E), 20);
      CHECK(b.value == doctest::Approx(2.0 * E * r).epsilon(1e-7));
    }
}

TEST_CASE("transport errors") {
  const auto md = cylinder();
  const double xr = 0.99;
  const auto out = pt(1.0, 0.0, -xr, std::sqrt(1 - xr * xr) * std::cosh(1.0));
  CHECK_THROWS_AS(solve_transport(md.system, Sign::plus, md.phi_minus.value, out, 20), DomainError);
  // A source that does not vanish on K.
  auto one = [](const PhasePoint&) { return 1.0; };
  CHECK_THROWS_AS(solve_transport(md.system, Sign::plus, one, gamma_plus(1.0), 20), PreconditionError);
}

TEST_CASE("perturbation scan reuses the base samples at s = 0") {
  const auto md = cylinder();
  const auto ts = find_trapped_set(md.system, 1.0, {pt(-0.5, 0.0, 0.0, 1.0), pt(0.5, 0.0, 0.0, 1.0)}, 20);
  const auto base = expansion_rates(md.system, ts, 25);
  const auto rows = perturbation_stability_scan(md.system, ts, warped::circle_bump_perturbation(), {0.0, 0.05}, 25);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].rates.nu_min == base.nu_min);
  CHECK_FALSE(rows[1].flagged);
  CHECK(std::abs(rows[1].rates.nu_min - 1.0) < 0.05);
}
