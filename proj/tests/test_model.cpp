#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "trapres/errors.hpp"
#include "trapres/model/operators.hpp"
#include "trapres/model/quantization.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace trapres;
using namespace trapres::model;

namespace {

GridFunction grid2(double h = 0.1) { return GridFunction::zeros(2, 257, 1.0 / 16, 257, 1.0 / 16, h); }

GridFunction random_f(std::mt19937_64& g, double h = 0.1) {
  std::normal_distribution<double> N;
  GridFunction f = grid2(h);
  double a[4], b[4];
  cplx w[4];
  for (int m = 0; m < 4; ++m) {
    a[m] = 1.5 * N(g);
    b[m] = 1.5 * N(g);
    w[m] = cplx(N(g), N(g));
  }
  for (int i = 0; i < f.n1(); ++i)
    for (int j = 0; j < f.n2(); ++j) {
      const double x = f.xp[i], y = f.xn[j];
      cplx v = 0;
      for (int m = 0; m < 4; ++m) v += w[m] * std::exp(cplx(0, a[m] * x + b[m] * y));
      f.at(i, j) = v * std::exp(-(x * x + (y - 0.2) * (y - 0.2)));
    }
  return f;
}

bool is_power_of_two(double x) {
  int e;
  return std::frexp(std::abs(x), &e) == 0.5;
}

}  // namespace

TEST_CASE("grid is symmetric with x_n = 0 at the centre") {
  const auto f = grid2();
  CHECK(f.xn[f.center()] == 0.0);
  for (int j = 0; j < f.n2(); ++j) CHECK(f.xn[j] == -f.xn[f.n2() - 1 - j]);
  CHECK_THROWS_AS(GridFunction::zeros(2, 10, 0.1, 10, 0.1, 0.1), DomainError);
}

TEST_CASE("projector examples") {
  auto f = grid2();
  for (int i = 0; i < f.n1(); ++i)
    for (int j = 0; j < f.n2(); ++j) f.at(i, j) = f.xn[j] * std::cos(f.xp[i]);
  for (const auto& v : model_projector(f).values) CHECK(v == cplx(0.0));
  for (int i = 0; i < f.n1(); ++i)
    for (int j = 0; j < f.n2(); ++j) f.at(i, j) = std::sin(f.xp[i]);
  CHECK(model_projector(f).values == f.values);
}

TEST_CASE("projector is idempotent and commutes with the propagator, bitwise") {
  std::mt19937_64 g(2);
  for (int k = 0; k < 5; ++k) {
    const auto f = random_f(g);
    const auto p = model_projector(f);
    CHECK(model_projector(p).values == p.values);
    for (double t : {0.3, 1.0, 2.5})
      CHECK(model_propagator(p, t).values == model_projector(model_propagator(f, t)).values);
  }
}

TEST_CASE("divided difference of x_n is one") {
  auto f = grid2();
  for (int i = 0; i < f.n1(); ++i)
    for (int j = 0; j < f.n2(); ++j) f.at(i, j) = f.xn[j];
  for (const auto& v : model_xi(f).values) CHECK(v == cplx(1.0));
}

TEST_CASE("x_n Xi0 f against (1 - Pi0) f") {
  // Bitwise on rows where x_n is a power of two; elsewhere within one ulp
  // (a product x_n q cannot hit every double when x_n has a longer mantissa).
  std::mt19937_64 g(4);
  const auto f = random_f(g);
  const auto lhs = times_xn(model_xi(f));
  const auto rhs = subtract(f, model_projector(f));
  for (int i = 0; i < f.n1(); ++i)
    for (int j = 0; j < f.n2(); ++j) {
      if (j == f.center()) continue;
      const cplx a = lhs.at(i, j), b = rhs.at(i, j);
      if (is_power_of_two(f.xn[j])) {
        CHECK(a == b);
      } else {
        for (int part = 0; part < 2; ++part) {
          const double u = part ? a.imag() : a.real(), v = part ? b.imag() : b.real();
          CHECK((u == v || std::nextafter(v, u) == u));
        }
      }
    }
}

TEST_CASE("Xi0 bound by twice the H1 norm") {
  std::mt19937_64 g(5);
  for (int k = 0; k < 20; ++k) {
    const auto f = random_f(g);
    CHECK(l2_norm(model_xi(f)) <= 2.0 * h1_norm(f));
  }
}

TEST_CASE("propagator: identity at t = 0, isometry, domain") {
  auto f = grid2();
  for (int i = 0; i < f.n1(); ++i)
    for (int j = 0; j < f.n2(); ++j) f.at(i, j) = std::exp(-(f.xp[i] * f.xp[i] + f.xn[j] * f.xn[j]) / 2.0);
  CHECK(model_propagator(f, 0.0).values == f.values);
  CHECK_THROWS_AS(model_propagator(f, -0.1), DomainError);
  for (double t : {0.25, 0.5})
    CHECK(l2_norm(model_propagator(f, t)) == doctest::Approx(l2_norm(f)).epsilon(1e-6));
  // At t = 1 the dilated profile already meets the window edge at x_n = 8.
  CHECK(l2_norm(model_propagator(f, 1.0)) == doctest::Approx(l2_norm(f)).epsilon(1e-4));
}

TEST_CASE("image identity and kernel decay") {
  std::mt19937_64 g(6);
  auto f = random_f(g);
  const auto rep = decay_estimates(
      f, [](double xp, double xn) { return std::exp(-(xp * xp + xn * xn) / 2.0); }, {0.5, 1.0, 2.0});
  for (const auto& r : rep.image_identity) CHECK(r.relative_error <= 1e-5);
  CHECK(rep.kernel_rate <= -0.95);
  for (std::size_t k = 1; k < rep.kernel_decay.size(); ++k)
    CHECK(rep.kernel_decay[k].ratio < rep.kernel_decay[k - 1].ratio);
}

TEST_CASE("annihilation ideals") {
  std::mt19937_64 g(7);
  const auto f = random_f(g);
  CHECK(annihilation_defect(f) <= 1e-12);
  for (const auto& v : model_projector(times_xn(f)).values) CHECK(std::abs(v) <= 1e-12);
}

TEST_CASE("quantization of the unit symbol is evaluation at 0") {
  auto u = GridFunction::zeros(1, 1, 1.0, 1025, 1.0 / 64, 0.1);
  for (int j = 0; j < u.n2(); ++j) u.values[j] = std::exp(-3.0 * u.xn[j] * u.xn[j]) * cplx(1.0 + u.xn[j], 0.5);
  auto one = [](double, double) { return cplx(1.0); };
  CHECK_THROWS_AS(lambda_quantize(one, u), DomainError);
  QuantizationOptions o;
  o.require_decay = false;
  const auto v = lambda_quantize(one, u, o);
  for (const auto& z : v.values) CHECK(std::abs(z - u.values[u.center()]) <= 1e-12);
}

TEST_CASE("oscillatory testing") {
  const double h = 0.05;
  auto u = GridFunction::zeros(1, 1, 1.0, 2049, 1.0 / 100, h);
  auto a = [](double x, double xi) { return cplx(std::exp(-x * x - xi * xi), 0.3 * xi * std::exp(-xi * xi - x * x)); };
  const double k = std::round(0.4 * u.n2() * u.dxn() / (2 * std::numbers::pi * h));
  const double xi0 = 2 * std::numbers::pi * h * k / (u.n2() * u.dxn());
  for (int j = 0; j < u.n2(); ++j) u.values[j] = std::exp(cplx(0, u.xn[j] * xi0 / h));
  const auto v = lambda_quantize(a, u);
  for (int j = 0; j < u.n2(); ++j) CHECK(std::abs(v.values[j] - a(u.xn[j], xi0)) <= 1e-6);
}

TEST_CASE("quantization norm grows like h^{-1/2}") {
  // a = exp(-x^2 - xi^2) gives a rank-one kernel (2 pi h)^{-1} sqrt(pi) e^{-x^2} e^{-y^2/(4h^2)},
  // whose norm works out to 1 / (2 sqrt(h)).
  auto a = [](double x, double xi) { return cplx(std::exp(-x * x - xi * xi)); };
  double prev = 0.0;
  for (double h : {0.2, 0.1, 0.05}) {
    const auto u = GridFunction::zeros(1, 1, 1.0, 4097, 1.0 / 160, h);
    const double n = LambdaQuantization(a, u).operator_norm();
    const double exact = 0.5 / std::sqrt(h);
    CHECK(n == doctest::Approx(exact).epsilon(1e-6));
    if (prev > 0) CHECK(n / prev == doctest::Approx(std::sqrt(2.0)).epsilon(1e-6));
    prev = n;
  }
}

TEST_CASE("quantization rejects two-dimensional grids") {
  CHECK_THROWS_AS(LambdaQuantization([](double, double) { return cplx(0.0); }, grid2()), DomainError);
}
