#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "trapres/errors.hpp"
#include "trapres/scaling/eigensolver.hpp"
#include "trapres/scaling/profile.hpp"
#include "trapres/scaling/resolvent.hpp"
#include "trapres/scaling/resonances.hpp"
#include "trapres/warped/models.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <random>

using namespace trapres;
using namespace trapres::scaling;

TEST_CASE("profile preconditions") {
  CHECK_THROWS_AS(build_profile(0.0, 0.75, 3.0, 400), DomainError);
  CHECK_THROWS_AS(build_profile(1.6, 0.75, 3.0, 400), DomainError);
  CHECK_THROWS_AS(build_profile(0.5, 0.0, 3.0, 400), DomainError);
  CHECK_THROWS_AS(build_profile(0.5, 1.5, 3.0, 400), DomainError);
  CHECK_THROWS_AS(build_profile(0.5, 0.75, 3.0, 100), DomainError);
  CHECK_NOTHROW(undeformed_profile(0.75, 3.0, 400));
}

TEST_CASE("line profile: symmetric grid, odd f, undeformed core, full angle outside 2R") {
  const auto p = build_profile(0.5, 0.75, 3.0, 401);
  REQUIRE(p.size() == 401);
  for (int j = 0; j < p.size(); ++j) {
    CHECK(p.grid[j] == -p.grid[p.size() - 1 - j]);
    CHECK(p.f[j] == doctest::Approx(-p.f[p.size() - 1 - j]).epsilon(1e-15));
    const double r = std::abs(p.grid[j]);
    if (r <= 0.75) CHECK(p.f[j] == 0.0);
    if (r >= 1.5) CHECK(std::abs(p.f[j]) == doctest::Approx(r * std::tan(0.5)).epsilon(1e-14));
  }
  CHECK(smoothstep(0.0) == 0.0);
  CHECK(smoothstep(1.0) == 1.0);
  CHECK(smoothstep(0.5) == doctest::Approx(0.5));
}

TEST_CASE("profile derivatives match finite differences") {
  const double th = 0.5, R = 0.75, e = 1e-5;
  for (double r : {0.8, 1.0, 1.2, 1.4, -1.1}) {
    const auto v = profile_at(th, R, r);
    CHECK(v.fp == doctest::Approx((profile_at(th, R, r + e).f - profile_at(th, R, r - e).f) / (2 * e)).epsilon(1e-7));
    CHECK(v.fpp ==
          doctest::Approx((profile_at(th, R, r + e).fp - profile_at(th, R, r - e).fp) / (2 * e)).epsilon(1e-6));
  }
}

TEST_CASE("tridiagonal QL agrees with a dense eigen-solver") {
  std::mt19937_64 g(1);
  std::normal_distribution<double> N;
  const int n = 60;
  CVec sub(n - 1), diag(n), sup(n - 1);
  for (int i = 0; i < n; ++i) diag[i] = cplx(N(g), N(g));
  for (int i = 0; i < n - 1; ++i) {
    sub[i] = cplx(N(g), 0.3 * N(g));
    sup[i] = cplx(N(g), 0.3 * N(g));
  }
  auto ql = tridiagonal_eigenvalues(sub, diag, sup);
  CMat A = CMat::Zero(n, n);
  for (int i = 0; i < n; ++i) A(i, i) = diag[i];
  for (int i = 0; i < n - 1; ++i) {
    A(i + 1, i) = sub[i];
    A(i, i + 1) = sup[i];
  }
  Eigen::ComplexEigenSolver<CMat> es(A, false);
  REQUIRE(ql.size() == static_cast<std::size_t>(n));
  // Each reference eigenvalue has a QL eigenvalue nearby.
  for (int i = 0; i < n; ++i) {
    double best = INFINITY;
    for (const auto& z : ql) best = std::min(best, std::abs(z - es.eigenvalues()[i]));
    CHECK(best <= 1e-8 * (1.0 + std::abs(es.eigenvalues()[i])));
  }
  const auto dense = tridiagonal_eigenvalues(sub, diag, sup, true);
  CHECK(dense.size() == ql.size());
}

TEST_CASE("eigen_solve residuals") {
  // QL accuracy degrades near the grid scale; the low-lying spectrum is what extraction uses.
  const auto p = build_profile(0.5, 0.75, 3.0, 400);
  const auto op = assemble_deformed(p, Potential::sech2(1.0), 0.1);
  const auto pairs = eigen_solve(op);
  REQUIRE(pairs.size() == 400u);
  double worst = 0.0;
  for (const auto& e : pairs)
    if (std::abs(e.value) <= 4.0) worst = std::max(worst, e.residual / (1.0 + std::abs(e.value)));
  CHECK(worst < 1e-8);
  double dense_worst = 0.0;
  for (const auto& e : eigen_solve(op, true)) dense_worst = std::max(dense_worst, e.residual / (1.0 + std::abs(e.value)));
  CHECK(dense_worst < 1e-7);
}

TEST_CASE("free operator: the low-lying spectrum sits in the rotated sector") {
  // Without a potential the eigenvalues near 0 lie between the real axis and the ray arg E = -2 theta.
  const double th = 0.5;
  const auto op = assemble_deformed(build_profile(th, 0.75, 3.0, 400), Potential::zero(), 0.1);
  int seen = 0;
  for (const auto& e : eigen_solve(op)) {
    if (std::abs(e.value) > 1.0) continue;
    ++seen;
    const double arg = std::arg(e.value);
    CHECK(arg <= 0.05);
    CHECK(arg >= -2 * th - 0.05);
  }
  CHECK(seen > 10);
}

TEST_CASE("compactly supported potential check") {
  Potential wide;
  wide.real = [](double r) { return std::exp(-r * r); };
  CHECK_THROWS_AS(assemble_deformed(build_profile(0.5, 0.75, 3.0, 400), wide, 0.1), PreconditionError);
}

TEST_CASE("resonances of -h^2 d^2 + V0 sech^2 r match the closed form") {
  const double V0 = 1.0, h = 0.1;
  const auto op1 = assemble_deformed(build_profile(0.5, 0.75, 3.0, 1000), Potential::sech2(V0), h);
  const auto op2 = assemble_deformed(build_profile(0.65, 0.75, 3.0, 1000), Potential::sech2(V0), h);
  const auto rep = extract_resonances(op1, op2, SearchBox{0.0, 2.0, -0.3, 0.0});
  // Test-side closed form: sqrt(V0 - h^2/4) - i h (k + 1/2).
  std::vector<cplx> exact;
  for (int k = 0; k < 3; ++k) exact.emplace_back(std::sqrt(V0 - h * h / 4), -h * (k + 0.5));
  REQUIRE(rep.resonances.size() == exact.size());
  for (std::size_t k = 0; k < exact.size(); ++k) {
    double best = INFINITY;
    for (const auto& r : rep.resonances) best = std::min(best, std::abs(r.omega - exact[k]));
    CHECK(best < 1e-4);
  }
  CHECK(rep.separation_ok);
  for (const auto& r : rep.resonances) CHECK(r.omega.real() >= 0);
}

TEST_CASE("extraction preconditions") {
  const auto op1 = assemble_deformed(build_profile(0.5, 0.75, 3.0, 400), Potential::sech2(1.0), 0.1);
  const auto close = assemble_deformed(build_profile(0.55, 0.75, 3.0, 400), Potential::sech2(1.0), 0.1);
  CHECK_THROWS_AS(extract_resonances(op1, close, SearchBox{0, 2, -0.3, 0}), PreconditionError);
  const auto other_h = assemble_deformed(build_profile(0.65, 0.75, 3.0, 400), Potential::sech2(1.0), 0.2);
  CHECK_THROWS_AS(extract_resonances(op1, other_h, SearchBox{0, 2, -0.3, 0}), PreconditionError);
  const auto op2 = assemble_deformed(build_profile(0.65, 0.75, 3.0, 400), Potential::sech2(1.0), 0.1);
  CHECK(extract_resonances(op1, op2, SearchBox{1, 0, 0, -1}).resonances.empty());
}

TEST_CASE("frequency branch") {
  CHECK(frequency(cplx(4.0, 0.0)) == cplx(2.0, 0.0));
  const cplx w = frequency(cplx(1.0, -0.2));
  CHECK(w.real() >= 0);
  CHECK(std::abs(w * w - cplx(1.0, -0.2)) < 1e-14);
}

TEST_CASE("resolvent norm agrees with the smallest singular value") {
  const auto op = assemble_deformed(build_profile(0.5, 0.75, 3.0, 200), Potential::sech2(1.0), 0.2);
  for (cplx w : {cplx(1.0, -0.05), cplx(0.8, -0.16), cplx(1.3, -0.1)}) {
    CMat B = op.dense();
    B.diagonal().array() -= w * w;
    Eigen::JacobiSVD<CMat> svd(B);
    const double ref = 1.0 / svd.singularValues().minCoeff();
    CHECK(resolvent_norm(op, w) == doctest::Approx(ref).epsilon(1e-5));
  }
}

TEST_CASE("resolvent norm of a block stack is the largest block norm") {
  const auto a = assemble_deformed(build_profile(0.5, 0.75, 3.0, 200), Potential::sech2(1.0), 0.2);
  const auto b = assemble_deformed(build_profile(0.5, 0.75, 3.0, 200), Potential::sech2(0.5), 0.2);
  const cplx w(0.9, -0.05);
  CHECK(resolvent_norm(std::vector<DeformedOperator>{a, b}, w) ==
        std::max(resolvent_norm(a, w), resolvent_norm(b, w)));
}
