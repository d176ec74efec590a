#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "trapres/errors.hpp"
#include "trapres/warped/cross_section.hpp"
#include "trapres/warped/models.hpp"

#include <cmath>
#include <numbers>

using namespace trapres;
using namespace trapres::warped;

TEST_CASE("circle spectrum") {
  const auto c = CrossSection::circle(2 * std::numbers::pi);
  CHECK(c.mode(0).lambda == 0.0);
  CHECK(c.mode(0).multiplicity == 1);
  CHECK(c.mode(3).lambda == doctest::Approx(9.0));
  CHECK(c.mode(3).multiplicity == 2);
  CHECK(CrossSection::circle(std::numbers::pi).mode(1).lambda == doctest::Approx(4.0));
  CHECK(c.volume() == doctest::Approx(2 * std::numbers::pi));
  CHECK(c.modes_up_to(10.0).size() == 4u);
}

TEST_CASE("sphere spectrum and multiplicities") {
  // S^2: 2k + 1; S^3: (k + 1)^2.
  for (int k = 0; k < 8; ++k) {
    CHECK(sphere_multiplicity(k, 2) == 2 * k + 1);
    CHECK(sphere_multiplicity(k, 3) == (k + 1) * (k + 1));
  }
  const auto s = CrossSection::sphere(2);
  CHECK(s.mode(4).lambda == doctest::Approx(20.0));
  CHECK(s.volume() == doctest::Approx(4 * std::numbers::pi));
  CHECK(CrossSection::sphere(3).volume() == doctest::Approx(2 * std::numbers::pi * std::numbers::pi));
}

TEST_CASE("model validation") {
  WarpedModel m;
  CHECK_NOTHROW(m.validate());
  m.dim_n = 3;
  CHECK_THROWS_AS(m.validate(), DomainError);
  m = WarpedModel{};
  m.h = -0.1;
  CHECK_THROWS_AS(m.validate(), DomainError);
  m = WarpedModel{};
  m.scale_C = 0.5;
  CHECK_THROWS_AS(m.validate(), DomainError);
}

TEST_CASE("effective barrier on the cylinder puts Re omega at h k") {
  // n = 2: V0 = h^2 (k^2 + 1/4), so sqrt(V0 - h^2/4) = h k.
  WarpedModel m;
  m.h = 1.0 / 32;
  for (int k = 1; k < 40; ++k) {
    const auto b = effective_barrier(m, double(k) * k);
    const auto o = poschl_teller_oracle(b.V0, m.h, 1);
    REQUIRE(o.omegas.size() == 4u);
    CHECK(o.omegas[0].real() == doctest::Approx(k * m.h).epsilon(1e-12));
    CHECK(o.omegas[0].imag() == doctest::Approx(-0.5 * m.h));
    CHECK(o.omegas[2].imag() == doctest::Approx(-1.5 * m.h));
    CHECK(o.omegas[1] == -std::conj(o.omegas[0]));
  }
  CHECK(effective_barrier(m, 0.0).sub_barrier);
}

TEST_CASE("sub-barrier oracle is empty") {
  CHECK(poschl_teller_oracle(0.001, 0.1, 3).sub_barrier);
  CHECK(poschl_teller_oracle(0.001, 0.1, 3).omegas.empty());
  CHECK_THROWS_AS(poschl_teller_oracle(1.0, 0.0, 3), DomainError);
}

TEST_CASE("trapped volume") {
  WarpedModel m;
  CHECK(trapped_volume(m, {0.75, 1.25}) == doctest::Approx(2 * std::numbers::pi));
  m.scale_C = 3.0;
  CHECK(trapped_volume(m, {0.75, 1.25}) == doctest::Approx(6 * std::numbers::pi));
  CHECK(trapped_volume(m, {1.0, 1.0}) == 0.0);
  CHECK_THROWS_AS(trapped_volume(m, {1.25, 0.75}), DomainError);
  WarpedModel s;
  s.cross_section = CrossSection::sphere(2);
  s.dim_n = 3;
  // Vol(S^2) * pi (b^2 - a^2).
  CHECK(trapped_volume(s, {0.5, 1.0}) == doctest::Approx(4 * std::numbers::pi * std::numbers::pi * 0.75));
}

TEST_CASE("oracle resonances of the cylinder: mode counting") {
  WarpedModel m;
  m.h = 1.0 / 32;
  const scaling::SearchBox box{0.75, 1.25 - 1e-9, -0.6 * m.h, 0.0};
  const auto r = model_resonances(m, box, false);
  long count = 0;
  for (const auto& x : r.resonances) {
    count += x.multiplicity;
    CHECK(x.multiplicity == 2);
    CHECK(x.omega.imag() == doctest::Approx(-0.5 * m.h));
  }
  // k h in [0.75, 1.25): k = 24..39.
  CHECK(count == 32);
  CHECK(std::is_sorted(r.resonances.begin(), r.resonances.end(),
                       [](const auto& a, const auto& b) { return a.omega.real() < b.omega.real(); }));
}

TEST_CASE("solver resonances agree with the oracle") {
  WarpedModel m;
  m.h = 1.0 / 8;
  SolverSettings s;
  s.N = 1000;
  const scaling::SearchBox box{0.7, 1.3, -1.0 * m.h, 0.0};
  const auto oracle = model_resonances(m, box, false);
  const auto solved = model_resonances(m, box, true, s);
  REQUIRE(oracle.resonances.size() == solved.resonances.size());
  for (std::size_t i = 0; i < oracle.resonances.size(); ++i) {
    CHECK(std::abs(oracle.resonances[i].omega - solved.resonances[i].omega) < 1e-4);
    CHECK(oracle.resonances[i].multiplicity == solved.resonances[i].multiplicity);
    CHECK(oracle.resonances[i].mode == solved.resonances[i].mode);
  }
}

TEST_CASE("mode cap") {
  WarpedModel m;
  m.h = 1.0 / 64;
  CHECK_THROWS_AS(model_resonances(m, scaling::SearchBox{0.0, 2.0, -0.1, 0.0}, false, {}, 10), CapExceededError);
}

TEST_CASE("sphere model: multiplicities carry the harmonic count") {
  WarpedModel m;
  m.cross_section = CrossSection::sphere(2);
  m.dim_n = 3;
  m.h = 0.1;
  const auto r = model_resonances(m, scaling::SearchBox{0.5, 1.5, -0.06, 0.0}, false);
  REQUIRE_FALSE(r.resonances.empty());
  for (const auto& x : r.resonances) CHECK(x.multiplicity == sphere_multiplicity(x.mode, 2));
}
