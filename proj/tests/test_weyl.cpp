#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "trapres/errors.hpp"
#include "trapres/warped/models.hpp"
#include "trapres/weyl/census.hpp"
#include "trapres/weyl/gap_scan.hpp"

#include <cmath>
#include <numbers>

using namespace trapres;
using namespace trapres::weyl;

namespace {

Resonance res(double re, double im, int mult = 1) {
  Resonance r;
  r.omega = cplx(re, im);
  r.multiplicity = mult;
  return r;
}

BandSpec spec_at(double h) {
  BandSpec s;
  s.h = h;
  return s;
}

SearchBox covering(const BandSpec& s) { return {s.re_window.first, s.re_window.second, -s.h, 0.0}; }

}  // namespace

TEST_CASE("band box and gaps") {
  const auto s = spec_at(0.1);
  const auto b = s.band_box();
  CHECK(b.im_min == doctest::Approx(-0.055));
  CHECK(b.im_max == doctest::Approx(-0.045));
  CHECK(s.upper_gap().first == doctest::Approx(-0.045));
  CHECK(s.lower_gap().first == doctest::Approx(-0.09));
  CHECK(s.lower_gap().second == doctest::Approx(-0.055));
  CHECK(s.in_gap(cplx(1.0, -0.01)));
  CHECK(s.in_gap(cplx(1.0, 0.0)));
  CHECK(s.in_gap(cplx(1.0, -0.08)));
  CHECK_FALSE(s.in_gap(cplx(1.0, -0.05)));
  CHECK_FALSE(s.in_gap(cplx(1.0, b.im_max)));
  CHECK_FALSE(s.in_gap(cplx(1.0, -0.095)));
  CHECK_FALSE(s.in_gap(cplx(2.0, -0.01)));
  CHECK_NOTHROW(s.validate());

  BandSpec bad = s;
  bad.epsilon = 1.5;
  CHECK_THROWS_AS(bad.validate(), DomainError);
  bad = s;
  bad.re_window = {1.25, 0.75};
  CHECK_THROWS_AS(bad.validate(), DomainError);
  bad = s;
  bad.nu_max = 0.5;
  CHECK_THROWS_AS(bad.validate(), DomainError);
}

TEST_CASE("gaps never meet the band box") {
  for (double eps : {0.05, 0.1, 0.3})
    for (double nmax : {1.0, 1.2, 1.7}) {
      BandSpec s = spec_at(0.05);
      s.epsilon = eps;
      s.nu_max = nmax;
      if (nmax + eps >= 2 * (1 - eps)) continue;
      const auto b = s.band_box();
      for (int i = 0; i <= 200; ++i) {
        const double y = b.im_min + (b.im_max - b.im_min) * i / 200.0;
        CHECK_FALSE(s.in_gap(cplx(1.0, y)));
      }
    }
}

TEST_CASE("census of the cylinder at h = 1/32") {
  warped::WarpedModel m;
  m.h = 1.0 / 32;
  const auto s = spec_at(m.h);
  const auto r = warped::model_resonances(m, covering(s), false);
  const auto c = census({r.resonances, covering(s)}, s, warped::trapped_volume(m, s.re_window), 2);
  CHECK(c.count == 32);
  CHECK(c.weyl_prediction == doctest::Approx(32.0));
  CHECK(c.relative_error <= 0.07);
  CHECK(c.gap_violations.empty());
}

TEST_CASE("census edge cases") {
  const auto s = spec_at(0.1);
  const double vol = 2 * std::numbers::pi;
  const auto empty = census({{}, covering(s)}, s, vol, 2);
  CHECK(empty.count == 0);
  CHECK(empty.weyl_prediction == doctest::Approx(10.0));
  CHECK(empty.relative_error == doctest::Approx(1.0));

  SearchBox small = covering(s);
  small.im_min = -0.06;
  CHECK_THROWS_AS(census({{}, small}, s, vol, 2), CoverageError);

  // Left edge in, right edge out; band edges closed.
  const auto c = census({{res(0.75, -0.05), res(1.25, -0.05), res(1.0, -0.055, 3), res(1.0, -0.02)}, covering(s)},
                        s, vol, 2);
  CHECK(c.count == 4);
  CHECK(c.gap_violations.size() == 1u);
}

TEST_CASE("census is additive over disjoint resonance sets") {
  const auto s = spec_at(0.1);
  std::vector<Resonance> a{res(0.8, -0.05, 2), res(1.1, -0.052)}, b{res(0.9, -0.048, 5), res(1.3, -0.05)};
  std::vector<Resonance> ab = a;
  ab.insert(ab.end(), b.begin(), b.end());
  const auto ca = census({a, covering(s)}, s, 1.0, 2), cb = census({b, covering(s)}, s, 1.0, 2),
             cab = census({ab, covering(s)}, s, 1.0, 2);
  CHECK(cab.count == ca.count + cb.count);
}

TEST_CASE("Weyl slope") {
  std::vector<BandCensus> cs;
  for (double h : {0.1, 0.05, 0.025, 0.0125}) {
    BandCensus c;
    c.h = h;
    c.count = 7;
    cs.push_back(c);
  }
  CHECK(weyl_slope(cs).slope == doctest::Approx(0.0).epsilon(1e-12));
  for (auto& c : cs) c.count = std::lround(3.0 / c.h);
  const auto w = weyl_slope(cs);
  CHECK(w.slope == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(w.intercept == doctest::Approx(std::log(3.0)).epsilon(1e-12));
  CHECK(w.per_h.front().h == 0.1);
  CHECK(w.per_h.back().h == 0.0125);

  cs[0].count = 0;
  const auto z = weyl_slope(cs);
  CHECK(z.warnings.size() == 1u);
  CHECK(z.per_h.front().excluded);
  CHECK(z.slope == doctest::Approx(1.0).epsilon(1e-12));

  cs.pop_back();
  CHECK_THROWS_AS(weyl_slope(cs), PreconditionError);
}

namespace {

// One cylinder mode whose resonance sits at 1 - i h / 2.
std::vector<scaling::DeformedOperator> one_mode(double h) {
  warped::WarpedModel m;
  m.h = h;
  warped::SolverSettings s;
  s.N = 400;
  const double k = std::round(1.0 / h);
  return {warped::mode_operator(m, h * h * (k * k + 0.25), s.theta, s)};
}

}  // namespace

TEST_CASE("gap scan preconditions and empty inputs") {
  const auto s = spec_at(0.1);
  CHECK(gap_scan(one_mode, s, {0.25}, {}).samples.empty());
  CHECK(gap_scan(one_mode, s, {}, {-0.25}).samples.empty());
  CHECK_THROWS_AS(gap_scan(one_mode, s, {0.25}, {-0.5}), PreconditionError);
  CHECK_THROWS_AS(gap_scan(one_mode, s, {0.25}, {-0.46}), PreconditionError);
  CHECK_THROWS_AS(gap_scan(one_mode, s, {0.25}, {0.1}), PreconditionError);
  const auto lines = default_gap_lines(s, 2);
  REQUIRE(lines.size() == 2u);
  for (double l : lines) CHECK(s.in_gap(cplx(1.0, l * s.h)));
}

TEST_CASE("gap scan on a single mode") {
  BandSpec s = spec_at(0.25);
  s.re_window = {0.9, 1.1};
  GapScanOptions o;
  o.step_fraction = 0.25;
  const auto scan = gap_scan(one_mode, s, {0.25, 0.125}, {-0.25}, o);
  REQUIRE(scan.fits.size() == 1u);
  CHECK(scan.fits[0].flagged == 0);
  CHECK(scan.fits[0].max_norm.size() == 2u);
  for (const auto& g : scan.samples) {
    CHECK(std::isfinite(g.norm));
    CHECK(g.norm > 0);
    CHECK(g.omega.imag() == doctest::Approx(-0.25 * g.h));
  }
  CHECK(std::isfinite(scan.fits[0].slope));

  o.collision_norm = 1e-3;
  const auto all = gap_scan(one_mode, s, {0.25, 0.125}, {-0.25}, o);
  for (const auto& g : all.samples) CHECK(g.flagged);
  CHECK(all.fits[0].flagged == static_cast<int>(all.samples.size()));
  CHECK_FALSE(std::isfinite(all.fits[0].slope));
}
