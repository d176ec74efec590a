#include "trapres/weyl/census.hpp"

#include "trapres/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

namespace trapres::weyl {

SearchBox BandSpec::band_box() const {
  SearchBox b;
  b.re_min = re_window.first;
  b.re_max = re_window.second;
  b.im_min = -0.5 * (nu_max + epsilon) * h;
  b.im_max = -0.5 * (nu_min - epsilon) * h;
  return b;
}

std::pair<double, double> BandSpec::upper_gap() const { return {-0.5 * (nu_min - epsilon) * h, 0.0}; }

std::pair<double, double> BandSpec::lower_gap() const {
  return {-(nu_min - epsilon) * h, -0.5 * (nu_max + epsilon) * h};
}

bool BandSpec::in_gap(cplx w) const {
  if (w.real() < re_window.first || w.real() > re_window.second) return false;
  const double y = w.imag();
  const auto [u0, u1] = upper_gap();
  if (y > u0 && y <= u1) return true;
  const auto [l0, l1] = lower_gap();
  return l0 < l1 && y >= l0 && y < l1;
}

void BandSpec::validate() const {
  if (!(h > 0) || !std::isfinite(h)) throw DomainError("BandSpec: h must be positive");
  if (!(epsilon > 0)) throw DomainError("BandSpec: epsilon must be positive");
  if (!(nu_min > 0) || !(nu_max >= nu_min)) throw DomainError("BandSpec: need 0 < nu_min <= nu_max");
  if (!(nu_min - epsilon > 0)) throw DomainError("BandSpec: epsilon must be below nu_min");
  if (!(re_window.first < re_window.second)) throw DomainError("BandSpec: re_window must be increasing");
  const SearchBox b = band_box();
  if (b.empty()) throw DomainError("BandSpec: band box is empty");
  // Gaps are half-open at the band edges, so disjointness reduces to ordering.
  if (upper_gap().first < b.im_max) throw DomainError("BandSpec: upper gap overlaps the band");
  const auto [l0, l1] = lower_gap();
  if (l0 < l1 && l1 > b.im_min) throw DomainError("BandSpec: lower gap overlaps the band");
}

BandCensus census(const ResonanceSet& set, const BandSpec& spec, double volume, int dim_n) {
  spec.validate();
  if (!(volume >= 0)) throw DomainError("census: volume must be >= 0");
  if (dim_n < 1) throw DomainError("census: dim_n must be >= 1");
  const SearchBox box = spec.band_box();
  // Coverage: the band box plus the gaps inside the window must have been searched.
  SearchBox need = box;
  need.im_min = std::min(box.im_min, spec.lower_gap().first);
  need.im_max = 0.0;
  if (!set.search_box.contains(need)) throw CoverageError("census: resonance search box does not cover the band");

  BandCensus c;
  c.spec = spec;
  c.h = spec.h;
  for (const Resonance& r : set.resonances) {
    const double x = r.omega.real(), y = r.omega.imag();
    if (x >= box.re_min && x < box.re_max && y >= box.im_min && y <= box.im_max) c.count += r.multiplicity;
    if (spec.in_gap(r.omega)) c.gap_violations.push_back(r);
  }
  c.weyl_prediction = std::pow(2.0 * std::numbers::pi * spec.h, 1 - dim_n) * volume;
  c.relative_error = std::abs(c.count - c.weyl_prediction) / std::max(c.weyl_prediction, 1.0);
  return c;
}

WeylSlope weyl_slope(const std::vector<BandCensus>& censuses) {
  std::map<double, int> distinct;
  for (const auto& c : censuses) distinct[c.h] += 1;
  if (distinct.size() < 4) throw PreconditionError("weyl_slope: need at least 4 distinct h values");

  WeylSlope out;
  std::vector<double> xs, ys;
  for (const auto& c : censuses) {
    const bool excluded = c.count <= 0;
    out.per_h.push_back({c.h, c.count, c.relative_error, excluded});
    if (excluded) {
      out.warnings.push_back("h=" + std::to_string(c.h) + ": zero count excluded from fit");
      continue;
    }
    xs.push_back(std::log(1.0 / c.h));
    ys.push_back(std::log(static_cast<double>(c.count)));
  }
  std::sort(out.per_h.begin(), out.per_h.end(), [](const auto& a, const auto& b) { return a.h > b.h; });
  if (xs.size() < 2) {
    out.warnings.push_back("fewer than two usable censuses; slope undefined");
    out.slope = std::nan("");
    out.intercept = std::nan("");
    return out;
  }
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double den = n * sxx - sx * sx;
  if (den == 0.0) {
    out.warnings.push_back("all usable censuses share one h; slope undefined");
    out.slope = std::nan("");
    out.intercept = sy / n;
    return out;
  }
  out.slope = (n * sxy - sx * sy) / den;
  out.intercept = (sy - out.slope * sx) / n;
  return out;
}

}  // namespace trapres::weyl
