#pragma once

#include "trapres/scaling/resonances.hpp"

#include <string>
#include <utility>
#include <vector>

namespace trapres::weyl {

using scaling::cplx;
using scaling::Resonance;
using scaling::SearchBox;

struct BandSpec {
  std::pair<double, double> re_window{0.75, 1.25};
  double epsilon = 0.1;
  double nu_min = 1.0;
  double nu_max = 1.0;
  double h = 0.1;

  /// Im omega in (1/2)[-(nu_max + eps) h, -(nu_min - eps) h], Re omega in re_window.
  SearchBox band_box() const;
  /// Upper gap: -(nu_min - eps) h / 2 < Im omega <= 0.
  std::pair<double, double> upper_gap() const;
  /// Lower gap: -(nu_min - eps) h <= Im omega < -(nu_max + eps) h / 2 (empty if reversed).
  std::pair<double, double> lower_gap() const;
  bool in_gap(cplx w) const;
  /// Throws DomainError when the band box is empty or overlaps a gap.
  void validate() const;
};

struct ResonanceSet {
  std::vector<Resonance> resonances;
  SearchBox search_box;
};

struct BandCensus {
  BandSpec spec;
  long count = 0;
  double weyl_prediction = 0.0;
  double relative_error = 0.0;
  std::vector<Resonance> gap_violations;
  double h = 0.0;
};

/// Counts resonances with multiplicity in the band box (Re window closed on the
/// left, open on the right); prediction (2 pi h)^{1-n} volume.
BandCensus census(const ResonanceSet& set, const BandSpec& spec, double volume, int dim_n);

struct WeylSlope {
  double slope = 0.0;
  double intercept = 0.0;
  struct Row {
    double h;
    long count;
    double relative_error;
    bool excluded;
  };
  std::vector<Row> per_h;
  std::vector<std::string> warnings;
};

/// Least squares of log(count) against log(1/h); zero counts are excluded with a warning.
WeylSlope weyl_slope(const std::vector<BandCensus>& censuses);

}  // namespace trapres::weyl
