#include "trapres/weyl/gap_scan.hpp"

#include "trapres/errors.hpp"
#include "trapres/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace trapres::weyl {

std::vector<double> default_gap_lines(const BandSpec& spec, int line_count) {
  spec.validate();
  std::vector<double> lines;
  if (line_count <= 0) return lines;
  const double u0 = -0.5 * (spec.nu_min - spec.epsilon), u1 = 0.0;
  const double l0 = -(spec.nu_min - spec.epsilon), l1 = -0.5 * (spec.nu_max + spec.epsilon);
  const bool has_lower = l0 < l1;
  const int n_upper = has_lower ? (line_count + 1) / 2 : line_count;
  const int n_lower = line_count - n_upper;
  for (int i = 0; i < n_upper; ++i) lines.push_back(u1 + (u0 - u1) * (i + 1.0) / (n_upper + 1.0));
  for (int i = 0; i < n_lower; ++i) lines.push_back(l1 + (l0 - l1) * (i + 1.0) / (n_lower + 1.0));
  return lines;
}

namespace {

void check_line(const BandSpec& spec, double line, double margin) {
  const double u0 = -0.5 * (spec.nu_min - spec.epsilon);
  const double l0 = -(spec.nu_min - spec.epsilon), l1 = -0.5 * (spec.nu_max + spec.epsilon);
  const bool upper = line >= u0 + margin && line <= -margin;
  const bool lower = l0 < l1 && line >= l0 + margin && line <= l1 - margin;
  if (!upper && !lower)
    throw PreconditionError("gap_scan: line Im/h = " + std::to_string(line) + " is not inside a gap with margin");
}

}  // namespace

GapScan gap_scan(const OperatorBuilder& build, const BandSpec& spec, const std::vector<double>& h_values,
                 const std::vector<double>& lines, const GapScanOptions& opts) {
  GapScan out;
  if (lines.empty() || h_values.empty()) return out;
  if (!(opts.step_fraction > 0)) throw DomainError("gap_scan: step_fraction must be positive");
  for (double line : lines) check_line(spec, line, opts.margin_fraction);
  for (double h : h_values)
    if (!(h > 0)) throw DomainError("gap_scan: h must be positive");

  const auto [a, b] = spec.re_window;
  for (double h : h_values) {
    BandSpec s = spec;
    s.h = h;
    s.validate();
    const auto stack = build(h);
    const double step = opts.step_fraction * h;
    const int count = static_cast<int>(std::floor((b - a) / step + 1e-9)) + 1;
    std::vector<GapSample> block(lines.size() * count);
    parallel_for(block.size(), opts.threads, [&](std::size_t idx) {
      const double line = lines[idx / count];
      const int i = static_cast<int>(idx % count);
      GapSample g;
      g.omega = cplx(a + i * step, line * h);
      g.h = h;
      g.line = line;
      try {
        g.norm = scaling::resolvent_norm(stack, g.omega, opts.resolvent);
      } catch (const PreconditionError&) {
        g.norm = std::numeric_limits<double>::infinity();
      }
      g.flagged = !(g.norm <= opts.collision_norm);
      block[idx] = g;
    });
    out.samples.insert(out.samples.end(), block.begin(), block.end());
  }

  for (double line : lines) {
    GapLineFit fit;
    fit.line = line;
    for (double h : h_values) {
      double m = 0.0;
      for (const auto& g : out.samples) {
        if (g.line != line || g.h != h) continue;
        if (g.flagged) {
          ++fit.flagged;
          continue;
        }
        m = std::max(m, g.norm);
      }
      if (m > 0) fit.max_norm.emplace_back(h, m);
    }
    if (fit.max_norm.size() >= 2) {
      double sx = 0, sy = 0, sxx = 0, sxy = 0;
      const double n = static_cast<double>(fit.max_norm.size());
      for (const auto& [h, m] : fit.max_norm) {
        const double x = std::log(1.0 / h), y = std::log(m);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
      }
      const double den = n * sxx - sx * sx;
      fit.slope = den != 0.0 ? (n * sxy - sx * sy) / den : std::nan("");
      fit.intercept = (sy - fit.slope * sx) / n;
    } else {
      fit.slope = std::nan("");
      fit.intercept = std::nan("");
    }
    out.fits.push_back(fit);
  }
  return out;
}

}  // namespace trapres::weyl
