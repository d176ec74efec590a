#include "trapres/dynamics/rates.hpp"

#include "trapres/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace trapres::dynamics {

namespace {

struct LineFit {
  double slope = 0.0;
  double residual = 0.0;  // max deviation from the line divided by the window length
};

LineFit fit_line(const std::vector<double>& t, const std::vector<double>& y) {
  const std::size_t n = t.size();
  double st = 0, sy = 0, stt = 0, sty = 0;
  for (std::size_t i = 0; i < n; ++i) {
    st += t[i];
    sy += y[i];
    stt += t[i] * t[i];
    sty += t[i] * y[i];
  }
  const double den = n * stt - st * st;
  LineFit f;
  f.slope = den != 0 ? (n * sty - st * sy) / den : 0.0;
  const double icpt = (sy - f.slope * st) / n;
  double dev = 0;
  for (std::size_t i = 0; i < n; ++i) dev = std::max(dev, std::abs(y[i] - icpt - f.slope * t[i]));
  const double span = t.back() - t.front();
  f.residual = span > 0 ? dev / span : 0.0;
  return f;
}

struct Spectrum {
  std::vector<double> exponents;
  std::vector<double> residuals;
};

Spectrum lyapunov_spectrum(const HamiltonianSystem& sys, const PhasePoint& start, double horizon,
                           double tau) {
  const int n = 2 * sys.dim;
  Mat Q = Mat::Identity(n, n);
  Vec logs = Vec::Zero(n);
  std::vector<double> times{0.0};
  std::vector<Vec> acc{logs};
  PhasePoint pt = start;
  double t = 0.0;
  FlowOptions o;
  o.store_path = false;
  o.stop_on_escape = false;
  while (t < horizon - 1e-12) {
    const double dt = std::min(tau, horizon - t);
    const FlowResult fr = integrate_flow(sys, pt, {0.0, dt}, true, o);
    const Mat Z = fr.monodromy.back() * Q;
    Eigen::HouseholderQR<Mat> qr(Z);
    Mat R = qr.matrixQR().triangularView<Eigen::Upper>();
    Q = qr.householderQ();
    for (int i = 0; i < n; ++i) {
      if (R(i, i) < 0) {
        Q.col(i) = -Q.col(i);
        R(i, i) = -R(i, i);
      }
      logs[i] += std::log(R(i, i));
    }
    pt = fr.final_point();
    t += dt;
    times.push_back(t);
    acc.push_back(logs);
  }
  Spectrum sp;
  std::vector<double> tw;
  std::vector<std::vector<double>> yw(n);
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (times[k] + 1e-12 < 0.5 * horizon) continue;
    tw.push_back(times[k]);
    for (int i = 0; i < n; ++i) yw[i].push_back(acc[k][i]);
  }
  for (int i = 0; i < n; ++i) {
    const LineFit f = fit_line(tw, yw[i]);
    sp.exponents.push_back(f.slope);
    sp.residuals.push_back(f.residual);
  }
  // QR ordering settles to decreasing exponents; enforce it for the report.
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](int a, int b) { return sp.exponents[a] > sp.exponents[b]; });
  Spectrum sorted;
  for (int i : idx) {
    sorted.exponents.push_back(sp.exponents[i]);
    sorted.residuals.push_back(sp.residuals[i]);
  }
  return sorted;
}

}  // namespace

ExpansionRates expansion_rates(const HamiltonianSystem& sys, const std::vector<TrappedSample>& trapped,
                               double horizon, const RateOptions& opts) {
  sys.validate();
  if (trapped.empty()) throw PreconditionError("expansion_rates: no trapped samples");
  if (horizon < 20.0) throw PreconditionError("expansion_rates: horizon must be at least 20");
  for (const auto& s : trapped)
    if (s.classification != Trapping::trapped_both)
      throw PreconditionError("expansion_rates: sample not classified trapped_both");

  ExpansionRates r;
  r.horizon = horizon;
  r.sample_count = static_cast<int>(trapped.size());
  r.nu_min = std::numeric_limits<double>::infinity();
  r.nu_max = -std::numeric_limits<double>::infinity();
  const int n = 2 * sys.dim;
  for (const auto& s : trapped) {
    const Spectrum sp = lyapunov_spectrum(sys, s.point, horizon, opts.reorthonormalize_every);
    const double nu = 0.5 * (sp.exponents.front() - sp.exponents.back());
    const double res = std::max(sp.residuals.front(), sp.residuals.back());
    r.fit_residual = std::max(r.fit_residual, res);
    if (!(nu > 0) || res > opts.residual_fraction * nu)
      throw RateUncertainError("expansion_rates: transverse exponent fit is unreliable", nu, res);
    double mu = 0.0;
    for (int i = 1; i + 1 < n; ++i) mu = std::max(mu, std::abs(sp.exponents[i]));
    for (int i = 0; i < n / 2; ++i)
      r.pairing_defect = std::max(r.pairing_defect, std::abs(sp.exponents[i] + sp.exponents[n - 1 - i]));
    r.nu_min = std::min(r.nu_min, nu);
    r.nu_max = std::max(r.nu_max, nu);
    r.mu_max = std::max(r.mu_max, mu);
    r.exponents.push_back(sp.exponents);
  }
  r.r_normal_order = r_normal_order(r.nu_min, r.mu_max, opts.r_cap, opts.mu_tolerance);
  return r;
}

long r_normal_order(double nu_min, double mu_max, long cap, double mu_tolerance) {
  if (!(mu_max > mu_tolerance)) return cap;
  const double q = nu_min / mu_max;
  if (q >= static_cast<double>(cap)) return cap;
  // Absorb the last-bit error of the division so exact ratios land on their integer.
  return std::max(0L, static_cast<long>(std::floor(q * (1.0 + 1e-12))));
}

PinchingVerdict check_pinching(const ExpansionRates& rates, double epsilon, long cap, double mu_tolerance) {
  if (!(epsilon > 0)) throw PreconditionError("check_pinching: epsilon must be positive");
  PinchingVerdict v;
  v.pinched = rates.nu_max + epsilon < 2.0 * (rates.nu_min - epsilon);
  v.margin = 2.0 * (rates.nu_min - epsilon) - (rates.nu_max + epsilon);
  v.r_normal_order = r_normal_order(rates.nu_min, rates.mu_max, cap, mu_tolerance);
  return v;
}

HamiltonianSystem perturbed_system(const HamiltonianSystem& base, const Perturbation& pert, double s) {
  HamiltonianSystem sys = base;
  sys.p = [base, pert, s](const PhasePoint& pt) { return base.p(pt) + pert.value(pt, s); };
  sys.grad_p = [base, pert, s](const PhasePoint& pt) -> Vec { return base.grad_p(pt) + pert.grad(pt, s); };
  sys.hess_p = [base, pert, s](const PhasePoint& pt) -> Mat { return base.hess_p(pt) + pert.hess(pt, s); };
  return sys;
}

std::vector<StabilityRow> perturbation_stability_scan(const HamiltonianSystem& base,
                                                      const std::vector<TrappedSample>& base_samples,
                                                      const Perturbation& pert,
                                                      const std::vector<double>& s_values,
                                                      double horizon, const RateOptions& opts,
                                                      double displacement) {
  if (std::find(s_values.begin(), s_values.end(), 0.0) == s_values.end())
    throw PreconditionError("perturbation_stability_scan: s_values must include 0");
  std::vector<StabilityRow> rows;
  for (double s : s_values) {
    StabilityRow row;
    row.s = s;
    try {
      if (s == 0.0) {
        row.rates = expansion_rates(base, base_samples, horizon, opts);
      } else {
        const HamiltonianSystem sys = perturbed_system(base, pert, s);
        std::vector<TrappedSample> moved;
        for (const auto& b : base_samples) {
          Vec lo_x = b.point.x, hi_x = b.point.x;
          lo_x[0] -= displacement;
          hi_x[0] += displacement;
          const std::vector<PhasePoint> seeds{PhasePoint(lo_x, b.point.xi), PhasePoint(hi_x, b.point.xi)};
          const auto found = find_trapped_set(sys, base.p(b.point), seeds, b.horizon);
          if (!found.empty()) moved.push_back(found.front());
        }
        if (moved.size() < base_samples.size()) {
          row.flagged = true;
          row.note = "continuation lost " + std::to_string(base_samples.size() - moved.size()) + " sample(s)";
        }
        if (!moved.empty()) row.rates = expansion_rates(sys, moved, horizon, opts);
      }
    } catch (const Error& e) {
      row.flagged = true;
      row.note = e.kind() + ": " + e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace trapres::dynamics
