#include "trapres/scaling/resonances.hpp"

#include "trapres/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace trapres::scaling {

double drift_tolerance(cplx omega, const ExtractionOptions& opts) {
  return std::max(opts.drift_abs, opts.drift_rel * std::abs(omega));
}

cplx frequency(cplx energy) {
  cplx w = std::sqrt(energy);
  if (w.real() < 0) w = -w;
  return w;
}

ExtractionReport filter_resonances(const DeformedOperator& op1, const std::vector<cplx>& eig1,
                                   const std::vector<cplx>& eig2, double theta1, const SearchBox& box,
                                   const ExtractionOptions& opts) {
  ExtractionReport rep;
  rep.separation_ratio = std::numeric_limits<double>::infinity();
  if (box.empty()) return rep;

  std::vector<cplx> w2;
  w2.reserve(eig2.size());
  for (const cplx& e : eig2) w2.push_back(frequency(e));

  std::vector<Resonance> accepted;
  for (const cplx& e : eig1) {
    const cplx w = frequency(e);
    if (!box.contains(w)) continue;
    if (!(std::arg(w) > -theta1 + opts.sector_margin)) continue;
    ++rep.candidates;
    const double tol = drift_tolerance(w, opts);
    double best = std::numeric_limits<double>::infinity();
    int within = 0;
    for (const cplx& v : w2) {
      const double d = std::abs(v - w);
      best = std::min(best, d);
      if (d <= tol) ++within;
    }
    if (best > tol) {
      ++rep.rejected;
      rep.separation_ratio = std::min(rep.separation_ratio, best / tol);
      continue;
    }
    Resonance r;
    r.omega = w;
    r.energy = e;
    r.theta_drift = best;
    if (within > 1) {
      r.flagged = true;
      r.theta_drift = best + tol;
    }
    r.residual = eigenpair_residual(op1, e);
    rep.max_accepted_drift = std::max(rep.max_accepted_drift, best);
    accepted.push_back(r);
  }
  rep.separation_ok = rep.separation_ratio >= opts.separation_required;

  std::sort(accepted.begin(), accepted.end(), [](const Resonance& a, const Resonance& b) {
    return a.omega.real() < b.omega.real() || (a.omega.real() == b.omega.real() && a.omega.imag() < b.omega.imag());
  });
  std::vector<bool> used(accepted.size(), false);
  for (std::size_t i = 0; i < accepted.size(); ++i) {
    if (used[i]) continue;
    std::vector<std::size_t> members{i};
    used[i] = true;
    for (std::size_t k = 0; k < members.size(); ++k) {
      for (std::size_t j = i + 1; j < accepted.size(); ++j) {
        if (used[j]) continue;
        if (std::abs(accepted[j].omega - accepted[members[k]].omega) <= opts.cluster_radius) {
          used[j] = true;
          members.push_back(j);
        }
      }
    }
    Resonance c = accepted[i];
    cplx sum = 0.0;
    for (std::size_t m : members) {
      sum += accepted[m].omega;
      c.residual = std::max(c.residual, accepted[m].residual);
      c.theta_drift = std::max(c.theta_drift, accepted[m].theta_drift);
      c.flagged = c.flagged || accepted[m].flagged;
    }
    c.multiplicity = static_cast<int>(members.size());
    c.omega = sum / static_cast<double>(members.size());
    c.energy = c.omega * c.omega;
    rep.resonances.push_back(c);
  }
  return rep;
}

ExtractionReport extract_resonances(const DeformedOperator& op1, const DeformedOperator& op2,
                                    const SearchBox& box, const ExtractionOptions& opts) {
  const auto& p1 = op1.profile;
  const auto& p2 = op2.profile;
  if (p1.grid != p2.grid || p1.kind != p2.kind || op1.h != op2.h || op1.potential != op2.potential ||
      op1.angular_coefficient != op2.angular_coefficient || op1.dimension_n != op2.dimension_n)
    throw PreconditionError("extract_resonances: operators must share grid, h and potential");
  if (!(p2.theta >= p1.theta + 0.1 - 1e-12))
    throw PreconditionError("extract_resonances: theta_2 must exceed theta_1 by at least 0.1");
  if (box.empty()) return filter_resonances(op1, {}, {}, p1.theta, box, opts);
  const auto e1 = tridiagonal_eigenvalues(op1.sub, op1.diag, op1.sup);
  const auto e2 = tridiagonal_eigenvalues(op2.sub, op2.diag, op2.sup);
  return filter_resonances(op1, e1, e2, p1.theta, box, opts);
}

}  // namespace trapres::scaling
