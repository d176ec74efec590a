#include "trapres/dynamics/trapping.hpp"

#include "trapres/errors.hpp"

#include <boost/math/tools/toms748_solve.hpp>

#include <cmath>

namespace trapres::dynamics {

std::string to_string(Trapping t) {
  switch (t) {
    case Trapping::trapped_forward: return "trapped_forward";
    case Trapping::trapped_backward: return "trapped_backward";
    case Trapping::trapped_both: return "trapped_both";
    case Trapping::escaped: return "escaped";
  }
  return "unknown";
}

TrappedSample classify_trapping(const HamiltonianSystem& sys, const PhasePoint& point,
                                double horizon) {
  if (!(horizon > 0)) throw PreconditionError("classify_trapping: horizon must be positive");
  FlowOptions o;
  o.store_path = false;
  TrappedSample s;
  s.point = point;
  s.horizon = horizon;
  const FlowResult fwd = integrate_flow(sys, point, {0.0, horizon}, false, o);
  const FlowResult bwd = integrate_flow(sys, point, {0.0, -horizon}, false, o);
  if (fwd.escaped) {
    s.forward_escape_time = *fwd.escape_time;
    s.forward_side = fwd.escape_side;
  }
  if (bwd.escaped) {
    s.backward_escape_time = -*bwd.escape_time;
    s.backward_side = bwd.escape_side;
  }
  if (!fwd.escaped && !bwd.escaped) s.classification = Trapping::trapped_both;
  else if (!fwd.escaped) s.classification = Trapping::trapped_forward;
  else if (!bwd.escaped) s.classification = Trapping::trapped_backward;
  else s.classification = Trapping::escaped;
  return s;
}

PhasePoint project_to_shell(const HamiltonianSystem& sys, const PhasePoint& point, double energy) {
  if (std::abs(sys.p(point) - energy) <= 1e-15 * (1.0 + std::abs(energy))) return point;
  Vec dir = point.xi;
  if (dir.norm() == 0.0) {
    dir = Vec::Zero(point.dim());
    dir[0] = 1.0;
  }
  auto g = [&](double s) { return sys.p(PhasePoint(point.x, s * dir)) - energy; };
  const double g0 = g(0.0);
  if (g0 == 0.0) return PhasePoint(point.x, 0.0 * dir);
  if (g0 > 0) throw DomainError("project_to_shell: energy below the momentum-free value of p");
  double hi = 1.0;
  int expand = 0;
  while (g(hi) < 0) {
    hi *= 2.0;
    if (++expand > 200) throw DomainError("project_to_shell: no root along the momentum ray");
  }
  if (g(hi) == 0.0) return PhasePoint(point.x, hi * dir);
  boost::uintmax_t iters = 200;
  const auto tol = boost::math::tools::eps_tolerance<double>(52);
  const auto [lo_s, hi_s] = boost::math::tools::toms748_solve(g, 0.0, hi, g0, g(hi), tol, iters);
  const double s = std::abs(g(lo_s)) <= std::abs(g(hi_s)) ? lo_s : hi_s;
  PhasePoint out(point.x, s * dir);
  if (std::abs(sys.p(out) - energy) > 1e-9) throw DomainError("project_to_shell: projection failed");
  return out;
}

namespace {

double capped(double t, double horizon) { return std::isfinite(t) ? t : 4.0 * horizon; }

// Returns s with indicator(s) == 0, or the bracket midpoint once it is narrower
// than machine resolution. indicator(lo) and indicator(hi) must be nonzero and
// of opposite sign.
template <class F>
double bisect(F indicator, double lo, double hi, int sign_lo) {
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) return mid;
    const int g = indicator(mid);
    if (g == 0) return mid;
    if (g == sign_lo) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

std::vector<TrappedSample> find_trapped_set(const HamiltonianSystem& sys, double energy,
                                            const std::vector<PhasePoint>& seeds, double horizon) {
  if (!(horizon > 0)) throw PreconditionError("find_trapped_set: horizon must be positive");
  std::vector<TrappedSample> out;
  if (seeds.empty()) return out;

  std::vector<PhasePoint> shell;
  shell.reserve(seeds.size());
  for (const auto& s : seeds) shell.push_back(project_to_shell(sys, s, energy));

  for (std::size_t i = 0; i < shell.size(); ++i) {
    const TrappedSample c = classify_trapping(sys, shell[i], horizon);
    if (c.classification == Trapping::trapped_both) out.push_back(c);
  }

  for (std::size_t i = 0; i + 1 < shell.size(); ++i) {
    const Vec ya = shell[i].stacked();
    const Vec yb = shell[i + 1].stacked();
    auto at = [&](double s) {
      return project_to_shell(sys, PhasePoint::from_stacked(ya + s * (yb - ya)), energy);
    };
    const TrappedSample ca = classify_trapping(sys, shell[i], horizon);
    const TrappedSample cb = classify_trapping(sys, shell[i + 1], horizon);

    std::vector<PhasePoint> candidates;
    const bool fwd_split = ca.forward_side != 0 && cb.forward_side != 0 && ca.forward_side != cb.forward_side;
    const bool bwd_split = ca.backward_side != 0 && cb.backward_side != 0 && ca.backward_side != cb.backward_side;
    if (fwd_split || bwd_split) {
      std::optional<double> sf, sb;
      if (fwd_split)
        sf = bisect([&](double s) { return classify_trapping(sys, at(s), horizon).forward_side; }, 0.0,
                    1.0, ca.forward_side);
      if (bwd_split)
        sb = bisect([&](double s) { return classify_trapping(sys, at(s), horizon).backward_side; }, 0.0,
                    1.0, ca.backward_side);
      if (sf && sb) {
        candidates.push_back(at(0.5 * (*sf + *sb)));
      } else if (sf) {
        // A point of Gamma_- approaches K under the forward flow.
        candidates.push_back(project_to_shell(sys, flow_to(sys, at(*sf), 0.5 * horizon), energy));
      } else {
        candidates.push_back(project_to_shell(sys, flow_to(sys, at(*sb), -0.5 * horizon), energy));
      }
    } else {
      auto asym = [&](const TrappedSample& c) {
        const double d = capped(c.forward_escape_time, horizon) - capped(c.backward_escape_time, horizon);
        return d > 0 ? 1 : (d < 0 ? -1 : 0);
      };
      const int ga = asym(ca), gb = asym(cb);
      if (ga != 0 && gb != 0 && ga != gb) {
        const double s = bisect([&](double s) { return asym(classify_trapping(sys, at(s), horizon)); }, 0.0,
                                1.0, ga);
        candidates.push_back(at(s));
      }
    }
    for (const auto& pt : candidates) {
      TrappedSample c = classify_trapping(sys, pt, horizon);
      if (c.classification == Trapping::trapped_both) out.push_back(std::move(c));
    }
  }
  return out;
}

}  // namespace trapres::dynamics
