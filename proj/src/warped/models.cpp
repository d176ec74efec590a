#include "trapres/warped/models.hpp"

#include "trapres/errors.hpp"
#include "trapres/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace trapres::warped {

void WarpedModel::validate() const {
  if (dim_n < 2) throw DomainError("WarpedModel: dim_n must be >= 2");
  if (!(h > 0)) throw DomainError("WarpedModel: h must be positive");
  if (!(scale_C >= 1)) throw DomainError("WarpedModel: scale_C must be >= 1");
  if (dim_n != 1 + cross_section.dimension())
    throw DomainError("WarpedModel: dim_n must equal 1 + dimension of the cross-section");
}

EffectiveBarrier effective_barrier(const WarpedModel& model, double lambda) {
  if (!(lambda >= 0)) throw DomainError("effective_barrier: lambda must be >= 0");
  const double h2 = model.h * model.h;
  const double n = model.dim_n;
  EffectiveBarrier b;
  b.V0 = h2 * lambda - h2 * (n - 1) * (n - 3) / 4.0;
  b.sub_barrier = b.V0 <= h2 / 4.0;
  b.potential = scaling::Potential::sech2(b.V0);
  return b;
}

OracleResult poschl_teller_oracle(double V0, double h, int k_max) {
  if (!(h > 0)) throw DomainError("poschl_teller_oracle: h must be positive");
  if (k_max < 0) throw DomainError("poschl_teller_oracle: k_max must be >= 0");
  OracleResult r;
  const double top = V0 - h * h / 4.0;
  if (!(top > 0)) {
    r.sub_barrier = true;
    return r;
  }
  const double re = std::sqrt(top);
  for (int k = 0; k <= k_max; ++k) {
    const double im = -h * (k + 0.5);
    r.omegas.emplace_back(re, im);
    r.omegas.emplace_back(-re, im);
  }
  return r;
}

scaling::DeformedOperator mode_operator(const WarpedModel& model, double V0, double theta,
                                        const SolverSettings& settings) {
  const auto prof = scaling::build_profile(theta, settings.R, settings.grid_max, settings.N, scaling::GridKind::line);
  return scaling::assemble_deformed(prof, scaling::Potential::sech2(V0), model.h);
}

ModelResonances model_resonances(const WarpedModel& model, const scaling::SearchBox& box, bool use_solver,
                                 const SolverSettings& settings, long mode_cap) {
  model.validate();
  ModelResonances out;
  out.box = box;
  out.use_solver = use_solver;
  if (box.empty()) return out;
  if (!std::isfinite(box.re_min) || !std::isfinite(box.re_max) || !std::isfinite(box.im_min) ||
      !std::isfinite(box.im_max))
    throw PreconditionError("model_resonances: box must be bounded");

  const double h = model.h;
  const double lo = std::max(0.0, box.re_min - 3.0 * h) / h;
  const double hi = (box.re_max + 3.0 * h) / h;
  if (hi < lo) return out;
  std::vector<AngularMode> selected;
  for (int k = 0;; ++k) {
    const AngularMode m = model.cross_section.mode(k);
    const double s = std::sqrt(model.scaled_lambda(m));
    if (s > hi) break;
    if (s >= lo) selected.push_back(m);
    if (static_cast<long>(selected.size()) > mode_cap)
      throw CapExceededError("model_resonances: mode count exceeds cap", h);
  }

  const int k_max = std::max(0, static_cast<int>(std::floor(-box.im_min / h - 0.5)) + 1);
  std::vector<ModeRecord> records(selected.size());
  std::vector<std::vector<scaling::Resonance>> per_mode(selected.size());
  parallel_for(selected.size(), settings.threads, [&](std::size_t i) {
    const AngularMode& m = selected[i];
    const EffectiveBarrier b = effective_barrier(model, model.scaled_lambda(m));
    ModeRecord rec;
    rec.mode = m;
    rec.V0 = b.V0;
    rec.sub_barrier = b.sub_barrier;
    std::vector<scaling::Resonance> res;
    if (use_solver) {
      const auto op1 = mode_operator(model, b.V0, settings.theta, settings);
      const auto op2 = mode_operator(model, b.V0, settings.theta2, settings);
      const auto rep = scaling::extract_resonances(op1, op2, box, settings.extraction);
      rec.separation_ok = rep.separation_ok;
      rec.separation_ratio = rep.separation_ratio;
      res = rep.resonances;
    } else {
      const OracleResult o = poschl_teller_oracle(b.V0, h, k_max);
      for (const cplx& w : o.omegas) {
        if (!box.contains(w)) continue;
        scaling::Resonance r;
        r.omega = w;
        r.energy = w * w;
        res.push_back(r);
      }
    }
    for (auto& r : res) {
      r.mode = m.index;
      r.multiplicity *= static_cast<int>(m.multiplicity);
    }
    rec.resonances = static_cast<int>(res.size());
    records[i] = rec;
    per_mode[i] = std::move(res);
  });
  out.modes = std::move(records);
  for (auto& v : per_mode)
    for (auto& r : v) out.resonances.push_back(r);
  std::stable_sort(out.resonances.begin(), out.resonances.end(), [](const auto& a, const auto& b) {
    if (a.omega.real() != b.omega.real()) return a.omega.real() < b.omega.real();
    return a.omega.imag() > b.omega.imag();
  });
  return out;
}

double trapped_volume(const WarpedModel& model, std::pair<double, double> band) {
  const auto [a, b] = band;
  if (a > b) throw DomainError("trapped_volume: band must satisfy a <= b");
  if (!(a >= 0)) throw DomainError("trapped_volume: band must be nonnegative");
  if (a == b) return 0.0;
  const int d = model.cross_section.dimension();
  const double C = model.scale_C;
  // Unit ball volume in R^d.
  const double ball = std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
  return model.cross_section.volume() * std::pow(C, d) * ball * (std::pow(b, d) - std::pow(a, d));
}

}  // namespace trapres::warped
