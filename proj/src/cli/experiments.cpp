#include "trapres/cli/experiments.hpp"

#include "trapres/dynamics/defining.hpp"
#include "trapres/dynamics/rates.hpp"
#include "trapres/errors.hpp"
#include "trapres/model/operators.hpp"
#include "trapres/model/quantization.hpp"
#include "trapres/parallel.hpp"
#include "trapres/scaling/profile.hpp"
#include "trapres/warped/dynamics_models.hpp"
#include "trapres/warped/models.hpp"
#include "trapres/weyl/census.hpp"
#include "trapres/weyl/gap_scan.hpp"

#include <Eigen/Core>
#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <set>

namespace trapres::cli {

namespace dyn = trapres::dynamics;
using scaling::cplx;

namespace {

constexpr const char* kVersion = "0.1.0";
const double kNaN = std::numeric_limits<double>::quiet_NaN();

// ---------------------------------------------------------------------------
// Reporting helpers

struct Recorder {
  RunReport& rep;
  std::string experiment;

  // status: value within tolerance of reference (two-sided).
  void near(const std::string& q, Cell h, double value, double ref, double tol) {
    const bool ok = std::abs(value - ref) <= tol;
    row(q, h, value, ref, tol, ok);
  }
  // status: value <= bound.
  void at_most(const std::string& q, Cell h, double value, double bound) {
    row(q, h, value, bound, 0.0, value <= bound);
  }
  void at_least(const std::string& q, Cell h, double value, double bound) {
    row(q, h, value, bound, 0.0, value >= bound);
  }
  void info(const std::string& q, Cell h, double value) {
    rep.results.add({experiment, q, std::move(h), value, kNaN, kNaN, std::string("info")});
  }
  void row(const std::string& q, Cell h, double value, double ref, double tol, bool ok) {
    rep.results.add({experiment, q, std::move(h), value, ref, tol, std::string(ok ? "pass" : "fail")});
    if (!ok) rep.failed_check = true;
  }
};

Cell no_h() { return std::string(); }

warped::WarpedModel make_model(const ExperimentConfig& c, double h) {
  warped::WarpedModel m;
  if (c.model.cross_section == "sphere") {
    m.cross_section = warped::CrossSection::sphere(c.model.sphere_dimension);
    m.dim_n = 1 + c.model.sphere_dimension;
  } else {
    m.cross_section = warped::CrossSection::circle(c.model.length);
    m.dim_n = 2;
  }
  m.scale_C = c.model.scale_C;
  m.h = h;
  m.validate();
  return m;
}

warped::SolverSettings make_settings(const ExperimentConfig& c, unsigned threads) {
  warped::SolverSettings s;
  s.theta = c.solver.theta;
  s.theta2 = c.solver.theta2;
  s.R = c.solver.R;
  s.grid_max = c.solver.grid_max;
  s.N = c.solver.N;
  s.threads = threads;
  return s;
}

Table resonance_table() {
  Table t;
  t.name = "resonances";
  t.columns = {"h", "re_omega", "im_omega", "mode", "multiplicity", "residual", "theta_drift"};
  return t;
}

void add_resonances(Table& t, double h, const std::vector<scaling::Resonance>& rs) {
  for (const auto& r : rs)
    t.add({h, r.omega.real(), r.omega.imag(), static_cast<long>(r.mode), static_cast<long>(r.multiplicity),
           r.residual, r.theta_drift});
}

// Largest |Im omega / h + (k + 1/2)| over the nearest band index k >= 0.
double band_deviation(const std::vector<scaling::Resonance>& rs, double h) {
  double worst = 0.0;
  for (const auto& r : rs) {
    const double y = -r.omega.imag() / h - 0.5;
    const double k = std::max(0.0, std::round(y));
    worst = std::max(worst, std::abs(y - k));
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Dynamics: trapped samples on the warped product

struct DynamicsSetup {
  warped::ModelDynamics md;
  std::vector<dyn::PhasePoint> seeds;  // consecutive pairs straddle r = 0
};

DynamicsSetup dynamics_setup(const ExperimentConfig& c) {
  DynamicsSetup s;
  std::mt19937_64 rng(c.seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const double C = c.model.scale_C;
  if (c.model.cross_section == "neck_torus") {
    s.md = warped::warped_dynamics(warped::surface_cometric(warped::SurfaceOfRevolution::neck(c.model.neck_a), C));
    // Samples on the neck orbit u = 0, where the tangential rate peaks.
    for (int i = 0; i < c.dynamics.samples; ++i) {
      const double v = 2.0 * std::numbers::pi * U(rng);
      const double dir = (i % 2 == 0) ? 1.0 : -1.0;
      for (double r : {-0.5, 0.5}) {
        dyn::Vec x(3), xi(3);
        x << r, 0.0, v;
        xi << 0.0, 0.0, dir * C;
        s.seeds.emplace_back(x, xi);
      }
    }
  } else {
    s.md = warped::dynamics_for_model(make_model(c, 0.1));
    for (int i = 0; i < c.dynamics.samples; ++i) {
      const double y = c.model.length * U(rng);
      const double dir = (i % 2 == 0) ? 1.0 : -1.0;
      for (double r : {-0.5, 0.5}) {
        dyn::Vec x(2), xi(2);
        x << r, y;
        xi << 0.0, dir * C;
        s.seeds.emplace_back(x, xi);
      }
    }
  }
  return s;
}

std::vector<dyn::TrappedSample> locate_trapped(const DynamicsSetup& s, double energy, unsigned threads) {
  const std::size_t pairs = s.seeds.size() / 2;
  std::vector<std::vector<dyn::TrappedSample>> found(pairs);
  parallel_for(pairs, threads, [&](std::size_t i) {
    found[i] = dyn::find_trapped_set(s.md.system, energy, {s.seeds[2 * i], s.seeds[2 * i + 1]}, 20.0);
  });
  std::vector<dyn::TrappedSample> out;
  for (auto& f : found)
    for (auto& t : f) out.push_back(t);
  if (out.empty()) throw PreconditionError("no trapped samples were located from the seeds");
  return out;
}

Table rates_table() {
  Table t;
  t.name = "rates";
  t.columns = {"nu_min", "nu_max", "mu_max", "horizon"};
  return t;
}

// ---------------------------------------------------------------------------
// Experiments

void exp_rates(const ExperimentConfig& c, unsigned threads, RunReport& rep, Recorder& rec) {
  const DynamicsSetup s = dynamics_setup(c);
  const auto samples = locate_trapped(s, c.dynamics.energy, threads);
  const double H = c.dynamics.horizon;
  const auto rates = dyn::expansion_rates(s.md.system, samples, H);
  Table t = rates_table();
  t.add({rates.nu_min, rates.nu_max, rates.mu_max, rates.horizon});
  rep.artifacts.push_back(t);

  const bool flat = c.model.cross_section == "circle";
  if (flat) {
    // Cylinder: nu_min = nu_max = 1 and no tangential expansion.
    rec.near("nu_min", no_h(), rates.nu_min, 1.0, 1e-3);
    rec.near("nu_max", no_h(), rates.nu_max, 1.0, 1e-3);
    rec.at_most("mu_max", no_h(), rates.mu_max, 1e-3);
  } else {
    rec.info("nu_min", no_h(), rates.nu_min);
    rec.info("nu_max", no_h(), rates.nu_max);
    rec.info("mu_max", no_h(), rates.mu_max);
  }
  rec.info("r_normal_order", no_h(), static_cast<double>(rates.r_normal_order));
  rec.info("fit_residual", no_h(), rates.fit_residual);
  rec.at_most("pairing_defect", no_h(), rates.pairing_defect, 1e-6);
  rec.info("sample_count", no_h(), rates.sample_count);
  const auto pin = dyn::check_pinching(rates, c.band.epsilon);
  rec.info("pinched", no_h(), pin.pinched ? 1.0 : 0.0);

  // Flow invariants on every located sample over the horizon.
  std::vector<dyn::FlowDiagnostics> diag(samples.size());
  parallel_for(samples.size(), threads, [&](std::size_t i) {
    diag[i] = dyn::diagnose(s.md.system, dyn::integrate_flow(s.md.system, samples[i].point, {0.0, H}, true));
  });
  double drift = 0, symp = 0;
  for (const auto& d : diag) {
    drift = std::max(drift, d.energy_drift);
    symp = std::max(symp, d.symplectic_defect);
  }
  rec.at_most("energy_drift", no_h(), drift, 1e-8);
  rec.at_most("symplectic_defect", no_h(), symp, 1e-6);
  rep.meta_extra["rates"] = {{"horizon", H}, {"samples", rates.sample_count}, {"scale_C", c.model.scale_C}};
}

void exp_perturbation(const ExperimentConfig& c, unsigned threads, RunReport& rep, Recorder& rec) {
  const DynamicsSetup s = dynamics_setup(c);
  const auto samples = locate_trapped(s, c.dynamics.energy, threads);
  const auto rows =
      dyn::perturbation_stability_scan(s.md.system, samples, warped::circle_bump_perturbation(), c.dynamics.s_values,
                                       c.dynamics.horizon);
  Table t;
  t.name = "stability";
  t.columns = {"s", "nu_min", "nu_max", "mu_max", "horizon", "flagged", "note"};
  for (const auto& r : rows) {
    t.add({r.s, r.rates.nu_min, r.rates.nu_max, r.rates.mu_max, r.rates.horizon, static_cast<long>(r.flagged),
           r.note});
    rec.info("nu_min(s=" + format_cell(r.s) + ")", no_h(), r.rates.nu_min);
    rec.info("mu_max(s=" + format_cell(r.s) + ")", no_h(), r.rates.mu_max);
  }
  rep.artifacts.push_back(t);
  // Rates move continuously with s: the smallest s row stays near the unperturbed one.
  const dyn::StabilityRow* base = nullptr;
  for (const auto& r : rows)
    if (r.s == 0.0 && !r.flagged) base = &r;
  if (base)
    for (const auto& r : rows)
      if (!r.flagged && r.s != 0.0)
        rec.at_most("nu_min_shift(s=" + format_cell(r.s) + ")", no_h(), std::abs(r.rates.nu_min - base->rates.nu_min),
                    10.0 * std::abs(r.s) + 1e-3);
}

void exp_transport(const ExperimentConfig& c, unsigned threads, RunReport& rep, Recorder& rec) {
  const auto md = warped::dynamics_for_model(make_model(c, 0.1));
  const auto& sys = md.system;
  const double E = c.dynamics.energy;
  const double C = c.model.scale_C;
  const double delta = 1e-3;
  const double horizon = 20.0;

  struct Job {
    int side;  // +1 on Gamma_+, -1 on Gamma_-
    double r;
  };
  std::vector<Job> jobs;
  for (int side : {1, -1})
    for (double r : c.dynamics.transport_r) jobs.push_back({side, r});

  struct Out {
    double a = 0, closed = 0, residual = 0, tail = 0;
  };
  std::vector<Out> outs(jobs.size());
  parallel_for(jobs.size(), threads, [&](std::size_t i) {
    const Job& jb = jobs[i];
    dyn::Vec x(2), xi(2);
    x << jb.r, 0.0;
    xi << jb.side * E * std::tanh(jb.r), E * C;
    const dyn::PhasePoint rho(x, xi);
    // f = phi_- on Gamma_+ and phi_+ on Gamma_-; both vanish on K.
    const auto& phi = jb.side > 0 ? md.phi_minus : md.phi_plus;
    const dyn::Sign sign = jb.side > 0 ? dyn::Sign::plus : dyn::Sign::minus;
    auto a_at = [&](const dyn::PhasePoint& q) { return dyn::solve_transport(sys, sign, phi.value, q, horizon); };
    const auto centre = a_at(rho);
    const auto ahead = a_at(dyn::flow_to(sys, rho, delta));
    const auto behind = a_at(dyn::flow_to(sys, rho, -delta));
    Out o;
    o.a = centre.value;
    o.tail = centre.tail;
    o.closed = 2.0 * E * jb.r;
    o.residual = std::abs((ahead.value - behind.value) / (2.0 * delta) - phi.value(rho));
    outs[i] = o;
  });

  Table t;
  t.name = "transport";
  t.columns = {"side", "r", "a", "closed_form", "hp_residual", "tail"};
  double worst_res[2] = {0, 0}, worst_closed = 0;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    t.add({std::string(jobs[i].side > 0 ? "plus" : "minus"), jobs[i].r, outs[i].a, outs[i].closed, outs[i].residual,
           outs[i].tail});
    double& w = worst_res[jobs[i].side > 0 ? 0 : 1];
    w = std::max(w, outs[i].residual);
    worst_closed = std::max(worst_closed, std::abs(outs[i].a - outs[i].closed));
  }
  rep.artifacts.push_back(t);
  rec.at_most("hp_residual_gamma_plus", no_h(), worst_res[0], 1e-4);
  rec.at_most("hp_residual_gamma_minus", no_h(), worst_res[1], 1e-4);
  rec.at_most("closed_form_error", no_h(), worst_closed, 1e-6);
}

void exp_resonances(const ExperimentConfig& c, unsigned threads, RunReport& rep, Recorder& rec) {
  Table t = resonance_table();
  const auto settings = make_settings(c, threads);
  rep.meta_extra["profile"] =
      scaling::build_profile(settings.theta, settings.R, settings.grid_max, settings.N).description();
  if (c.model.kind == "potential1d") {
    const double V0 = c.model.V0;
    std::vector<scaling::ExtractionReport> reps(c.h_values.size());
    parallel_for(c.h_values.size(), threads, [&](std::size_t i) {
      const double h = c.h_values[i];
      const auto p1 = scaling::build_profile(settings.theta, settings.R, settings.grid_max, settings.N);
      const auto p2 = scaling::build_profile(settings.theta2, settings.R, settings.grid_max, settings.N);
      const auto pot = scaling::Potential::sech2(V0);
      scaling::SearchBox box{0.0, 2.0 * std::sqrt(V0), -3.0 * h, 0.0};
      reps[i] = scaling::extract_resonances(scaling::assemble_deformed(p1, pot, h),
                                            scaling::assemble_deformed(p2, pot, h), box, settings.extraction);
    });
    for (std::size_t i = 0; i < c.h_values.size(); ++i) {
      const double h = c.h_values[i];
      add_resonances(t, h, reps[i].resonances);
      const auto oracle = warped::poschl_teller_oracle(V0, h, 3);
      double err = 0.0;
      for (const auto& r : reps[i].resonances) {
        double best = std::numeric_limits<double>::infinity();
        for (const cplx& w : oracle.omegas) best = std::min(best, std::abs(r.omega - w));
        err = std::max(err, best);
      }
      rec.info("accepted", h, static_cast<double>(reps[i].resonances.size()));
      rec.info("max_oracle_error", h, err);
      rec.row("separation_ok", h, reps[i].separation_ok ? 1.0 : 0.0, 1.0, 0.0, reps[i].separation_ok);
    }
  } else {
    const bool use_solver = c.solver.mode == "solver";
    for (double h : c.h_values) {
      const auto m = make_model(c, h);
      const scaling::SearchBox box{c.band.re_window.first, c.band.re_window.second, -2.0 * h, 0.0};
      const auto res = warped::model_resonances(m, box, use_solver, settings);
      add_resonances(t, h, res.resonances);
      long total = 0;
      for (const auto& r : res.resonances) total += r.multiplicity;
      rec.info("count", h, static_cast<double>(total));
      if (c.model.cross_section == "circle" || c.model.cross_section == "sphere")
        rec.at_most("band_deviation", h, band_deviation(res.resonances, h), 0.02);
    }
  }
  rep.artifacts.push_back(t);
}

weyl::BandSpec band_spec(const ExperimentConfig& c, double h) {
  weyl::BandSpec s;
  s.re_window = c.band.re_window;
  s.epsilon = c.band.epsilon;
  s.nu_min = c.band.nu_min;
  s.nu_max = c.band.nu_max;
  s.h = h;
  s.validate();
  return s;
}

void exp_weyl(const ExperimentConfig& c, unsigned threads, RunReport& rep, Recorder& rec) {
  const bool use_solver = c.solver.mode == "solver";
  const auto settings = make_settings(c, threads);
  if (use_solver)
    rep.meta_extra["profile"] =
        scaling::build_profile(settings.theta, settings.R, settings.grid_max, settings.N).description();
  Table res_t = resonance_table();
  Table cen_t;
  cen_t.name = "census";
  cen_t.columns = {"h", "count", "prediction", "relative_error"};
  std::vector<weyl::BandCensus> all;
  for (double h : c.h_values) {
    const auto spec = band_spec(c, h);
    const auto m = make_model(c, h);
    const auto band = spec.band_box();
    const double height = band.im_max - band.im_min;
    // Search margins of one band height around the band and both gaps.
    scaling::SearchBox box{spec.re_window.first - height, spec.re_window.second + height,
                           spec.lower_gap().first - height, height};
    const auto found = warped::model_resonances(m, box, use_solver, settings);
    weyl::ResonanceSet set{found.resonances, box};
    const double vol = warped::trapped_volume(m, spec.re_window);
    const auto cen = weyl::census(set, spec, vol, m.dim_n);
    all.push_back(cen);
    add_resonances(res_t, h, found.resonances);
    cen_t.add({h, cen.count, cen.weyl_prediction, cen.relative_error});
    rec.at_most("relative_error", h, cen.relative_error, 2.0 / std::max(cen.weyl_prediction, 1.0) + 0.02);
    rec.at_most("gap_violations", h, static_cast<double>(cen.gap_violations.size()), 0.0);
    rec.at_most("band_deviation", h, band_deviation(found.resonances, h), 0.02);
  }
  rep.artifacts.push_back(res_t);
  rep.artifacts.push_back(cen_t);

  std::set<double> distinct(c.h_values.begin(), c.h_values.end());
  if (distinct.size() >= 4) {
    const auto slope = weyl::weyl_slope(all);
    const int n = make_model(c, c.h_values.front()).dim_n;
    rec.near("weyl_slope", no_h(), slope.slope, n - 1.0, 0.05);
    for (const auto& w : slope.warnings) rep.meta_extra["warnings"].push_back(w);
    // The o(1) remainder shrinks: error at the smallest h does not exceed the largest-h error.
    const auto& rows = slope.per_h;
    rec.at_most("relative_error_trend", no_h(), rows.back().relative_error, rows.front().relative_error);
  }
}

std::vector<scaling::DeformedOperator> mode_stack(const ExperimentConfig& c, const warped::SolverSettings& settings,
                                                  double h) {
  const auto m = make_model(c, h);
  const double lo = std::max(0.0, c.band.re_window.first - 3.0 * h) / h;
  const double hi = (c.band.re_window.second + 3.0 * h) / h;
  std::vector<scaling::DeformedOperator> stack;
  for (int k = 0;; ++k) {
    const auto mode = m.cross_section.mode(k);
    const double s = std::sqrt(m.scaled_lambda(mode));
    if (s > hi) break;
    if (s < lo) continue;
    const auto b = warped::effective_barrier(m, m.scaled_lambda(mode));
    stack.push_back(warped::mode_operator(m, b.V0, settings.theta, settings));
  }
  return stack;
}

void exp_gaps(const ExperimentConfig& c, unsigned threads, RunReport& rep, Recorder& rec) {
  const auto settings = make_settings(c, threads);
  rep.meta_extra["profile"] =
      scaling::build_profile(settings.theta, settings.R, settings.grid_max, settings.N).description();
  weyl::GapScanOptions opts;
  opts.step_fraction = c.gaps.step_fraction;
  opts.threads = threads;
  const auto spec = band_spec(c, c.h_values.front());
  const auto scan = weyl::gap_scan([&](double h) { return mode_stack(c, settings, h); }, spec, c.h_values,
                                   c.gaps.lines, opts);
  Table t;
  t.name = "gapscan";
  t.columns = {"re_omega", "im_omega", "norm", "h", "flagged"};
  for (const auto& g : scan.samples) t.add({g.omega.real(), g.omega.imag(), g.norm, g.h, static_cast<long>(g.flagged)});
  rep.artifacts.push_back(t);
  for (const auto& f : scan.fits) {
    const std::string tag = "(line=" + format_cell(f.line) + ")";
    for (const auto& [h, m] : f.max_norm) rec.info("max_norm" + tag, h, m);
    rec.at_most("flagged" + tag, no_h(), f.flagged, 0.0);
    if (std::isfinite(f.slope))
      rec.at_most("norm_slope" + tag, no_h(), f.slope, 2.3);
    else
      rec.info("norm_slope" + tag, no_h(), f.slope);
  }
}

// Model-case identities on a 257 x 257 grid with spacing 1/16.
void exp_model_checks(const ExperimentConfig& c, unsigned threads, RunReport& rep, Recorder& rec) {
  using model::GridFunction;
  const int n = 257;
  const double dx = 1.0 / 16.0;
  const double h = c.h_values.front();
  const int trials = 100;

  // Gaussian-windowed trigonometric polynomials with random frequencies.
  std::mt19937_64 rng(c.seed);
  std::normal_distribution<double> N01;
  struct Params {
    double a[6], b[6], s[6];
    cplx w[6];
  };
  std::vector<Params> params(trials);
  for (auto& p : params)
    for (int m = 0; m < 6; ++m) {
      p.a[m] = 2.0 * N01(rng);
      p.b[m] = 2.0 * N01(rng);
      p.s[m] = N01(rng);
      p.w[m] = cplx(N01(rng), N01(rng));
    }
  auto make = [&](const Params& p) {
    GridFunction f = GridFunction::zeros(2, n, dx, n, dx, h);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const double x = f.xp[i], y = f.xn[j];
        cplx v = 0.0;
        for (int m = 0; m < 6; ++m) v += p.w[m] * std::exp(cplx(0.0, p.a[m] * x + p.b[m] * (y - p.s[m])));
        f.at(i, j) = v * std::exp(-(x * x + (y - 0.3) * (y - 0.3)) / 2.0);
      }
    return f;
  };

  struct TrialOut {
    long idem = 0, comm = 0, xi_bad = 0;
    double xi_ulps = 0, ratio = 0, annih = 0, xn_annih = 0;
  };
  std::vector<TrialOut> outs(trials);
  parallel_for(trials, threads, [&](std::size_t k) {
    const GridFunction f = make(params[k]);
    TrialOut o;
    const GridFunction p = model::model_projector(f);
    const GridFunction pp = model::model_projector(p);
    for (std::size_t i = 0; i < p.values.size(); ++i) o.idem += p.values[i] != pp.values[i];
    const GridFunction up = model::model_propagator(p, 0.7);
    const GridFunction pu = model::model_projector(model::model_propagator(f, 0.7));
    for (std::size_t i = 0; i < up.values.size(); ++i) o.comm += up.values[i] != pu.values[i];
    o.xi_bad = model::xi_identity_mismatches(f);
    // Distance in units in the last place where the identity is not bitwise.
    const GridFunction lhs = model::times_xn(model::model_xi(f));
    const GridFunction rhs = model::subtract(f, p);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (j == f.center()) continue;
        for (int part = 0; part < 2; ++part) {
          const double u = part ? lhs.at(i, j).imag() : lhs.at(i, j).real();
          const double v = part ? rhs.at(i, j).imag() : rhs.at(i, j).real();
          if (u == v) continue;
          const double ulp = std::abs(std::nextafter(v, 2 * v + 1.0) - v);
          o.xi_ulps = std::max(o.xi_ulps, std::abs(u - v) / ulp);
        }
      }
    o.ratio = model::l2_norm(model::model_xi(f)) / model::h1_norm(f);
    o.annih = model::annihilation_defect(f);
    const GridFunction pxn = model::model_projector(model::times_xn(f));
    for (const auto& v : pxn.values) o.xn_annih = std::max(o.xn_annih, std::abs(v));
    outs[k] = o;
  });
  TrialOut worst;
  for (const auto& o : outs) {
    worst.idem += o.idem;
    worst.comm += o.comm;
    worst.xi_bad += o.xi_bad;
    worst.xi_ulps = std::max(worst.xi_ulps, o.xi_ulps);
    worst.ratio = std::max(worst.ratio, o.ratio);
    worst.annih = std::max(worst.annih, o.annih);
    worst.xn_annih = std::max(worst.xn_annih, o.xn_annih);
  }
  rec.at_most("projector_idempotent_mismatches", no_h(), worst.idem, 0.0);
  rec.at_most("propagator_commutation_mismatches", no_h(), worst.comm, 0.0);
  rec.at_most("xi_identity_mismatches", no_h(), worst.xi_bad, 0.0);
  rec.info("xi_identity_max_ulps", no_h(), worst.xi_ulps);
  rec.at_most("xi_bound_ratio", no_h(), worst.ratio, 2.0);
  rec.at_most("annihilation_hdxn_projector", h, worst.annih, 1e-12);
  rec.at_most("annihilation_projector_xn", no_h(), worst.xn_annih, 1e-12);

  // Smooth f: isometry of U(t), image identity and kernel decay.
  GridFunction g = GridFunction::zeros(2, n, dx, n, dx, h);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double x = g.xp[i], y = g.xn[j];
      g.at(i, j) = std::exp(-(x * x + (y - 0.3) * (y - 0.3)) / 2.0) * cplx(1.0 + 0.5 * x, y);
    }
  const double iso = std::abs(model::l2_norm(model::model_propagator(g, 0.5)) / model::l2_norm(g) - 1.0);
  rec.at_most("propagator_isometry", no_h(), iso, 1e-6);
  const auto decay = model::decay_estimates(
      g, [](double xp, double xn) { return std::exp(-(xp * xp + xn * xn) / 2.0); }, {0.5, 1.0, 2.0});
  for (const auto& r : decay.image_identity)
    rec.at_most("image_identity(t=" + format_cell(r.t) + ")", no_h(), r.relative_error, 1e-5);
  rec.at_most("kernel_decay_rate", h, decay.kernel_rate, -0.95);

  // Quantization in one dimension: N = 4097, dx = 1/160.
  const auto gauss = [](double x, double xi) { return cplx(std::exp(-x * x - xi * xi)); };
  const std::vector<double> hs{0.2, 0.1, 0.05, 0.025};
  std::vector<double> norms(hs.size());
  parallel_for(hs.size(), threads, [&](std::size_t i) {
    const GridFunction u = GridFunction::zeros(1, 1, 1.0, 4097, 1.0 / 160.0, hs[i]);
    norms[i] = model::LambdaQuantization(gauss, u).operator_norm();
  });
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < hs.size(); ++i) {
    rec.info("quantization_norm", hs[i], norms[i]);
    const double X = std::log(hs[i]), Y = std::log(norms[i]);
    sx += X;
    sy += Y;
    sxx += X * X;
    sxy += X * Y;
  }
  const double m = static_cast<double>(hs.size());
  rec.near("quantization_norm_slope", no_h(), (m * sxy - sx * sy) / (m * sxx - sx * sx), -0.5, 0.1);

  {
    // Oscillatory testing at a DFT frequency.
    const double hq = 0.05;
    GridFunction u = GridFunction::zeros(1, 1, 1.0, 4097, 1.0 / 160.0, hq);
    const double k = std::round(0.7 * u.n2() * u.dxn() / (2.0 * std::numbers::pi * hq));
    const double xi0 = 2.0 * std::numbers::pi * hq * k / (u.n2() * u.dxn());
    for (int j = 0; j < u.n2(); ++j) u.values[j] = std::exp(cplx(0.0, u.xn[j] * xi0 / hq));
    const auto v = model::lambda_quantize(gauss, u);
    double err = 0.0;
    for (int j = 0; j < u.n2(); ++j) err = std::max(err, std::abs(v.values[j] - gauss(u.xn[j], xi0)));
    rec.at_most("oscillatory_test", hq, err, 1e-6);
  }
  {
    // Symbol 1 reproduces the projector u -> u(0).
    const double hq = 0.05;
    GridFunction u = GridFunction::zeros(1, 1, 1.0, 4097, 1.0 / 160.0, hq);
    for (int j = 0; j < u.n2(); ++j) u.values[j] = std::exp(-4.0 * u.xn[j] * u.xn[j]) * cplx(1.0, u.xn[j]);
    model::QuantizationOptions o;
    o.require_decay = false;
    const auto v = model::lambda_quantize([](double, double) { return cplx(1.0); }, u, o);
    const cplx u0 = u.values[u.center()];
    double err = 0.0;
    for (const auto& z : v.values) err = std::max(err, std::abs(z - u0));
    rec.at_most("unit_symbol_projector", hq, err, 1e-12);
  }
  rep.meta_extra["model_grid"] = {{"n", n}, {"dx", dx}, {"trials", trials}, {"quantization_n", 4097},
                                  {"quantization_dx", 1.0 / 160.0}};
}

std::string eigen_version() {
  return std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
         std::to_string(EIGEN_MINOR_VERSION);
}

nlohmann::json thresholds() {
  return {{"flow_tolerance", 1e-10},
          {"rate_residual_fraction", 0.1},
          {"extraction",
           {{"sector_margin", 0.05}, {"drift_abs", 1e-4}, {"drift_rel", 1e-3}, {"separation_required", 10.0}}},
          {"resolvent_relative_tolerance", 1e-6},
          {"gap_collision_norm", 1e12},
          {"band_deviation", 0.02},
          {"transport_residual", 1e-4}};
}

}  // namespace

RunReport new_report() {
  RunReport r;
  r.results.name = "results";
  r.results.columns = {"experiment", "quantity", "h", "value", "reference", "tolerance", "status"};
  return r;
}

RunReport run_experiment(const ExperimentConfig& config, unsigned threads) {
  RunReport rep = new_report();
  Recorder rec{rep, to_string(config.experiment)};
  threads = std::max(1u, threads);
  try {
    switch (config.experiment) {
      case Experiment::rates: exp_rates(config, threads, rep, rec); break;
      case Experiment::resonances: exp_resonances(config, threads, rep, rec); break;
      case Experiment::weyl: exp_weyl(config, threads, rep, rec); break;
      case Experiment::gaps: exp_gaps(config, threads, rep, rec); break;
      case Experiment::model_checks: exp_model_checks(config, threads, rep, rec); break;
      case Experiment::transport: exp_transport(config, threads, rep, rec); break;
      case Experiment::perturbation: exp_perturbation(config, threads, rep, rec); break;
    }
  } catch (const Error& e) {
    rep.error = true;
    rep.error_kind = e.kind();
    rep.error_message = e.what();
  } catch (const std::exception& e) {
    rep.error = true;
    rep.error_kind = "internal";
    rep.error_message = e.what();
  }
  return rep;
}

int run_and_emit(const ExperimentConfig& config, const std::string& dir, unsigned threads) {
  const RunReport rep = run_experiment(config, threads);
  const bool mirror = config.wants("json");
  nlohmann::json meta;
  meta["config"] = to_json(config);
  meta["config"]["output"]["directory"] = dir;
  meta["seed"] = config.seed;
  meta["thresholds"] = thresholds();
  meta["versions"] = {{"trapres", kVersion},
                      {"schema_version", kSchemaVersion},
                      {"eigen", eigen_version()},
                      {"fftw", std::string(fftw_version)},
                      {"compiler", __VERSION__}};
  meta["details"] = rep.meta_extra;
  meta["partial"] = rep.error;
  meta["status"] = rep.error ? "error" : (rep.failed_check ? "check-failed" : "ok");
  std::vector<std::string> files{"results.csv"};
  for (const auto& t : rep.artifacts) files.push_back(t.name + ".csv");
  meta["artifacts"] = files;
  if (rep.error) meta["error"] = {{"kind", rep.error_kind}, {"message", rep.error_message}};

  int status = rep.error ? 3 : (rep.failed_check ? 1 : 0);
  try {
    for (const auto& t : rep.artifacts) write_table(dir, t, mirror);
    write_table(dir, rep.results, mirror);
    if (rep.error) write_text((std::filesystem::path(dir) / "PARTIAL").string(), rep.error_message + "\n");
  } catch (const Error& e) {
    meta["status"] = "error";
    meta["error"] = {{"kind", e.kind()}, {"message", e.what()}};
    status = 3;
  }
  write_text((std::filesystem::path(dir) / "meta.json").string(), meta.dump(2) + "\n");
  return status;
}

void emit_config_error(const std::string& dir, const std::string& config_path, const std::string& message) {
  nlohmann::json meta;
  meta["status"] = "invalid-config";
  meta["config_path"] = config_path;
  meta["error"] = {{"kind", "config"}, {"message", message}};
  meta["versions"] = {{"trapres", kVersion}, {"schema_version", kSchemaVersion}};
  meta["partial"] = true;
  write_text((std::filesystem::path(dir) / "meta.json").string(), meta.dump(2) + "\n");
}

}  // namespace trapres::cli
