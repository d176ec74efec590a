#include "trapres/model/operators.hpp"

#include "trapres/errors.hpp"

#include <algorithm>
#include <cmath>

namespace trapres::model {

GridFunction model_projector(const GridFunction& f) {
  f.validate();
  GridFunction g = f;
  const int c = f.center();
  for (int i = 0; i < f.n1(); ++i) {
    const cplx v = f.at(i, c);
    for (int j = 0; j < f.n2(); ++j) g.at(i, j) = v;
  }
  return g;
}

namespace {

// Float q near d/x with fl(x * q) == d when one exists within 4 ulps.
double exact_quotient(double d, double x) {
  const double q0 = d / x;
  if (x * q0 == d || !std::isfinite(q0)) return q0;
  double up = q0, dn = q0;
  for (int k = 0; k < 4; ++k) {
    up = std::nextafter(up, HUGE_VAL);
    if (x * up == d) return up;
    dn = std::nextafter(dn, -HUGE_VAL);
    if (x * dn == d) return dn;
  }
  return q0;
}

}  // namespace

GridFunction model_xi(const GridFunction& f) {
  f.validate();
  GridFunction g = f.same_grid();
  const int c = f.center();
  const double dx = f.dxn();
  for (int i = 0; i < f.n1(); ++i) {
    const cplx f0 = f.at(i, c);
    for (int j = 0; j < f.n2(); ++j) {
      if (j == c) {
        g.at(i, j) = (f.at(i, c + 1) - f.at(i, c - 1)) / (2.0 * dx);
        continue;
      }
      const cplx d = f.at(i, j) - f0;
      const double x = f.xn[j];
      g.at(i, j) = cplx(exact_quotient(d.real(), x), exact_quotient(d.imag(), x));
    }
  }
  return g;
}

GridFunction model_propagator(const GridFunction& f, double t) {
  f.validate();
  if (!std::isfinite(t)) throw DomainError("model_propagator: t must be finite");
  if (t == 0.0) return f;
  if (t < 0.0) throw DomainError("model_propagator: dilation by e^{-t} > 1 leaves the grid");
  const int n = f.n2();
  if (n < 4) throw DomainError("model_propagator: need at least 4 x_n nodes");
  const int c = f.center();
  const double shrink = std::exp(-t);
  const double amp = std::exp(-0.5 * t);
  GridFunction g = f.same_grid();
  for (int j = 0; j < n; ++j) {
    // Grid coordinate of e^{-t} x_n; exact at the centre node.
    const double q = c + shrink * (j - c);
    const int jf = static_cast<int>(std::floor(q));
    const int b = std::clamp(jf - 1, 0, n - 4);
    const double s = q - (b + 1);
    const double w1 = s, w2 = s * (s - 1.0) / 2.0, w3 = s * (s - 1.0) * (s + 1.0) / 6.0;
    for (int i = 0; i < f.n1(); ++i) {
      const cplx fm = f.at(i, b), f0 = f.at(i, b + 1), fp = f.at(i, b + 2), fq = f.at(i, b + 3);
      // Difference form: every difference of a constant row is exactly zero.
      const cplx d1 = fp - f0;
      const cplx d2 = d1 - (f0 - fm);
      const cplx d3 = (fq - fm) - 3.0 * d1;
      g.at(i, j) = (f0 + w1 * d1 + w2 * d2 + w3 * d3) * amp;
    }
  }
  return g;
}

GridFunction times_xn(const GridFunction& f) {
  GridFunction g = f;
  for (int i = 0; i < f.n1(); ++i)
    for (int j = 0; j < f.n2(); ++j) g.at(i, j) = f.at(i, j) * f.xn[j];
  return g;
}

GridFunction subtract(const GridFunction& f, const GridFunction& g) {
  if (f.values.size() != g.values.size()) throw DomainError("subtract: grid mismatch");
  GridFunction r = f;
  for (std::size_t k = 0; k < r.values.size(); ++k) r.values[k] = f.values[k] - g.values[k];
  return r;
}

long xi_identity_mismatches(const GridFunction& f) {
  const GridFunction xi = model_xi(f);
  const GridFunction lhs = times_xn(xi);
  const GridFunction rhs = subtract(f, model_projector(f));
  long bad = 0;
  const int c = f.center();
  for (int i = 0; i < f.n1(); ++i)
    for (int j = 0; j < f.n2(); ++j) {
      if (j == c) continue;
      const cplx a = lhs.at(i, j), b = rhs.at(i, j);
      if (a.real() != b.real() || a.imag() != b.imag()) ++bad;
    }
  return bad;
}

double annihilation_defect(const GridFunction& f) {
  const GridFunction d = spectral_derivative(model_projector(f), 1);
  double m = 0.0;
  for (const auto& v : d.values) m = std::max(m, f.h * std::abs(v));
  return m;
}

DecayReport decay_estimates(const GridFunction& f, const Cutoff& cutoff, const std::vector<double>& t_values) {
  f.validate();
  DecayReport rep;
  const GridFunction pi = model_projector(f);
  const GridFunction rest = subtract(f, pi);
  const double denom = h1_semiclassical_norm(f);
  auto xp_at = [&](int i) { return f.dims == 2 ? f.xp[i] : 0.0; };

  double base = 0.0;
  for (int i = 0; i < f.n1(); ++i)
    for (int j = 0; j < f.n2(); ++j) {
      const double chi = cutoff(xp_at(i), f.xn[j]);
      base += chi * chi * std::norm(pi.at(i, j));
    }
  base *= f.cell();

  for (double t : t_values) {
    const GridFunction u = model_propagator(rest, t);
    double num = 0.0, lhs = 0.0;
    const double et = std::exp(t);
    for (int i = 0; i < f.n1(); ++i)
      for (int j = 0; j < f.n2(); ++j) {
        const double chi = cutoff(xp_at(i), f.xn[j]);
        num += chi * chi * std::norm(u.at(i, j));
        const double chit = cutoff(xp_at(i), et * f.xn[j]);
        lhs += chit * chit * std::norm(pi.at(i, j));
      }
    rep.kernel_decay.push_back({t, std::sqrt(num * f.cell()) / denom});
    ImageIdentityRow row;
    row.t = t;
    row.lhs = lhs * f.cell();
    row.rhs = std::exp(-t) * base;
    row.relative_error = row.rhs != 0.0 ? std::abs(row.lhs - row.rhs) / row.rhs : std::abs(row.lhs);
    rep.image_identity.push_back(row);
  }

  std::vector<double> ts, ys;
  for (const auto& r : rep.kernel_decay)
    if (r.ratio > 0) {
      ts.push_back(r.t);
      ys.push_back(std::log(r.ratio));
    }
  if (ts.size() >= 2) {
    double st = 0, sy = 0, stt = 0, sty = 0;
    const double n = static_cast<double>(ts.size());
    for (std::size_t k = 0; k < ts.size(); ++k) {
      st += ts[k];
      sy += ys[k];
      stt += ts[k] * ts[k];
      sty += ts[k] * ys[k];
    }
    rep.kernel_rate = (n * sty - st * sy) / (n * stt - st * st);
  }
  return rep;
}

}  // namespace trapres::model
