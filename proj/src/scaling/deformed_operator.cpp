#include "trapres/scaling/deformed_operator.hpp"

#include "trapres/errors.hpp"

#include <cmath>

namespace trapres::scaling {

Potential Potential::zero() {
  Potential p;
  p.real = [](double) { return 0.0; };
  p.analytic = [](cplx) { return cplx(0.0); };
  return p;
}

Potential Potential::sech2(double V0) {
  Potential p;
  p.real = [V0](double r) {
    const double c = std::cosh(r);
    return V0 / (c * c);
  };
  p.analytic = [V0](cplx z) {
    const cplx c = std::cosh(z);
    return V0 / (c * c);
  };
  return p;
}

CMat DeformedOperator::dense() const {
  const int n = size();
  CMat A = CMat::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    A(j, j) = diag[j];
    if (j > 0) A(j, j - 1) = sub[j - 1];
    if (j + 1 < n) A(j, j + 1) = sup[j];
  }
  return A;
}

CVec DeformedOperator::apply(const CVec& v) const {
  const int n = size();
  CVec out(n);
  for (int j = 0; j < n; ++j) {
    cplx s = diag[j] * v[j];
    if (j > 0) s += sub[j - 1] * v[j - 1];
    if (j + 1 < n) s += sup[j] * v[j + 1];
    out[j] = s;
  }
  return out;
}

double DeformedOperator::frobenius_norm() const {
  return std::sqrt(diag.squaredNorm() + sub.squaredNorm() + sup.squaredNorm());
}

DeformedOperator assemble_deformed(const ScalingProfile& profile, const Potential& potential, double h,
                                   double angular_coefficient, int dimension_n) {
  if (!(h > 0)) throw PreconditionError("assemble_deformed: h must be positive");
  if (!potential.real) throw PreconditionError("assemble_deformed: potential callback missing");
  const bool line = profile.kind == GridKind::line;
  if (line && angular_coefficient != 0.0)
    throw PreconditionError("assemble_deformed: line grids take the angular term through the potential");
  if (!line && dimension_n < 1) throw PreconditionError("assemble_deformed: dimension_n must be >= 1");

  const int n = profile.size();
  DeformedOperator op;
  op.profile = profile;
  op.h = h;
  op.angular_coefficient = angular_coefficient;
  op.dimension_n = line ? 1 : dimension_n;
  op.analytic_potential = static_cast<bool>(potential.analytic);
  op.potential.resize(n);
  for (int j = 0; j < n; ++j) op.potential[j] = potential.real(profile.grid[j]);
  if (!op.analytic_potential) {
    for (int j = 0; j < n; ++j)
      if (std::abs(profile.grid[j]) >= profile.R && std::abs(op.potential[j]) > 1e-14)
        throw PreconditionError("assemble_deformed: potential is not supported inside |r| < R");
  }

  op.sub = CVec::Zero(std::max(n - 1, 0));
  op.sup = CVec::Zero(std::max(n - 1, 0));
  op.diag = CVec::Zero(n);
  const double dr = profile.dr;
  const double h2 = h * h;
  const double inv_dr2 = 1.0 / (dr * dr);
  const cplx I(0.0, 1.0);
  auto a_at = [&](double r) { return 1.0 / (1.0 + I * profile.at(r).fp); };

  for (int j = 0; j < n; ++j) {
    const double r = profile.grid[j];
    const cplx aj = 1.0 / (1.0 + I * profile.f_prime[j]);
    const cplx am = a_at(r - 0.5 * dr);
    const cplx ap = a_at(r + 0.5 * dr);
    const cplx z(r, profile.f[j]);
    cplx d = h2 * aj * (am + ap) * inv_dr2;
    cplx lo = -h2 * aj * am * inv_dr2;
    cplx hi = -h2 * aj * ap * inv_dr2;
    if (!line) {
      const cplx c1 = -static_cast<double>(dimension_n - 1) * h2 * aj / z / (2.0 * dr);
      hi += c1;
      lo -= c1;
      d += angular_coefficient * h2 / (z * z);
    }
    d += op.analytic_potential ? potential.analytic(z) : cplx(op.potential[j]);
    op.diag[j] = d;
    if (j > 0) op.sub[j - 1] = lo;
    if (j + 1 < n) op.sup[j] = hi;
  }
  return op;
}

}  // namespace trapres::scaling
