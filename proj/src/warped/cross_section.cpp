#include "trapres/warped/cross_section.hpp"

#include "trapres/errors.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace trapres::warped {

namespace {
long binomial(long n, long k) {
  if (k < 0 || n < k) return 0;
  long r = 1;
  for (long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}
}  // namespace

long sphere_multiplicity(int k, int d) { return binomial(k + d, d) - binomial(k + d - 2, d); }

CrossSection CrossSection::circle(double L) {
  if (!(L > 0)) throw DomainError("CrossSection::circle: length must be positive");
  CrossSection c;
  c.kind_ = Kind::circle;
  c.L_ = L;
  return c;
}

CrossSection CrossSection::sphere(int d) {
  if (d < 1) throw DomainError("CrossSection::sphere: dimension must be >= 1");
  CrossSection c;
  c.kind_ = Kind::sphere;
  c.d_ = d;
  return c;
}

double CrossSection::volume() const {
  if (kind_ == Kind::circle) return L_;
  const double m = 0.5 * (d_ + 1);
  return 2.0 * std::pow(std::numbers::pi, m) / std::tgamma(m);
}

AngularMode CrossSection::mode(int k) const {
  if (k < 0) throw DomainError("CrossSection::mode: index must be >= 0");
  AngularMode m;
  m.index = k;
  if (kind_ == Kind::circle) {
    const double q = 2.0 * std::numbers::pi * k / L_;
    m.lambda = q * q;
    m.multiplicity = k == 0 ? 1 : 2;
  } else {
    m.lambda = static_cast<double>(k) * (k + d_ - 1);
    m.multiplicity = sphere_multiplicity(k, d_);
  }
  return m;
}

std::vector<AngularMode> CrossSection::modes_up_to(double lambda_max) const {
  std::vector<AngularMode> out;
  for (int k = 0;; ++k) {
    const AngularMode m = mode(k);
    if (m.lambda > lambda_max) break;
    out.push_back(m);
  }
  return out;
}

std::string CrossSection::describe() const {
  std::ostringstream os;
  os.precision(17);
  if (kind_ == Kind::circle) os << "circle(L=" << L_ << ")";
  else os << "sphere(d=" << d_ << ")";
  return os.str();
}

}  // namespace trapres::warped
