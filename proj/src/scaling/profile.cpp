#include "trapres/scaling/profile.hpp"

#include "trapres/errors.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace trapres::scaling {

double smoothstep(double t) { return t * t * t * (10.0 + t * (-15.0 + 6.0 * t)); }

namespace {
double smoothstep_d1(double t) { return 30.0 * t * t * (1.0 + t * (-2.0 + t)); }
double smoothstep_d2(double t) { return 60.0 * t * (1.0 + t * (-3.0 + 2.0 * t)); }
}  // namespace

ProfileValue profile_at(double theta, double R, double r) {
  ProfileValue v;
  const double a = std::abs(r);
  if (a <= R || theta == 0.0) return v;
  const double T = std::tan(theta);
  const double sg = r < 0 ? -1.0 : 1.0;
  if (a >= 2.0 * R) {
    v.f = r * T;
    v.fp = T;
    return v;
  }
  const double t = (a - R) / R;
  const double s = smoothstep(t), s1 = smoothstep_d1(t), s2 = smoothstep_d2(t);
  v.f = sg * a * T * s;
  v.fp = T * (s + a / R * s1);
  v.fpp = sg * T * (2.0 * s1 / R + a * s2 / (R * R));
  return v;
}

std::string ScalingProfile::description() const {
  std::ostringstream os;
  os.precision(17);
  os << "f(r) = r tan(theta) s((|r|-R)/R), s(t) = 6t^5-15t^4+10t^3 clamped to [0,1]; theta=" << theta
     << " R=" << R << " grid_max=" << grid_max << " N=" << grid.size()
     << (kind == GridKind::line ? " line" : " radial");
  return os.str();
}

namespace {

ScalingProfile make(double theta, double R, double grid_max, int N, GridKind kind) {
  ScalingProfile p;
  p.theta = theta;
  p.R = R;
  p.grid_max = grid_max;
  p.kind = kind;
  const double lo = kind == GridKind::line ? -grid_max : 0.0;
  p.dr = (grid_max - lo) / (N + 1);
  p.grid.resize(N);
  p.f.resize(N);
  p.f_prime.resize(N);
  p.f_double_prime.resize(N);
  for (int j = 0; j < N; ++j) {
    // Symmetric construction keeps the line grid exactly odd about 0.
    const double r = kind == GridKind::line ? (2.0 * (j + 1) - (N + 1)) * (grid_max / (N + 1))
                                            : (j + 1) * p.dr;
    const ProfileValue v = profile_at(theta, R, r);
    p.grid[j] = r;
    p.f[j] = v.f;
    p.f_prime[j] = v.fp;
    p.f_double_prime[j] = v.fpp;
  }
  return p;
}

void check_geometry(double R, double grid_max, int N) {
  if (!(R > 0)) throw DomainError("build_profile: R must be positive");
  if (!(grid_max >= 3.0 * R)) throw DomainError("build_profile: grid_max must be at least 3R");
  if (N < 200) throw DomainError("build_profile: N must be at least 200");
}

}  // namespace

ScalingProfile build_profile(double theta, double R, double grid_max, int N, GridKind kind) {
  if (!(theta > 0 && theta < std::numbers::pi / 2)) throw DomainError("build_profile: theta must lie in (0, pi/2)");
  check_geometry(R, grid_max, N);
  return make(theta, R, grid_max, N, kind);
}

ScalingProfile undeformed_profile(double R, double grid_max, int N, GridKind kind) {
  check_geometry(R, grid_max, N);
  return make(0.0, R, grid_max, N, kind);
}

}  // namespace trapres::scaling
