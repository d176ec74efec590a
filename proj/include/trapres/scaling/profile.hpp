#pragma once

#include <string>
#include <vector>

namespace trapres::scaling {

/// radial: nodes on (0, grid_max); line: nodes on (-grid_max, grid_max) with f odd.
enum class GridKind { radial, line };

struct ProfileValue {
  double f = 0.0;
  double fp = 0.0;
  double fpp = 0.0;
};

/// f(r) = r tan(theta) s(t), t = clamp((|r| - R)/R, 0, 1), s the quintic
/// smoothstep 6t^5 - 15t^4 + 10t^3; odd in r.
ProfileValue profile_at(double theta, double R, double r);

double smoothstep(double t);

struct ScalingProfile {
  double theta = 0.0;
  double R = 0.0;
  double grid_max = 0.0;
  GridKind kind = GridKind::line;
  double dr = 0.0;
  /// Interior nodes only; Dirichlet conditions sit one step beyond each end.
  std::vector<double> grid;
  std::vector<double> f;
  std::vector<double> f_prime;
  std::vector<double> f_double_prime;

  int size() const { return static_cast<int>(grid.size()); }
  ProfileValue at(double r) const { return profile_at(theta, R, r); }
  std::string description() const;
};

/// N interior nodes. Requires 0 < theta < pi/2, R > 0, grid_max >= 3R, N >= 200.
ScalingProfile build_profile(double theta, double R, double grid_max, int N, GridKind kind = GridKind::line);

/// Same geometry with theta = 0 (the undeformed operator); not subject to the
/// theta > 0 precondition.
ScalingProfile undeformed_profile(double R, double grid_max, int N, GridKind kind = GridKind::line);

}  // namespace trapres::scaling
