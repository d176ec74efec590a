#pragma once

#include <string>
#include <vector>

namespace trapres::warped {

struct AngularMode {
  int index = 0;       // k
  double lambda = 0.0; // eigenvalue of the Laplacian on the unscaled cross-section
  long multiplicity = 1;
};

/// Compact cross-section with explicitly known Laplace spectrum.
class CrossSection {
public:
  enum class Kind { circle, sphere };

  /// Circle of length L: lambda_k = (2 pi k / L)^2, multiplicity 2 for k >= 1.
  static CrossSection circle(double L);
  /// Unit round sphere S^d: lambda_k = k(k + d - 1).
  static CrossSection sphere(int d);

  Kind kind() const { return kind_; }
  double length() const { return L_; }
  int dimension() const { return kind_ == Kind::circle ? 1 : d_; }
  /// Riemannian volume of the unscaled cross-section.
  double volume() const;

  AngularMode mode(int k) const;
  /// Distinct eigenvalues with lambda <= lambda_max, in increasing order.
  std::vector<AngularMode> modes_up_to(double lambda_max) const;
  std::string describe() const;

private:
  Kind kind_ = Kind::circle;
  double L_ = 0.0;
  int d_ = 1;
};

/// C(k+d, d) - C(k+d-2, d): dimension of degree-k spherical harmonics on S^d.
long sphere_multiplicity(int k, int d);

}  // namespace trapres::warped
