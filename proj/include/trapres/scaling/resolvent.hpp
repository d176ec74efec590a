#pragma once

#include "trapres/scaling/deformed_operator.hpp"

#include <vector>

namespace trapres::scaling {

struct ResolventOptions {
  double relative_tolerance = 1e-6;
  int max_iterations = 300;
};

/// 1/sigma_min(A - omega^2) by Lanczos on ((A - omega^2)^H (A - omega^2))^{-1}
/// with a pivoted tridiagonal factorisation. Throws PreconditionError when the
/// shifted matrix is singular and NormUncertainError on stagnation.
double resolvent_norm(const DeformedOperator& op, cplx omega, const ResolventOptions& opts = {});

/// Block-diagonal operator: maximum over the blocks.
double resolvent_norm(const std::vector<DeformedOperator>& stack, cplx omega, const ResolventOptions& opts = {});

}  // namespace trapres::scaling
