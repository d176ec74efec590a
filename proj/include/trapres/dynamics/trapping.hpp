#pragma once

#include "trapres/dynamics/flow.hpp"

#include <limits>
#include <string>
#include <vector>

namespace trapres::dynamics {

/// trapped_forward is Gamma_-, trapped_backward is Gamma_+, trapped_both is K.
enum class Trapping { trapped_forward, trapped_backward, trapped_both, escaped };

std::string to_string(Trapping t);

struct TrappedSample {
  PhasePoint point;
  Trapping classification = Trapping::escaped;
  double horizon = 0.0;
  double forward_escape_time = std::numeric_limits<double>::infinity();
  double backward_escape_time = std::numeric_limits<double>::infinity();
  int forward_side = 0;
  int backward_side = 0;
};

TrappedSample classify_trapping(const HamiltonianSystem& sys, const PhasePoint& point,
                                double horizon);

/// Moves `point` onto {p = energy} by scaling its momentum, xi -> s xi with
/// s >= 0 found by bracketed root finding. A zero momentum is replaced by the
/// first unit covector. Throws DomainError when no root is bracketed.
PhasePoint project_to_shell(const HamiltonianSystem& sys, const PhasePoint& point, double energy);

/// Bisects along the segments joining consecutive seeds. A segment is refined
/// when its endpoints escape forward (or backward) on opposite sides, or when
/// the sign of forward minus backward escape time differs. Returns the refined
/// points that survive `horizon` both ways.
std::vector<TrappedSample> find_trapped_set(const HamiltonianSystem& sys, double energy,
                                            const std::vector<PhasePoint>& seeds, double horizon);

}  // namespace trapres::dynamics
