#pragma once

#include <algorithm>

namespace plexsim {

/// Reciprocal condition estimate of a partial-pivot LU. Eigen's estimator can
/// report a healthy value when a pivot is exactly zero, so the pivot spread is
/// folded in as well.
template <class LU>
double reciprocal_condition(const LU& lu) {
  const auto pivots = lu.matrixLU().diagonal().cwiseAbs().eval();
  const double hi = pivots.maxCoeff();
  if (!(hi > 0.0)) return 0.0;
  return std::min(lu.rcond(), pivots.minCoeff() / hi);
}

}  // namespace plexsim
