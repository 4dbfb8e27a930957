#pragma once

#include <vector>

#include "dio/interval.hpp"
#include "dio/types.hpp"

namespace dio {

/// Discrete-time LTI target:
///   x_{k+1} = A x_k + B w_k
///   y^i_k   = C^i x_k + D^i v^i_k
/// with process noise w in w_bounds, per-agent measurement noise v^i in
/// v_bounds[i], and the initial state in x0_bounds.
struct PlantModel {
  Matrix A;
  Matrix B;
  std::vector<Matrix> C;
  std::vector<Matrix> D;
  IntervalVector w_bounds;
  std::vector<IntervalVector> v_bounds;
  IntervalVector x0_bounds;

  int state_dim() const { return static_cast<int>(A.rows()); }
  int agent_count() const { return static_cast<int>(C.size()); }
  int measurement_dim(int agent) const { return static_cast<int>(C[agent].rows()); }

  /// Shape and finiteness checks across all blocks. Throws InvalidInputError.
  void validate() const;
};

}  // namespace dio
