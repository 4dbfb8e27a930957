#pragma once

#include <vector>

#include "dio/interval.hpp"
#include "dio/observer.hpp"
#include "dio/stability.hpp"
#include "dio/types.hpp"

namespace dio {

/// Collective framer error [x - lo^1; up^1 - x; ...; x - lo^N; up^N - x];
/// every entry is nonnegative whenever the framers contain the true state.
Vector collective_error(const std::vector<IntervalVector>& framers, const Vector& x_true);

/// Additive noise contribution to the pre-network collective error at one
/// step. W collects the process-noise part through the T B splits; V the
/// measurement-noise part through the L D and Gamma D splits. Because the
/// local update consumes y_k through L and y_{k+1} through Gamma, V pairs
/// the L splits with v_k and the Gamma splits with v_{k+1}.
struct NoiseInjection {
  Vector w_part;  // length 2Nn
  Vector v_part;  // length 2Nn

  Vector total() const { return w_part + v_part; }
};

/// Throws InvalidInputError when a realized noise falls outside its bounds.
NoiseInjection noise_injection(const std::vector<ObserverConfig>& configs,
                               const IntervalVector& w_bounds,
                               const std::vector<IntervalVector>& v_bounds, const Vector& w_k,
                               const std::vector<Vector>& v_k, const std::vector<Vector>& v_k1);

/// Comparison system driven by a fixed selection:
///   e~_{k+1} = (H* Ahat) e~_k + H* (W_k + V_k),  e~_0 = e_0.
/// Dominates the simulated collective error element-wise at every step.
/// noise[k] supplies the injection used between steps k and k+1; the
/// returned sequence has noise.size() + 1 entries.
std::vector<Vector> comparison_trajectory(const SelectionAssignment& h_star, const Matrix& ahat,
                                          const Vector& e0,
                                          const std::vector<NoiseInjection>& noise);

/// Noise vector selected by H: entry (i, s, side) of H (W + V).
Vector apply_selection_to_vector(const SelectionAssignment& h, const Vector& stacked);

}  // namespace dio
