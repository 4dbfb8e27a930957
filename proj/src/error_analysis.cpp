#include "dio/error_analysis.hpp"

#include <string>

namespace dio {

Vector collective_error(const std::vector<IntervalVector>& framers, const Vector& x_true) {
  if (framers.empty()) {
    throw InvalidInputError("collective_error: no framers");
  }
  const Index n = x_true.size();
  const int nagents = static_cast<int>(framers.size());
  Vector e(2 * n * nagents);
  for (int i = 0; i < nagents; ++i) {
    if (framers[i].size() != n) {
      throw InvalidInputError("collective_error: framer length mismatch at agent " +
                              std::to_string(i));
    }
    e.segment(2 * n * i, n) = x_true - framers[i].lower();
    e.segment(2 * n * i + n, n) = framers[i].upper() - x_true;
  }
  return e;
}

NoiseInjection noise_injection(const std::vector<ObserverConfig>& configs,
                               const IntervalVector& w_bounds,
                               const std::vector<IntervalVector>& v_bounds, const Vector& w_k,
                               const std::vector<Vector>& v_k, const std::vector<Vector>& v_k1) {
  const int nagents = static_cast<int>(configs.size());
  if (static_cast<int>(v_bounds.size()) != nagents || static_cast<int>(v_k.size()) != nagents ||
      static_cast<int>(v_k1.size()) != nagents) {
    throw InvalidInputError("noise_injection: per-agent input count mismatch");
  }
  if (!w_bounds.contains(w_k)) {
    throw InvalidInputError("noise_injection: process noise outside its bounds");
  }
  const Vector w_slack_low = w_k - w_bounds.lower();   // >= 0
  const Vector w_slack_high = w_bounds.upper() - w_k;  // >= 0

  const Index n = configs[0].gains.A_tilde.rows();
  NoiseInjection inj;
  inj.w_part = Vector::Zero(2 * n * nagents);
  inj.v_part = Vector::Zero(2 * n * nagents);
  for (int i = 0; i < nagents; ++i) {
    if (!v_bounds[i].contains(v_k[i]) || !v_bounds[i].contains(v_k1[i])) {
      throw InvalidInputError("noise_injection: measurement noise outside its bounds at agent " +
                              std::to_string(i));
    }
    const ObserverConfig& c = configs[i];
    const Vector v_low_k = v_k[i] - v_bounds[i].lower();
    const Vector v_high_k = v_bounds[i].upper() - v_k[i];
    const Vector v_low_k1 = v_k1[i] - v_bounds[i].lower();
    const Vector v_high_k1 = v_bounds[i].upper() - v_k1[i];

    inj.w_part.segment(2 * n * i, n) =
        c.tb_split.plus * w_slack_low + c.tb_split.minus * w_slack_high;
    inj.w_part.segment(2 * n * i + n, n) =
        c.tb_split.minus * w_slack_low + c.tb_split.plus * w_slack_high;

    // v enters the observer negated, so the plus splits pair with the upper
    // slack on the lower-error block and vice versa.
    inj.v_part.segment(2 * n * i, n) = c.ld_split.plus * v_high_k + c.ld_split.minus * v_low_k +
                                       c.gd_split.plus * v_high_k1 +
                                       c.gd_split.minus * v_low_k1;
    inj.v_part.segment(2 * n * i + n, n) = c.ld_split.minus * v_high_k +
                                           c.ld_split.plus * v_low_k +
                                           c.gd_split.minus * v_high_k1 +
                                           c.gd_split.plus * v_low_k1;
  }
  return inj;
}

Vector apply_selection_to_vector(const SelectionAssignment& h, const Vector& stacked) {
  const int nagents = h.agent_count();
  const Index n = h.state_dim();
  if (stacked.size() != 2 * n * nagents) {
    throw InvalidInputError("apply_selection_to_vector: length mismatch");
  }
  Vector out(stacked.size());
  for (int i = 0; i < nagents; ++i) {
    for (Index s = 0; s < n; ++s) {
      out(lower_error_index(i, s, n)) =
          stacked(lower_error_index(h.source(i, s, BoundSide::lower), s, n));
      out(upper_error_index(i, s, n)) =
          stacked(upper_error_index(h.source(i, s, BoundSide::upper), s, n));
    }
  }
  return out;
}

std::vector<Vector> comparison_trajectory(const SelectionAssignment& h_star, const Matrix& ahat,
                                          const Vector& e0,
                                          const std::vector<NoiseInjection>& noise) {
  const Matrix selected = apply_selection(h_star, ahat);
  if (e0.size() != selected.rows()) {
    throw InvalidInputError("comparison_trajectory: initial error length mismatch");
  }
  std::vector<Vector> trajectory;
  trajectory.reserve(noise.size() + 1);
  trajectory.push_back(e0);
  for (const NoiseInjection& inj : noise) {
    trajectory.push_back(selected * trajectory.back() +
                         apply_selection_to_vector(h_star, inj.total()));
  }
  return trajectory;
}

}  // namespace dio
