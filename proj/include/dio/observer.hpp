#pragma once

#include <vector>

#include "dio/graph.hpp"
#include "dio/interval.hpp"
#include "dio/model.hpp"
#include "dio/stability.hpp"
#include "dio/synthesis.hpp"

namespace dio {

/// Per-agent observer configuration with the time-invariant sign splits of
/// the local update precomputed once.
struct ObserverConfig {
  AgentGains gains;
  SignSplitMatrix a_tilde_split;   // closed-loop matrix
  SignSplitMatrix tb_split;        // T B
  SignSplitMatrix ld_split;        // L D
  SignSplitMatrix gd_split;        // Gamma D
};

ObserverConfig make_observer_config(const PlantModel& plant, int agent, AgentGains gains);
std::vector<ObserverConfig> make_observer_configs(const PlantModel& plant,
                                                  const std::vector<AgentGains>& gains);

struct AgentObserverState {
  int id = 0;
  IntervalVector framer;
  Vector last_measurement;
};

/// Propagation and measurement update: the framer for step k+1 before any
/// network exchange. Consumes both y_k and y_{k+1}; the measurement-noise
/// bounds enter with the sign pattern that keeps the output a valid
/// enclosure (the v terms appear negated in the equivalent system form, so
/// the lower framer uses the minus parts against v_lower and the plus parts
/// against v_upper). Throws InternalError if the result would be inverted,
/// which indicates inconsistent gains or bounds.
IntervalVector local_update(const ObserverConfig& config, const IntervalVector& framer,
                            const Vector& y_k, const Vector& y_k1,
                            const IntervalVector& w_bounds, const IntervalVector& v_bounds);

/// One synchronous exchange: every agent intersects its interval with all
/// neighbors' intervals (element-wise max of lowers, min of uppers).
std::vector<IntervalVector> network_round(const std::vector<IntervalVector>& framers,
                                          const Digraph& graph);

struct DioStepResult {
  std::vector<IntervalVector> framers;
  SelectionAssignment realized;  // selection over the d-hop neighborhood
};

/// Full observer step: local update at every agent, then d network rounds
/// (d = 0 degenerates to independent local observers). The realized
/// selection over the pre-network framers is recorded for diagnostics.
DioStepResult dio_step(const std::vector<ObserverConfig>& configs, const PlantModel& plant,
                       const Digraph& graph, int rounds,
                       const std::vector<IntervalVector>& framers,
                       const std::vector<Vector>& y_k, const std::vector<Vector>& y_k1);

}  // namespace dio
