#include "dio/observer.hpp"

#include <sstream>
#include <string>

namespace dio {

ObserverConfig make_observer_config(const PlantModel& plant, int agent, AgentGains gains) {
  ObserverConfig config;
  config.a_tilde_split = sign_split(gains.A_tilde);
  config.tb_split = sign_split(gains.T * plant.B);
  config.ld_split = sign_split(gains.L * plant.D[agent]);
  config.gd_split = sign_split(gains.Gamma * plant.D[agent]);
  config.gains = std::move(gains);
  return config;
}

std::vector<ObserverConfig> make_observer_configs(const PlantModel& plant,
                                                  const std::vector<AgentGains>& gains) {
  if (static_cast<int>(gains.size()) != plant.agent_count()) {
    throw InvalidInputError("make_observer_configs: one gain set per agent required");
  }
  std::vector<ObserverConfig> configs;
  configs.reserve(gains.size());
  for (int i = 0; i < plant.agent_count(); ++i) {
    configs.push_back(make_observer_config(plant, i, gains[i]));
  }
  return configs;
}

IntervalVector local_update(const ObserverConfig& config, const IntervalVector& framer,
                            const Vector& y_k, const Vector& y_k1,
                            const IntervalVector& w_bounds, const IntervalVector& v_bounds) {
  const AgentGains& g = config.gains;
  const Vector measurement_term = g.L * y_k + g.Gamma * y_k1;

  // v enters the dynamics as -(L D) v_k - (Gamma D) v_{k+1}, so the lower
  // bound takes the minus parts on v_lower and the plus parts on v_upper.
  const Matrix v_minus = config.ld_split.minus + config.gd_split.minus;
  const Matrix v_plus = config.ld_split.plus + config.gd_split.plus;

  Vector lower = config.a_tilde_split.plus * framer.lower() -
                 config.a_tilde_split.minus * framer.upper() +
                 config.tb_split.plus * w_bounds.lower() -
                 config.tb_split.minus * w_bounds.upper() + measurement_term +
                 v_minus * v_bounds.lower() - v_plus * v_bounds.upper();
  Vector upper = config.a_tilde_split.plus * framer.upper() -
                 config.a_tilde_split.minus * framer.lower() +
                 config.tb_split.plus * w_bounds.upper() -
                 config.tb_split.minus * w_bounds.lower() + measurement_term +
                 v_minus * v_bounds.upper() - v_plus * v_bounds.lower();

  for (Index s = 0; s < lower.size(); ++s) {
    if (lower(s) > upper(s)) {
      std::ostringstream msg;
      msg << "local_update: inverted framer at state " << s
          << "; gains and bounds are inconsistent";
      throw InternalError(msg.str());
    }
  }
  return {std::move(lower), std::move(upper)};
}

std::vector<IntervalVector> network_round(const std::vector<IntervalVector>& framers,
                                          const Digraph& graph) {
  if (static_cast<int>(framers.size()) != graph.node_count()) {
    throw InvalidInputError("network_round: one framer per node required");
  }
  std::vector<IntervalVector> updated;
  updated.reserve(framers.size());
  for (int i = 0; i < graph.node_count(); ++i) {
    Vector lo = framers[i].lower();
    Vector hi = framers[i].upper();
    for (int j : graph.neighbors(i)) {
      lo = lo.cwiseMax(framers[j].lower());
      hi = hi.cwiseMin(framers[j].upper());
    }
    for (Index s = 0; s < lo.size(); ++s) {
      if (lo(s) > hi(s)) {
        std::ostringstream msg;
        msg << "network_round: empty intersection at agent " << i << ", state " << s;
        throw EmptyIntersectionError(msg.str());
      }
    }
    updated.emplace_back(std::move(lo), std::move(hi));
  }
  return updated;
}

DioStepResult dio_step(const std::vector<ObserverConfig>& configs, const PlantModel& plant,
                       const Digraph& graph, int rounds,
                       const std::vector<IntervalVector>& framers,
                       const std::vector<Vector>& y_k, const std::vector<Vector>& y_k1) {
  const int nagents = plant.agent_count();
  if (static_cast<int>(configs.size()) != nagents ||
      static_cast<int>(framers.size()) != nagents ||
      static_cast<int>(y_k.size()) != nagents || static_cast<int>(y_k1.size()) != nagents) {
    throw InvalidInputError("dio_step: per-agent input count mismatch");
  }
  if (rounds < 0) {
    throw InvalidInputError("dio_step: negative round count");
  }

  std::vector<IntervalVector> pre_network;
  pre_network.reserve(nagents);
  for (int i = 0; i < nagents; ++i) {
    pre_network.push_back(
        local_update(configs[i], framers[i], y_k[i], y_k1[i], plant.w_bounds, plant.v_bounds[i]));
  }

  SelectionAssignment realized = realized_selection(pre_network, graph, rounds);

  std::vector<IntervalVector> current = pre_network;
  for (int t = 0; t < rounds; ++t) {
    current = network_round(current, graph);
  }
  return {std::move(current), std::move(realized)};
}

}  // namespace dio
