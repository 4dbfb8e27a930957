#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dio/error_analysis.hpp"
#include "dio/observer.hpp"
#include "dio/scenario.hpp"
#include "dio/stability.hpp"
#include "dio/synthesis.hpp"

namespace dio {

/// Plant rollout: states x_0..x_K, measurements y[k][i] for k = 0..K, and
/// the realized noises (w_0..w_{K-1}, v[k][i] for k = 0..K).
struct PlantTrajectory {
  std::vector<Vector> x;
  std::vector<std::vector<Vector>> y;
  std::vector<Vector> w;
  std::vector<std::vector<Vector>> v;
};

/// Deterministic for a fixed scenario and seed; uniform policies draw from
/// per-signal streams derived from the seed.
PlantTrajectory simulate_plant(const Scenario& scenario, std::uint64_t seed);

/// One observer run over a prepared trajectory.
struct ObserverRun {
  std::vector<std::vector<IntervalVector>> framers;  // [k][agent], k = 0..K
  std::vector<SelectionAssignment> realized;         // per step k -> k+1
  double correctness_rate = 1.0;  // fraction of (k, agent) containments
  int rounds = 0;
};

ObserverRun run_observer(const Scenario& scenario, const std::vector<ObserverConfig>& configs,
                         const PlantTrajectory& trajectory, int rounds);

struct StageTiming {
  double synthesize_ms = 0.0;
  double verify_ms = 0.0;
  double simulate_ms = 0.0;
};

struct PipelineOptions {
  std::optional<int> rounds_override;           // kAutoRounds allowed
  std::optional<std::uint64_t> seed_override;
  bool run_baseline = false;                    // additionally run d = 0
  std::string method = "auto";                  // auto | infnorm | lsr
  std::string out_dir;                          // CSV + manifest when nonempty
  std::string cache_path;                       // reuse synthesis results when present
};

struct WidthStats {
  Matrix max_width;       // agents x states, over all steps
  Matrix mean_width;      // agents x states
  Matrix final_width;     // agents x states, at k = K
  // (agent, state) pairs whose width exceeded 10x its initial value.
  std::vector<std::pair<int, int>> divergence_flags;
};

WidthStats width_stats(const std::vector<std::vector<IntervalVector>>& framers);

struct RunReport {
  std::vector<AgentGains> gains;
  CpdnResult cpdn;
  int rounds_used = 0;
  std::optional<StabilityCertificate> certificate;
  std::vector<std::string> warnings;

  double correctness_rate = 1.0;
  std::vector<double> per_agent_correctness;
  WidthStats widths;

  std::optional<double> baseline_correctness;
  std::optional<WidthStats> baseline_widths;

  StageTiming timing;
  std::uint64_t seed_used = 0;
};

/// synthesize -> verify -> simulate -> report. Stage failures are rethrown
/// with the stage name prefixed. When out_dir is set, writes trace.csv,
/// baseline_trace.csv (with run_baseline) and manifest.json.
RunReport run_pipeline(const Scenario& scenario, const PipelineOptions& options = {});

/// Synthesis cache: gains, initialization result and scenario hash in one
/// JSON document so later runs can skip the LP solves.
void save_synthesis_cache(const std::string& path, const Scenario& scenario,
                          const std::vector<AgentGains>& gains, const CpdnResult& cpdn);
struct SynthesisCache {
  std::vector<AgentGains> gains;
  CpdnResult cpdn;
};
SynthesisCache load_synthesis_cache(const std::string& path, const Scenario& scenario);

/// Round-trips doubles exactly (shortest representation).
std::string format_double(double value);

}  // namespace dio
