#include "dio/simulate.hpp"

#include <charconv>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <utility>

#include <json.hpp>

namespace dio {

namespace {

using ordered_json = nlohmann::ordered_json;
using json = nlohmann::ordered_json;

class UniformStream {
 public:
  UniformStream(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    engine_.seed(seq);
  }

  // [0, 1) with 53 uniform bits; avoids the implementation-defined
  // std::uniform_real_distribution so runs are reproducible everywhere.
  double next_unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  Vector sample(const IntervalVector& bounds) {
    Vector v(bounds.size());
    for (Index i = 0; i < v.size(); ++i) {
      v(i) = bounds.lower()(i) + next_unit() * (bounds.upper()(i) - bounds.lower()(i));
    }
    return v;
  }

 private:
  std::mt19937_64 engine_;
};

constexpr std::uint64_t kStreamInitialState = 0;
constexpr std::uint64_t kStreamProcessNoise = 1;
constexpr std::uint64_t kStreamMeasurementNoiseBase = 2;

Vector realize_noise(const NoisePolicy& policy, int k, const IntervalVector& bounds,
                     UniformStream& stream) {
  if (policy.type == NoisePolicy::Type::uniform) {
    return stream.sample(bounds);
  }
  return policy.evaluate(k, bounds.size());
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
      .count();
}

template <typename Fn>
auto stage(const char* label, Fn&& fn) {
  try {
    return fn();
  } catch (const std::exception& err) {
    throw std::runtime_error(std::string(label) + ": " + err.what());
  }
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const json& node) {
  const Index rows = static_cast<Index>(node.size());
  const Index cols = rows > 0 ? static_cast<Index>(node[0].size()) : 0;
  Matrix m(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    for (Index c = 0; c < cols; ++c) {
      m(r, c) = node[static_cast<size_t>(r)][static_cast<size_t>(c)].get<double>();
    }
  }
  return m;
}

std::string hash_hex(std::uint64_t hash) {
  std::ostringstream out;
  out << std::hex << hash;
  return out.str();
}

}  // namespace

std::string format_double(double value) {
  char buffer[32];
  auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return {buffer, ptr};
}

PlantTrajectory simulate_plant(const Scenario& scenario, std::uint64_t seed) {
  const PlantModel& plant = scenario.plant;
  const int nagents = plant.agent_count();
  const int horizon = scenario.horizon;

  UniformStream x0_stream(seed, kStreamInitialState);
  UniformStream w_stream(seed, kStreamProcessNoise);
  std::vector<UniformStream> v_streams;
  v_streams.reserve(nagents);
  for (int i = 0; i < nagents; ++i) {
    v_streams.emplace_back(seed, kStreamMeasurementNoiseBase + static_cast<std::uint64_t>(i));
  }

  PlantTrajectory traj;
  traj.x.reserve(horizon + 1);
  traj.x.push_back(scenario.x0 ? *scenario.x0 : x0_stream.sample(plant.x0_bounds));

  traj.w.reserve(horizon);
  for (int k = 0; k < horizon; ++k) {
    traj.w.push_back(realize_noise(scenario.w_policy, k, plant.w_bounds, w_stream));
    traj.x.push_back(plant.A * traj.x[k] + plant.B * traj.w[k]);
  }

  traj.v.resize(horizon + 1);
  traj.y.resize(horizon + 1);
  for (int k = 0; k <= horizon; ++k) {
    traj.v[k].reserve(nagents);
    traj.y[k].reserve(nagents);
    for (int i = 0; i < nagents; ++i) {
      traj.v[k].push_back(
          realize_noise(scenario.v_policies[i], k, plant.v_bounds[i], v_streams[i]));
      traj.y[k].push_back(plant.C[i] * traj.x[k] + plant.D[i] * traj.v[k][i]);
    }
  }
  return traj;
}

ObserverRun run_observer(const Scenario& scenario, const std::vector<ObserverConfig>& configs,
                         const PlantTrajectory& trajectory, int rounds) {
  const PlantModel& plant = scenario.plant;
  const int nagents = plant.agent_count();
  const int horizon = scenario.horizon;

  ObserverRun run;
  run.rounds = rounds;
  run.framers.reserve(horizon + 1);
  run.framers.emplace_back(nagents, plant.x0_bounds);

  long contained = 0;
  long total = 0;
  for (int i = 0; i < nagents; ++i) {
    contained += run.framers[0][i].contains(trajectory.x[0]) ? 1 : 0;
    ++total;
  }
  for (int k = 0; k < horizon; ++k) {
    DioStepResult step = dio_step(configs, plant, scenario.graph, rounds, run.framers.back(),
                                  trajectory.y[k], trajectory.y[k + 1]);
    run.realized.push_back(std::move(step.realized));
    run.framers.push_back(std::move(step.framers));
    for (int i = 0; i < nagents; ++i) {
      contained += run.framers.back()[i].contains(trajectory.x[k + 1]) ? 1 : 0;
      ++total;
    }
  }
  run.correctness_rate = static_cast<double>(contained) / static_cast<double>(total);
  return run;
}

WidthStats width_stats(const std::vector<std::vector<IntervalVector>>& framers) {
  const int nagents = static_cast<int>(framers.front().size());
  const Index n = framers.front().front().size();
  WidthStats stats;
  stats.max_width = Matrix::Zero(nagents, n);
  stats.mean_width = Matrix::Zero(nagents, n);
  stats.final_width = Matrix::Zero(nagents, n);
  Matrix initial(nagents, n);
  for (int i = 0; i < nagents; ++i) {
    initial.row(i) = framers.front()[i].width().transpose();
    stats.final_width.row(i) = framers.back()[i].width().transpose();
  }
  std::vector<std::vector<bool>> flagged(nagents, std::vector<bool>(n, false));
  for (const auto& step : framers) {
    for (int i = 0; i < nagents; ++i) {
      Vector width = step[i].width();
      for (Index s = 0; s < n; ++s) {
        stats.max_width(i, s) = std::max(stats.max_width(i, s), width(s));
        stats.mean_width(i, s) += width(s);
        if (width(s) > 10.0 * initial(i, s)) flagged[i][s] = true;
      }
    }
  }
  stats.mean_width /= static_cast<double>(framers.size());
  for (int i = 0; i < nagents; ++i) {
    for (Index s = 0; s < n; ++s) {
      if (flagged[i][s]) stats.divergence_flags.emplace_back(i, static_cast<int>(s));
    }
  }
  return stats;
}

namespace {

void write_trace_csv(const std::string& path, const PlantTrajectory& trajectory,
                     const std::vector<std::vector<IntervalVector>>& framers) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open " + path + " for writing");
  }
  out << "k,agent,state,lower,upper,width,e_lower,e_upper\n";
  for (size_t k = 0; k < framers.size(); ++k) {
    const Vector& x = trajectory.x[k];
    for (size_t i = 0; i < framers[k].size(); ++i) {
      const IntervalVector& framer = framers[k][i];
      for (Index s = 0; s < framer.size(); ++s) {
        out << k << ',' << i << ',' << s << ',' << format_double(framer.lower()(s)) << ','
            << format_double(framer.upper()(s)) << ','
            << format_double(framer.upper()(s) - framer.lower()(s)) << ','
            << format_double(x(s) - framer.lower()(s)) << ','
            << format_double(framer.upper()(s) - x(s)) << '\n';
      }
    }
  }
}

const char* certificate_kind_name(StabilityCertificate::Kind kind) {
  switch (kind) {
    case StabilityCertificate::Kind::infnorm:
      return "infnorm";
    case StabilityCertificate::Kind::spectral_radius:
      return "spectral_radius";
    case StabilityCertificate::Kind::lower_spectral_radius:
      return "lower_spectral_radius";
  }
  return "unknown";
}

ordered_json widths_to_json(const WidthStats& stats) {
  ordered_json w;
  w["max"] = matrix_to_json(stats.max_width);
  w["mean"] = matrix_to_json(stats.mean_width);
  w["final"] = matrix_to_json(stats.final_width);
  ordered_json flags = ordered_json::array();
  for (const auto& [agent, state] : stats.divergence_flags) {
    flags.push_back({agent, state});
  }
  w["divergence_flags"] = std::move(flags);
  return w;
}

}  // namespace

void save_synthesis_cache(const std::string& path, const Scenario& scenario,
                          const std::vector<AgentGains>& gains, const CpdnResult& cpdn) {
  ordered_json doc;
  doc["scenario_hash"] = hash_hex(scenario.source_hash);
  doc["agents"] = scenario.plant.agent_count();
  doc["states"] = scenario.plant.state_dim();
  ordered_json gain_list = ordered_json::array();
  for (const AgentGains& g : gains) {
    ordered_json entry;
    entry["L"] = matrix_to_json(g.L);
    entry["Gamma"] = matrix_to_json(g.Gamma);
    entry["T"] = matrix_to_json(g.T);
    entry["A_tilde"] = matrix_to_json(g.A_tilde);
    json norms = json::array();
    for (Index s = 0; s < g.row_norms.size(); ++s) norms.push_back(g.row_norms(s));
    entry["row_norms"] = std::move(norms);
    gain_list.push_back(std::move(entry));
  }
  doc["gains"] = std::move(gain_list);
  ordered_json cpdn_doc;
  cpdn_doc["d_star"] = cpdn.d_star;
  cpdn_doc["success"] = cpdn.success;
  cpdn_doc["stabilizer"] = json::array();
  cpdn_doc["stabilizer_hops"] = json::array();
  for (Index i = 0; i < cpdn.stabilizer.rows(); ++i) {
    json row = json::array();
    json hops = json::array();
    for (Index s = 0; s < cpdn.stabilizer.cols(); ++s) {
      row.push_back(cpdn.stabilizer(i, s));
      hops.push_back(cpdn.stabilizer_hops(i, s));
    }
    cpdn_doc["stabilizer"].push_back(std::move(row));
    cpdn_doc["stabilizer_hops"].push_back(std::move(hops));
  }
  doc["cpdn"] = std::move(cpdn_doc);

  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open " + path + " for writing");
  }
  out << doc.dump(2) << '\n';
}

SynthesisCache load_synthesis_cache(const std::string& path, const Scenario& scenario) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open cache " + path);
  }
  json doc = json::parse(in);
  if (doc.at("scenario_hash").get<std::string>() != hash_hex(scenario.source_hash)) {
    throw ScenarioError(path + ": cache was built for a different scenario");
  }
  SynthesisCache cache;
  for (const json& entry : doc.at("gains")) {
    AgentGains g;
    g.L = matrix_from_json(entry.at("L"));
    g.Gamma = matrix_from_json(entry.at("Gamma"));
    g.T = matrix_from_json(entry.at("T"));
    g.A_tilde = matrix_from_json(entry.at("A_tilde"));
    const json& norms = entry.at("row_norms");
    g.row_norms = Vector(static_cast<Index>(norms.size()));
    for (Index s = 0; s < g.row_norms.size(); ++s) {
      g.row_norms(s) = norms[static_cast<size_t>(s)].get<double>();
    }
    cache.gains.push_back(std::move(g));
  }
  const json& cpdn_doc = doc.at("cpdn");
  cache.cpdn.d_star = cpdn_doc.at("d_star").get<int>();
  cache.cpdn.success = cpdn_doc.at("success").get<bool>();
  const json& stab = cpdn_doc.at("stabilizer");
  const json& hops = cpdn_doc.at("stabilizer_hops");
  const Index rows = static_cast<Index>(stab.size());
  const Index cols = rows > 0 ? static_cast<Index>(stab[0].size()) : 0;
  cache.cpdn.stabilizer = Eigen::MatrixXi(rows, cols);
  cache.cpdn.stabilizer_hops = Eigen::MatrixXi(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index s = 0; s < cols; ++s) {
      cache.cpdn.stabilizer(i, s) = stab[static_cast<size_t>(i)][static_cast<size_t>(s)].get<int>();
      cache.cpdn.stabilizer_hops(i, s) =
          hops[static_cast<size_t>(i)][static_cast<size_t>(s)].get<int>();
    }
  }
  return cache;
}

RunReport run_pipeline(const Scenario& scenario, const PipelineOptions& options) {
  RunReport report;
  report.seed_used = options.seed_override.value_or(scenario.seed);

  auto t0 = std::chrono::steady_clock::now();
  stage("synthesize", [&] {
    if (!options.cache_path.empty() && std::filesystem::exists(options.cache_path)) {
      SynthesisCache cache = load_synthesis_cache(options.cache_path, scenario);
      report.gains = std::move(cache.gains);
      report.cpdn = std::move(cache.cpdn);
      return 0;
    }
    for (int i = 0; i < scenario.plant.agent_count(); ++i) {
      report.gains.push_back(design_gains(scenario.plant.A, scenario.plant.C[i]));
    }
    report.cpdn = run_cpdn_init(scenario.graph, report.gains);
    if (!options.cache_path.empty()) {
      save_synthesis_cache(options.cache_path, scenario, report.gains, report.cpdn);
    }
    return 0;
  });
  report.timing.synthesize_ms = elapsed_ms(t0);
  if (!report.cpdn.success) {
    report.warnings.push_back(
        "initialization failed: no stabilizing agent within diameter hops for some state");
  }

  int rounds = options.rounds_override.value_or(scenario.rounds);
  if (rounds == kAutoRounds) {
    if (report.cpdn.success) {
      rounds = report.cpdn.d_star;
    } else {
      rounds = scenario.graph.diameter();
      report.warnings.push_back("rounds=auto with failed initialization; using graph diameter");
    }
  }
  report.rounds_used = rounds;

  t0 = std::chrono::steady_clock::now();
  stage("verify", [&] {
    const Matrix ahat = assemble_Ahat(report.gains);
    if (options.method != "lsr" && report.cpdn.success) {
      try {
        SelectionAssignment h_star =
            hstar_from_assignment(report.cpdn, report.gains, scenario.graph, rounds);
        report.certificate = infnorm_certificate(h_star, ahat);
      } catch (const InvalidInputError& err) {
        report.warnings.push_back(std::string("infnorm certificate unavailable: ") + err.what());
      }
    }
    if (options.method == "infnorm") {
      if (!report.cpdn.success) {
        report.warnings.push_back("infnorm certificate unavailable: initialization failed");
      }
      return 0;
    }
    if (!report.certificate || !report.certificate->stable) {
      report.certificate = lsr_certificate(report.gains, scenario.graph, rounds);
    }
    return 0;
  });
  report.timing.verify_ms = elapsed_ms(t0);

  t0 = std::chrono::steady_clock::now();
  PlantTrajectory trajectory;
  ObserverRun run;
  std::optional<ObserverRun> baseline;
  stage("simulate", [&] {
    std::vector<ObserverConfig> configs = make_observer_configs(scenario.plant, report.gains);
    trajectory = simulate_plant(scenario, report.seed_used);
    run = run_observer(scenario, configs, trajectory, rounds);
    if (options.run_baseline) {
      baseline = run_observer(scenario, configs, trajectory, 0);
    }
    return 0;
  });
  report.timing.simulate_ms = elapsed_ms(t0);

  report.correctness_rate = run.correctness_rate;
  report.per_agent_correctness.assign(scenario.plant.agent_count(), 0.0);
  {
    const int nagents = scenario.plant.agent_count();
    std::vector<long> contained(nagents, 0);
    for (size_t k = 0; k < run.framers.size(); ++k) {
      for (int i = 0; i < nagents; ++i) {
        if (run.framers[k][i].contains(trajectory.x[k])) ++contained[i];
      }
    }
    for (int i = 0; i < nagents; ++i) {
      report.per_agent_correctness[i] =
          static_cast<double>(contained[i]) / static_cast<double>(run.framers.size());
    }
  }
  report.widths = width_stats(run.framers);
  if (baseline) {
    report.baseline_correctness = baseline->correctness_rate;
    report.baseline_widths = width_stats(baseline->framers);
  }

  if (!options.out_dir.empty()) {
    stage("report", [&] {
      std::filesystem::create_directories(options.out_dir);
      const std::filesystem::path dir(options.out_dir);
      write_trace_csv((dir / "trace.csv").string(), trajectory, run.framers);
      if (baseline) {
        write_trace_csv((dir / "baseline_trace.csv").string(), trajectory, baseline->framers);
      }
      ordered_json manifest;
      manifest["scenario"] = scenario.source_path;
      manifest["scenario_hash"] = hash_hex(scenario.source_hash);
      manifest["name"] = scenario.name;
      manifest["seed"] = report.seed_used;
      manifest["rounds"] = report.rounds_used;
      manifest["horizon"] = scenario.horizon;
      manifest["agents"] = scenario.plant.agent_count();
      manifest["states"] = scenario.plant.state_dim();
      manifest["d_star"] = report.cpdn.d_star;
      manifest["cpdn_success"] = report.cpdn.success;
      if (report.certificate) {
        ordered_json cert;
        cert["kind"] = certificate_kind_name(report.certificate->kind);
        cert["value"] = report.certificate->value;
        cert["stable"] = report.certificate->stable;
        cert["converged"] = report.certificate->converged;
        manifest["certificate"] = std::move(cert);
      } else {
        manifest["certificate"] = nullptr;
      }
      manifest["correctness_rate"] = report.correctness_rate;
      manifest["widths"] = widths_to_json(report.widths);
      if (baseline) {
        manifest["baseline_correctness"] = *report.baseline_correctness;
        manifest["baseline_widths"] = widths_to_json(*report.baseline_widths);
      }
      ordered_json timing;
      timing["synthesize_ms"] = report.timing.synthesize_ms;
      timing["verify_ms"] = report.timing.verify_ms;
      timing["simulate_ms"] = report.timing.simulate_ms;
      manifest["timing"] = std::move(timing);
      manifest["warnings"] = report.warnings;
      std::ofstream out(dir / "manifest.json", std::ios::binary);
      if (!out) {
        throw std::runtime_error("cannot write manifest.json");
      }
      out << manifest.dump(2) << '\n';
      return 0;
    });
  }
  return report;
}

}  // namespace dio
