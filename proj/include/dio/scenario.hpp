#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dio/graph.hpp"
#include "dio/model.hpp"
#include "dio/types.hpp"

namespace dio {

/// Scenario file problem: parse failure, dimension inconsistency or bound
/// violation, reported with the offending field path.
class ScenarioError : public std::runtime_error {
 public:
  explicit ScenarioError(const std::string& what) : std::runtime_error(what) {}
};

/// How one noise signal is realized over the horizon. Formula components
/// evaluate amplitude * form(frequency * k + phase) per coordinate; the
/// uniform policy draws independently within the declared bounds from a
/// seeded stream.
struct NoisePolicy {
  enum class Type { zero, uniform, formula };
  enum class Form { sine, cosine, sine_squared, constant };

  struct Component {
    Form form = Form::constant;
    double amplitude = 0.0;
    double frequency = 0.0;
    double phase = 0.0;
  };

  Type type = Type::zero;
  std::vector<Component> components;  // formula only; one entry per coordinate

  /// Deterministic evaluation (zero or formula policies).
  Vector evaluate(int k, Index dim) const;
};

inline constexpr int kAutoRounds = -1;

struct Scenario {
  std::string name;
  PlantModel plant;
  Digraph graph;
  std::optional<Vector> x0;  // sampled from the initial interval when absent
  NoisePolicy w_policy;
  std::vector<NoisePolicy> v_policies;
  int horizon = 0;
  int rounds = kAutoRounds;
  std::uint64_t seed = 0;

  // Provenance, filled by load_scenario.
  std::string source_path;
  std::uint64_t source_hash = 0;
};

/// Parse and fully validate a scenario file. Matrices may be written
/// explicitly or through the expression forms (identity, zeros, ones,
/// unit_row, kron); deterministic noise formulas are checked against their
/// declared bounds over the whole horizon. Throws ScenarioError with a
/// field diagnostic.
Scenario load_scenario(const std::string& path);

/// Same, from an in-memory JSON document.
Scenario parse_scenario(const std::string& text, const std::string& origin = "<memory>");

/// FNV-1a 64-bit, used for the run manifest's scenario hash.
std::uint64_t fnv1a64(const std::string& bytes);

}  // namespace dio
