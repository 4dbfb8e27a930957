#include "dio/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <utility>

#include <json.hpp>

namespace dio {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw ScenarioError(path + ": " + message);
}

const json& require_field(const json& node, const std::string& path, const std::string& key) {
  if (!node.is_object() || !node.contains(key)) {
    fail(path, "missing field '" + key + "'");
  }
  return node.at(key);
}

double parse_number(const json& node, const std::string& path) {
  if (!node.is_number()) fail(path, "expected a number");
  return node.get<double>();
}

std::string parse_string(const json& node, const std::string& path) {
  if (!node.is_string()) fail(path, "expected a string");
  return node.get<std::string>();
}

int parse_int(const json& node, const std::string& path) {
  if (!node.is_number_integer()) fail(path, "expected an integer");
  return node.get<int>();
}

// Matrix expression: explicit rows, or one of
//   {"identity": n}, {"zeros": [r, c]}, {"ones": [r, c]},
//   {"unit_row": [n, i]}, {"kron": [expr, expr]}.
Matrix parse_matrix(const json& node, const std::string& path) {
  if (node.is_array()) {
    if (node.empty()) fail(path, "matrix must have at least one row");
    Index rows = static_cast<Index>(node.size());
    if (!node[0].is_array() || node[0].empty()) {
      fail(path, "matrix rows must be nonempty arrays");
    }
    Index cols = static_cast<Index>(node[0].size());
    Matrix m(rows, cols);
    for (Index r = 0; r < rows; ++r) {
      const json& row = node[static_cast<size_t>(r)];
      if (!row.is_array() || static_cast<Index>(row.size()) != cols) {
        fail(path, "row " + std::to_string(r) + " has inconsistent length");
      }
      for (Index c = 0; c < cols; ++c) {
        m(r, c) = parse_number(row[static_cast<size_t>(c)],
                               path + "[" + std::to_string(r) + "][" + std::to_string(c) + "]");
      }
    }
    return m;
  }
  if (!node.is_object()) fail(path, "expected a matrix (rows or expression object)");
  if (node.contains("identity")) {
    int n = parse_int(node.at("identity"), path + ".identity");
    if (n <= 0) fail(path + ".identity", "dimension must be positive");
    return Matrix::Identity(n, n);
  }
  if (node.contains("zeros") || node.contains("ones")) {
    const bool ones = node.contains("ones");
    const json& shape = node.at(ones ? "ones" : "zeros");
    const std::string key = path + (ones ? ".ones" : ".zeros");
    if (!shape.is_array() || shape.size() != 2) fail(key, "expected [rows, cols]");
    int r = parse_int(shape[0], key);
    int c = parse_int(shape[1], key);
    if (r <= 0 || c <= 0) fail(key, "shape must be positive");
    return ones ? Matrix::Ones(r, c) : Matrix::Zero(r, c);
  }
  if (node.contains("unit_row")) {
    const json& spec = node.at("unit_row");
    const std::string key = path + ".unit_row";
    if (!spec.is_array() || spec.size() != 2) fail(key, "expected [length, index]");
    int n = parse_int(spec[0], key);
    int i = parse_int(spec[1], key);
    if (n <= 0 || i < 0 || i >= n) fail(key, "index out of range");
    Matrix m = Matrix::Zero(1, n);
    m(0, i) = 1.0;
    return m;
  }
  if (node.contains("kron")) {
    const json& parts = node.at("kron");
    const std::string key = path + ".kron";
    if (!parts.is_array() || parts.size() != 2) fail(key, "expected two factors");
    Matrix a = parse_matrix(parts[0], key + "[0]");
    Matrix b = parse_matrix(parts[1], key + "[1]");
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index i = 0; i < a.rows(); ++i) {
      for (Index j = 0; j < a.cols(); ++j) {
        out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
      }
    }
    return out;
  }
  fail(path, "unknown matrix expression");
}

Vector parse_vector(const json& node, const std::string& path) {
  if (node.is_array() && (node.empty() || node[0].is_number())) {
    Vector v(static_cast<Index>(node.size()));
    for (Index i = 0; i < v.size(); ++i) {
      v(i) = parse_number(node[static_cast<size_t>(i)], path + "[" + std::to_string(i) + "]");
    }
    return v;
  }
  Matrix m = parse_matrix(node, path);
  if (m.cols() != 1) fail(path, "vector expression must have a single column");
  return m.col(0);
}

NoisePolicy::Form parse_form(const json& node, const std::string& path) {
  std::string name = node.is_string() ? node.get<std::string>() : "";
  if (name == "sin") return NoisePolicy::Form::sine;
  if (name == "cos") return NoisePolicy::Form::cosine;
  if (name == "sin2") return NoisePolicy::Form::sine_squared;
  if (name == "const") return NoisePolicy::Form::constant;
  fail(path, "form must be one of sin, cos, sin2, const");
}

NoisePolicy parse_policy(const json& node, const std::string& path, Index dim) {
  NoisePolicy policy;
  std::string kind = parse_string(require_field(node, path, "policy"), path + ".policy");
  if (kind == "zero") {
    policy.type = NoisePolicy::Type::zero;
    return policy;
  }
  if (kind == "uniform") {
    policy.type = NoisePolicy::Type::uniform;
    return policy;
  }
  if (kind != "formula") fail(path + ".policy", "must be zero, uniform or formula");
  policy.type = NoisePolicy::Type::formula;
  const json& comps = require_field(node, path, "components");
  if (!comps.is_array() || comps.empty()) fail(path + ".components", "expected component list");
  int tile = 1;
  if (node.contains("tile")) {
    tile = parse_int(node.at("tile"), path + ".tile");
    if (tile <= 0) fail(path + ".tile", "must be positive");
  }
  std::vector<NoisePolicy::Component> base;
  for (size_t c = 0; c < comps.size(); ++c) {
    const std::string cpath = path + ".components[" + std::to_string(c) + "]";
    const json& comp = comps[c];
    NoisePolicy::Component parsed;
    parsed.form = parse_form(require_field(comp, cpath, "form"), cpath + ".form");
    parsed.amplitude = parse_number(require_field(comp, cpath, "amplitude"), cpath + ".amplitude");
    if (comp.contains("frequency")) {
      parsed.frequency = parse_number(comp.at("frequency"), cpath + ".frequency");
    }
    if (comp.contains("phase")) {
      parsed.phase = parse_number(comp.at("phase"), cpath + ".phase");
    }
    base.push_back(parsed);
  }
  for (int t = 0; t < tile; ++t) {
    policy.components.insert(policy.components.end(), base.begin(), base.end());
  }
  if (static_cast<Index>(policy.components.size()) != dim) {
    fail(path, "formula covers " + std::to_string(policy.components.size()) +
                   " coordinates, signal has " + std::to_string(dim));
  }
  return policy;
}

Digraph parse_graph(const json& node, const std::string& path) {
  int nodes = parse_int(require_field(node, path, "nodes"), path + ".nodes");
  if (nodes <= 0) fail(path + ".nodes", "must be positive");
  if (node.contains("generator")) {
    std::string name = parse_string(node.at("generator"), path + ".generator");
    if (name == "complete") return Digraph::complete(nodes);
    if (name == "directed_ring") return Digraph::directed_ring(nodes);
    fail(path + ".generator", "unknown generator '" + name + "'");
  }
  const json& edges = require_field(node, path, "edges");
  if (!edges.is_array()) fail(path + ".edges", "expected edge list");
  std::vector<std::pair<int, int>> parsed;
  for (size_t e = 0; e < edges.size(); ++e) {
    const std::string epath = path + ".edges[" + std::to_string(e) + "]";
    if (!edges[e].is_array() || edges[e].size() != 2) fail(epath, "expected [from, to]");
    parsed.emplace_back(parse_int(edges[e][0], epath), parse_int(edges[e][1], epath));
  }
  try {
    return {nodes, parsed};
  } catch (const InvalidInputError& err) {
    fail(path, err.what());
  }
}

IntervalVector parse_bounds(const json& node, const std::string& path, const std::string& low_key,
                            const std::string& high_key) {
  Vector lo = parse_vector(require_field(node, path, low_key), path + "." + low_key);
  Vector hi = parse_vector(require_field(node, path, high_key), path + "." + high_key);
  try {
    return {std::move(lo), std::move(hi)};
  } catch (const InvalidInputError& err) {
    fail(path + "." + low_key + "/" + high_key, err.what());
  }
}

void validate_policy_against_bounds(const NoisePolicy& policy, const IntervalVector& bounds,
                                    int horizon, const std::string& path) {
  if (policy.type == NoisePolicy::Type::uniform) return;
  for (int k = 0; k <= horizon; ++k) {
    Vector value = policy.evaluate(k, bounds.size());
    if (!bounds.contains(value)) {
      fail(path, "realization leaves its bounds at step " + std::to_string(k));
    }
  }
}

}  // namespace

Vector NoisePolicy::evaluate(int k, Index dim) const {
  Vector v = Vector::Zero(dim);
  if (type == Type::zero) return v;
  if (type != Type::formula) {
    throw InvalidInputError("NoisePolicy::evaluate: uniform policy needs a sampler");
  }
  for (Index i = 0; i < dim; ++i) {
    const Component& c = components[i];
    const double arg = c.frequency * k + c.phase;
    switch (c.form) {
      case Form::sine:
        v(i) = c.amplitude * std::sin(arg);
        break;
      case Form::cosine:
        v(i) = c.amplitude * std::cos(arg);
        break;
      case Form::sine_squared:
        v(i) = c.amplitude * std::sin(arg) * std::sin(arg);
        break;
      case Form::constant:
        v(i) = c.amplitude;
        break;
    }
  }
  return v;
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (unsigned char byte : bytes) {
    hash ^= byte;
    hash *= 0x100000001b3ull;
  }
  return hash;
}

Scenario parse_scenario(const std::string& text, const std::string& origin) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& err) {
    throw ScenarioError(origin + ": " + err.what());
  }

  const json& plant_node = require_field(doc, origin, "plant");
  const json& agents = require_field(plant_node, origin + ".plant", "agents");
  if (!agents.is_array() || agents.empty()) {
    fail(origin + ".plant.agents", "expected a nonempty agent list");
  }

  PlantModel plant{
      parse_matrix(require_field(plant_node, origin + ".plant", "A"), origin + ".plant.A"),
      parse_matrix(require_field(plant_node, origin + ".plant", "B"), origin + ".plant.B"),
      {},
      {},
      parse_bounds(plant_node, origin + ".plant", "w_lower", "w_upper"),
      {},
      parse_bounds(doc, origin, "x0_lower", "x0_upper")};
  for (size_t i = 0; i < agents.size(); ++i) {
    const std::string apath = origin + ".plant.agents[" + std::to_string(i) + "]";
    const json& agent = agents[i];
    plant.C.push_back(parse_matrix(require_field(agent, apath, "C"), apath + ".C"));
    plant.D.push_back(parse_matrix(require_field(agent, apath, "D"), apath + ".D"));
    plant.v_bounds.push_back(parse_bounds(agent, apath, "v_lower", "v_upper"));
  }
  try {
    plant.validate();
  } catch (const InvalidInputError& err) {
    fail(origin + ".plant", err.what());
  }

  Scenario scenario{std::string{},
                    std::move(plant),
                    parse_graph(require_field(doc, origin, "graph"), origin + ".graph"),
                    std::nullopt,
                    {},
                    {},
                    0,
                    kAutoRounds,
                    0,
                    origin,
                    fnv1a64(text)};
  if (doc.contains("name")) scenario.name = parse_string(doc.at("name"), origin + ".name");
  if (scenario.graph.node_count() != scenario.plant.agent_count()) {
    fail(origin + ".graph.nodes", "graph nodes and plant agents disagree");
  }

  scenario.horizon = parse_int(require_field(doc, origin, "horizon"), origin + ".horizon");
  if (scenario.horizon < 1) fail(origin + ".horizon", "must be at least 1");

  const json& rounds = require_field(doc, origin, "rounds");
  if (rounds.is_string()) {
    if (rounds.get<std::string>() != "auto") fail(origin + ".rounds", "must be 'auto' or >= 0");
    scenario.rounds = kAutoRounds;
  } else {
    scenario.rounds = parse_int(rounds, origin + ".rounds");
    if (scenario.rounds < 0) fail(origin + ".rounds", "must be 'auto' or >= 0");
  }

  if (doc.contains("seed")) {
    if (!doc.at("seed").is_number_unsigned()) fail(origin + ".seed", "expected an unsigned seed");
    scenario.seed = doc.at("seed").get<std::uint64_t>();
  }

  if (doc.contains("x0")) {
    Vector x0 = parse_vector(doc.at("x0"), origin + ".x0");
    if (x0.size() != scenario.plant.state_dim()) {
      fail(origin + ".x0", "length must match the state dimension");
    }
    if (!scenario.plant.x0_bounds.contains(x0)) {
      fail(origin + ".x0", "initial state lies outside the declared initial interval");
    }
    scenario.x0 = std::move(x0);
  }

  const json& noise = require_field(doc, origin, "noise");
  scenario.w_policy = parse_policy(require_field(noise, origin + ".noise", "w"),
                                   origin + ".noise.w", scenario.plant.w_bounds.size());
  validate_policy_against_bounds(scenario.w_policy, scenario.plant.w_bounds, scenario.horizon,
                                 origin + ".noise.w");
  const json& v_node = require_field(noise, origin + ".noise", "v");
  if (!v_node.is_array() || static_cast<int>(v_node.size()) != scenario.plant.agent_count()) {
    fail(origin + ".noise.v", "expected one policy per agent");
  }
  for (int i = 0; i < scenario.plant.agent_count(); ++i) {
    const std::string vpath = origin + ".noise.v[" + std::to_string(i) + "]";
    scenario.v_policies.push_back(
        parse_policy(v_node[static_cast<size_t>(i)], vpath, scenario.plant.v_bounds[i].size()));
    validate_policy_against_bounds(scenario.v_policies.back(), scenario.plant.v_bounds[i],
                                   scenario.horizon, vpath);
  }
  return scenario;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) {
    throw ScenarioError(path + ": cannot open file");
  }
  std::ostringstream buffer;
  buffer << file.rdbuf();
  Scenario scenario = parse_scenario(buffer.str(), path);
  scenario.source_path = path;
  return scenario;
}

}  // namespace dio
