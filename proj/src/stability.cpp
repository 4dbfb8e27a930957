#include "dio/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <utility>

#include <Eigen/Eigenvalues>

namespace dio {

SelectionAssignment::SelectionAssignment(int agent_count, Index state_dim)
    : source_lower_(Eigen::MatrixXi::Constant(agent_count, state_dim, -1)),
      source_upper_(Eigen::MatrixXi::Constant(agent_count, state_dim, -1)) {
  if (agent_count <= 0 || state_dim <= 0) {
    throw InvalidInputError("SelectionAssignment: empty dimensions");
  }
}

int SelectionAssignment::source(int agent, Index state, BoundSide side) const {
  return side == BoundSide::lower ? source_lower_(agent, state) : source_upper_(agent, state);
}

void SelectionAssignment::set_source(int agent, Index state, BoundSide side, int src) {
  if (src < 0 || src >= agent_count()) {
    throw InvalidInputError("SelectionAssignment: source agent out of range");
  }
  (side == BoundSide::lower ? source_lower_ : source_upper_)(agent, state) = src;
}

Matrix SelectionAssignment::to_matrix() const {
  const int nagents = agent_count();
  const Index n = state_dim();
  Matrix h = Matrix::Zero(2 * n * nagents, 2 * n * nagents);
  for (int i = 0; i < nagents; ++i) {
    for (Index s = 0; s < n; ++s) {
      h(lower_error_index(i, s, n), lower_error_index(source_lower_(i, s), s, n)) = 1.0;
      h(upper_error_index(i, s, n), upper_error_index(source_upper_(i, s), s, n)) = 1.0;
    }
  }
  return h;
}

void SelectionAssignment::validate_membership(const Digraph& graph, int d) const {
  for (int i = 0; i < agent_count(); ++i) {
    std::vector<int> hood = graph.dhop(i, d);
    for (Index s = 0; s < state_dim(); ++s) {
      for (BoundSide side : {BoundSide::lower, BoundSide::upper}) {
        int src = source(i, s, side);
        if (!std::binary_search(hood.begin(), hood.end(), src)) {
          throw InvalidInputError("SelectionAssignment: source " + std::to_string(src) +
                                  " for agent " + std::to_string(i) + ", state " +
                                  std::to_string(s) + " lies outside the " + std::to_string(d) +
                                  "-hop neighborhood");
        }
      }
    }
  }
}

bool SelectionAssignment::operator==(const SelectionAssignment& other) const {
  return source_lower_ == other.source_lower_ && source_upper_ == other.source_upper_;
}

Matrix assemble_Ahat(const std::vector<AgentGains>& gains) {
  if (gains.empty()) {
    throw InvalidInputError("assemble_Ahat: no agents");
  }
  const Index n = gains[0].A_tilde.rows();
  const int nagents = static_cast<int>(gains.size());
  Matrix ahat = Matrix::Zero(2 * n * nagents, 2 * n * nagents);
  for (int i = 0; i < nagents; ++i) {
    if (gains[i].A_tilde.rows() != n || gains[i].A_tilde.cols() != n) {
      throw InvalidInputError("assemble_Ahat: closed-loop matrix dimension mismatch at agent " +
                              std::to_string(i));
    }
    SignSplitMatrix split = sign_split(gains[i].A_tilde);
    const Index base = 2 * n * i;
    ahat.block(base, base, n, n) = split.plus;
    ahat.block(base, base + n, n, n) = split.minus;
    ahat.block(base + n, base, n, n) = split.minus;
    ahat.block(base + n, base + n, n, n) = split.plus;
  }
  return ahat;
}

namespace {

// Row of H Ahat for (agent, state, side) when the side adopts `source`.
Index selected_row(const int source, const Index state, const BoundSide side, const Index n) {
  return side == BoundSide::lower ? lower_error_index(source, state, n)
                                  : upper_error_index(source, state, n);
}

}  // namespace

Matrix apply_selection(const SelectionAssignment& h, const Matrix& ahat) {
  const int nagents = h.agent_count();
  const Index n = h.state_dim();
  if (ahat.rows() != 2 * n * nagents || ahat.cols() != ahat.rows()) {
    throw InvalidInputError("apply_selection: matrix dimension mismatch");
  }
  Matrix result(ahat.rows(), ahat.cols());
  for (int i = 0; i < nagents; ++i) {
    for (Index s = 0; s < n; ++s) {
      result.row(lower_error_index(i, s, n)) =
          ahat.row(selected_row(h.source(i, s, BoundSide::lower), s, BoundSide::lower, n));
      result.row(upper_error_index(i, s, n)) =
          ahat.row(selected_row(h.source(i, s, BoundSide::upper), s, BoundSide::upper, n));
    }
  }
  return result;
}

SelectionAssignment hstar_from_assignment(const CpdnResult& cpdn,
                                          const std::vector<AgentGains>& gains,
                                          const Digraph& graph, int d) {
  if (!cpdn.success) {
    throw InvalidInputError("hstar_from_assignment: initialization did not succeed");
  }
  if (cpdn.d_star > std::max(d, 1)) {
    throw InvalidInputError("hstar_from_assignment: d = " + std::to_string(d) +
                            " is below the required d* = " + std::to_string(cpdn.d_star));
  }
  const Index n = gains.empty() ? 0 : gains[0].A_tilde.rows();
  SelectionAssignment h(graph.node_count(), n);
  for (int i = 0; i < graph.node_count(); ++i) {
    for (Index s = 0; s < n; ++s) {
      int src = cpdn.stabilizer(i, s);
      if (src < 0) {
        throw InvalidInputError("hstar_from_assignment: no stabilizer for agent " +
                                std::to_string(i) + ", state " + std::to_string(s));
      }
      h.set_source(i, s, BoundSide::lower, src);
      h.set_source(i, s, BoundSide::upper, src);
    }
  }
  h.validate_membership(graph, d);
  return h;
}

StabilityCertificate infnorm_certificate(const SelectionAssignment& h, const Matrix& ahat) {
  Matrix selected = apply_selection(h, ahat);
  double value = selected.cwiseAbs().rowwise().sum().maxCoeff();
  return {StabilityCertificate::Kind::infnorm, value, h, value < kStabilityMargin, true};
}

namespace {

bool is_nilpotent(const Matrix& m) {
  const Index dim = m.rows();
  if (m.isZero(0.0)) return true;
  Matrix power = m;
  Index exponent = 1;
  while (exponent < dim) {
    double scale = power.maxCoeff();
    if (scale == 0.0) return true;
    power /= scale;  // entries are nonnegative, so rescaling preserves the zero pattern
    power = power * power;
    exponent *= 2;
    if (power.isZero(0.0)) return true;
  }
  return power.isZero(0.0);
}

}  // namespace

SpectralRadiusResult spectral_radius(const Matrix& m, int max_iterations, double tolerance) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw InvalidInputError("spectral_radius: matrix must be square and nonempty");
  }
  if (m.minCoeff() < 0.0) {
    throw InvalidInputError("spectral_radius: matrix must be nonnegative");
  }
  const Index dim = m.rows();
  if (is_nilpotent(m)) {
    return {0.0, Vector::Zero(dim), true};
  }
  Vector v = Vector::Constant(dim, 1.0 / std::sqrt(static_cast<double>(dim)));
  double previous = std::numeric_limits<double>::infinity();
  double estimate = 0.0;
  for (int it = 0; it < max_iterations; ++it) {
    Vector w = m * v;
    estimate = v.dot(w);  // Rayleigh growth of m at the current iterate
    if (std::abs(estimate - previous) < tolerance) {
      return {estimate, v, true};
    }
    previous = estimate;
    v = (w + v).normalized();  // shift by identity keeps peripheral spectra convergent
  }
  return {estimate, v, false};
}

StabilityCertificate spectral_radius_certificate(const SelectionAssignment& h,
                                                 const Matrix& ahat) {
  SpectralRadiusResult r = spectral_radius(apply_selection(h, ahat));
  return {StabilityCertificate::Kind::spectral_radius, r.value, h, r.value < kStabilityMargin,
          r.converged};
}

namespace {

// Exact enough for selection comparison: nilpotent matrices report exactly
// zero, everything else goes through the dense eigensolver.
double selection_rho(const Matrix& m) {
  if (is_nilpotent(m)) return 0.0;
  Eigen::EigenSolver<Matrix> solver(m, /*computeEigenvectors=*/false);
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

struct LsrWorkspace {
  const std::vector<Matrix>& candidates;
  Index dim;
  Matrix scratch;

  explicit LsrWorkspace(const std::vector<Matrix>& cands)
      : candidates(cands), dim(static_cast<Index>(cands.size())), scratch(dim, dim) {}

  const Matrix& assemble(const std::vector<int>& choice) {
    for (Index r = 0; r < dim; ++r) {
      scratch.row(r) = candidates[r].row(choice[r]);
    }
    return scratch;
  }

  double rho(std::map<std::vector<int>, double>& cache, const std::vector<int>& choice) {
    auto it = cache.find(choice);
    if (it != cache.end()) return it->second;
    double value = selection_rho(assemble(choice));
    cache.emplace(choice, value);
    return value;
  }
};

// Per-row argmin of candidate . v. Strict improvement is required to move
// away from the incumbent, so exact ties keep the current selection.
std::vector<int> argmin_selection(const std::vector<Matrix>& candidates, const Vector& v,
                                  const std::vector<int>* incumbent) {
  std::vector<int> choice(candidates.size());
  for (size_t r = 0; r < candidates.size(); ++r) {
    int best = incumbent ? (*incumbent)[r] : 0;
    double best_value = candidates[r].row(best).dot(v);
    for (Index c = 0; c < candidates[r].rows(); ++c) {
      double value = candidates[r].row(c).dot(v);
      if (value < best_value) {
        best = static_cast<int>(c);
        best_value = value;
      }
    }
    choice[r] = best;
  }
  return choice;
}

LsrResult lsr_exhaustive(LsrWorkspace& ws) {
  const Index dim = ws.dim;
  std::vector<int> counter(dim, 0);
  std::vector<int> best_choice = counter;
  double best_value = std::numeric_limits<double>::infinity();
  while (true) {
    double value = selection_rho(ws.assemble(counter));
    if (value < best_value) {
      best_value = value;
      best_choice = counter;
    }
    Index pos = dim - 1;
    while (pos >= 0) {
      if (++counter[pos] < ws.candidates[pos].rows()) break;
      counter[pos] = 0;
      --pos;
    }
    if (pos < 0) break;
  }
  return {best_value, best_choice, false};
}

LsrResult lsr_policy_iteration(LsrWorkspace& ws) {
  const Index dim = ws.dim;
  std::map<std::vector<int>, double> rho_cache;
  const Vector ones = Vector::Ones(dim);

  std::vector<int> choice = argmin_selection(ws.candidates, ones, nullptr);
  std::set<std::vector<int>> seen{choice};
  std::vector<int> best_choice = choice;
  double best_value = ws.rho(rho_cache, choice);
  bool warning = false;

  const int max_policy_steps = 64 + static_cast<int>(dim);
  for (int step = 0; step < max_policy_steps; ++step) {
    SpectralRadiusResult sr = spectral_radius(ws.assemble(choice), 3000, 1e-9);
    Vector v = sr.eigenvector + 1e-12 * ones;
    std::vector<int> next = argmin_selection(ws.candidates, v, &choice);
    if (next == choice) break;  // selection stable
    if (seen.count(next)) {
      warning = true;  // cycle without further improvement
      break;
    }
    seen.insert(next);
    choice = std::move(next);
    double value = ws.rho(rho_cache, choice);
    if (value < best_value) {
      best_value = value;
      best_choice = choice;
    }
    if (step + 1 == max_policy_steps) warning = true;
  }

  // Value-iteration sweep on the per-row-min map as a refinement: extract a
  // stationary selection along the orbit of the all-ones vector and keep the
  // best one seen.
  Vector v = ones;
  const int sweeps = 2 * static_cast<int>(dim) + 20;
  for (int t = 0; t < sweeps; ++t) {
    std::vector<int> extracted = argmin_selection(ws.candidates, v, &best_choice);
    double value = ws.rho(rho_cache, extracted);
    if (value < best_value) {
      best_value = value;
      best_choice = extracted;
    }
    Vector next(dim);
    for (Index r = 0; r < dim; ++r) {
      next(r) = ws.candidates[r].row(extracted[r]).dot(v);
    }
    double scale = next.maxCoeff();
    if (scale <= 0.0) break;  // the min map annihilated the iterate
    v = next / scale;
  }

  return {best_value, best_choice, warning};
}

}  // namespace

LsrResult lower_spectral_radius(const std::vector<Matrix>& row_candidates, long max_exhaustive) {
  const Index dim = static_cast<Index>(row_candidates.size());
  if (dim == 0) {
    throw InvalidInputError("lower_spectral_radius: no rows");
  }
  long vertex_count = 1;
  for (const Matrix& cands : row_candidates) {
    if (cands.rows() == 0 || cands.cols() != dim) {
      throw InvalidInputError("lower_spectral_radius: candidate set empty or of wrong width");
    }
    if (cands.minCoeff() < 0.0) {
      throw InvalidInputError("lower_spectral_radius: candidate rows must be nonnegative");
    }
    if (vertex_count <= max_exhaustive) {
      vertex_count *= cands.rows();  // saturates just past the budget
    }
  }
  LsrWorkspace ws(row_candidates);
  if (vertex_count <= max_exhaustive) {
    return lsr_exhaustive(ws);
  }
  return lsr_policy_iteration(ws);
}

StabilityCertificate lsr_certificate(const std::vector<AgentGains>& gains, const Digraph& graph,
                                     int d, long max_exhaustive) {
  const Matrix ahat = assemble_Ahat(gains);
  const Index n = gains[0].A_tilde.rows();
  const int nagents = graph.node_count();
  if (static_cast<int>(gains.size()) != nagents) {
    throw InvalidInputError("lsr_certificate: one gain set per node required");
  }
  const Index dim = 2 * n * nagents;

  // Candidates for row (i, s, side) are the corresponding rows of agents in
  // the d-hop neighborhood, ordered by hop distance then agent index.
  std::vector<Matrix> candidates(dim);
  std::vector<std::vector<int>> sources(dim);
  for (int i = 0; i < nagents; ++i) {
    auto hood = graph.dhop_with_distance(i, d);
    for (Index s = 0; s < n; ++s) {
      for (BoundSide side : {BoundSide::lower, BoundSide::upper}) {
        Index r = side == BoundSide::lower ? lower_error_index(i, s, n)
                                           : upper_error_index(i, s, n);
        candidates[r] = Matrix(static_cast<Index>(hood.size()), dim);
        for (size_t c = 0; c < hood.size(); ++c) {
          int j = hood[c].first;
          candidates[r].row(static_cast<Index>(c)) = ahat.row(selected_row(j, s, side, n));
          sources[r].push_back(j);
        }
      }
    }
  }

  LsrResult result = lower_spectral_radius(candidates, max_exhaustive);

  SelectionAssignment assignment(nagents, n);
  for (int i = 0; i < nagents; ++i) {
    for (Index s = 0; s < n; ++s) {
      Index rl = lower_error_index(i, s, n);
      Index ru = upper_error_index(i, s, n);
      assignment.set_source(i, s, BoundSide::lower, sources[rl][result.choice[rl]]);
      assignment.set_source(i, s, BoundSide::upper, sources[ru][result.choice[ru]]);
    }
  }
  return {StabilityCertificate::Kind::lower_spectral_radius, result.value, assignment,
          result.value < kStabilityMargin, !result.warning};
}

SelectionAssignment realized_selection(const std::vector<IntervalVector>& pre_network_framers,
                                       const Digraph& graph, int d) {
  const int nagents = graph.node_count();
  if (static_cast<int>(pre_network_framers.size()) != nagents) {
    throw InvalidInputError("realized_selection: one framer per node required");
  }
  const Index n = pre_network_framers[0].size();
  SelectionAssignment h(nagents, n);
  for (int i = 0; i < nagents; ++i) {
    std::vector<int> hood = graph.dhop(i, d);  // ascending agent index
    for (Index s = 0; s < n; ++s) {
      int best_low = hood[0];
      int best_up = hood[0];
      for (int j : hood) {
        if (pre_network_framers[j].lower()(s) > pre_network_framers[best_low].lower()(s)) {
          best_low = j;
        }
        if (pre_network_framers[j].upper()(s) < pre_network_framers[best_up].upper()(s)) {
          best_up = j;
        }
      }
      h.set_source(i, s, BoundSide::lower, best_low);
      h.set_source(i, s, BoundSide::upper, best_up);
    }
  }
  return h;
}

}  // namespace dio
