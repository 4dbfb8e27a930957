#pragma once

#include <vector>

#include "dio/graph.hpp"
#include "dio/interval.hpp"
#include "dio/synthesis.hpp"
#include "dio/types.hpp"

namespace dio {

/// Row indices of the collective error vector [e_low^1; e_up^1; ...;
/// e_low^N; e_up^N], all 0-based. Agent i's block spans [2n i, 2n i + 2n).
inline Index lower_error_index(int agent, Index state, Index n) { return 2 * n * agent + state; }
inline Index upper_error_index(int agent, Index state, Index n) {
  return 2 * n * agent + n + state;
}

enum class BoundSide { lower, upper };

/// Sparse form of the binary selection matrix H: for each (agent, state,
/// bound side) the agent whose framer is adopted. Exactly one source per
/// row of the dense equivalent.
class SelectionAssignment {
 public:
  SelectionAssignment(int agent_count, Index state_dim);

  int agent_count() const { return static_cast<int>(source_lower_.rows()); }
  Index state_dim() const { return source_lower_.cols(); }

  int source(int agent, Index state, BoundSide side) const;
  void set_source(int agent, Index state, BoundSide side, int src);

  /// Dense 2Nn x 2Nn binary H; intended for tests and diagnostics only.
  Matrix to_matrix() const;

  /// Every source must lie within the d-hop neighborhood of its agent.
  /// Throws InvalidInputError otherwise.
  void validate_membership(const Digraph& graph, int d) const;

  bool operator==(const SelectionAssignment& other) const;

 private:
  Eigen::MatrixXi source_lower_;  // N x n
  Eigen::MatrixXi source_upper_;  // N x n
};

/// Block-diagonal nonnegative lift diag([At+ At-; At- At+]) of the per-agent
/// closed-loop matrices; governs the collective error recursion.
Matrix assemble_Ahat(const std::vector<AgentGains>& gains);

/// H_* built from a successful initialization result: both bound sides of
/// (i, s) adopt the stabilizing agent. Requires every stabilizer to lie in
/// the d-hop neighborhood.
SelectionAssignment hstar_from_assignment(const CpdnResult& cpdn,
                                          const std::vector<AgentGains>& gains,
                                          const Digraph& graph, int d);

struct StabilityCertificate {
  enum class Kind { infnorm, spectral_radius, lower_spectral_radius };
  Kind kind;
  double value = 0.0;
  SelectionAssignment assignment;
  bool stable = false;      // value < 1 - 1e-9
  bool converged = true;    // false when an iterative estimate hit its cap
};

inline constexpr double kStabilityMargin = 1.0 - 1e-9;

/// H Ahat assembled by row selection, without materializing the dense H.
Matrix apply_selection(const SelectionAssignment& h, const Matrix& ahat);

/// max row 1-norm of H Ahat; a Schur certificate whenever it is below one.
StabilityCertificate infnorm_certificate(const SelectionAssignment& h, const Matrix& ahat);

struct SpectralRadiusResult {
  double value = 0.0;
  Vector eigenvector;   // nonnegative direction from the power iteration
  bool converged = true;
};

/// Spectral radius of a nonnegative matrix by shifted power iteration
/// (iterate (M + I) v, report the Rayleigh growth of M). Nilpotent matrices
/// are detected by repeated squaring up to an exponent >= dim and reported
/// as exactly zero.
SpectralRadiusResult spectral_radius(const Matrix& m, int max_iterations = 100000,
                                     double tolerance = 1e-10);

StabilityCertificate spectral_radius_certificate(const SelectionAssignment& h,
                                                 const Matrix& ahat);

/// Minimum spectral radius over an independent-row uncertainty set: row r of
/// the matrix is chosen from the rows of row_candidates[r]. Exhaustive vertex
/// enumeration when the product of candidate counts fits the budget,
/// otherwise policy iteration on the monotone per-row-min map, refined by a
/// value-iteration sweep. Returns the chosen candidate per row.
struct LsrResult {
  double value = 0.0;
  std::vector<int> choice;
  bool warning = false;  // cycle detected or iteration cap hit
};

LsrResult lower_spectral_radius(const std::vector<Matrix>& row_candidates,
                                long max_exhaustive = 1000000);

/// Lower-spectral-radius certificate over the d-hop selection set for the
/// given gains; the minimizing selection is returned as the assignment.
StabilityCertificate lsr_certificate(const std::vector<AgentGains>& gains, const Digraph& graph,
                                     int d, long max_exhaustive = 1000000);

/// Selection realized at runtime from the agents' pre-network framers: the
/// lower side adopts the smallest-index maximizer of the lower framer over
/// the d-hop neighborhood, the upper side the smallest-index minimizer of
/// the upper framer.
SelectionAssignment realized_selection(const std::vector<IntervalVector>& pre_network_framers,
                                       const Digraph& graph, int d);

}  // namespace dio
