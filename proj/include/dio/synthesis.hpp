#pragma once

#include <vector>

#include "dio/graph.hpp"
#include "dio/lp.hpp"
#include "dio/types.hpp"

namespace dio {

/// Observer gains for one agent. T and A_tilde are stored exactly as
/// T = I - Gamma C and A_tilde = T A - L C; row_norms[s] = ||A_tilde_s||_1.
struct AgentGains {
  Matrix L;
  Matrix Gamma;
  Matrix T;
  Matrix A_tilde;
  Vector row_norms;
};

/// Row s sub-problem of the gain design: minimize the 1-norm of
/// A_s - Gamma_s (C A) - L_s C over (Gamma_s, L_s), solved as an epigraph LP.
struct RowGainResult {
  Vector gamma_row;  // m_i
  Vector l_row;      // m_i
  double min_norm;
};

RowGainResult design_gains_row(const Matrix& A, const Matrix& C_i, int s);

/// Full gain design for one agent: the LP decomposes by row because the s-th
/// rows of Gamma and L only affect the s-th row of the closed-loop matrix,
/// so each row is solved independently at the global optimum.
AgentGains design_gains(const Matrix& A, const Matrix& C_i);

/// A row with 1-norm below this qualifier counts as stabilizing; the strict
/// threshold keeps rows at exactly 1 from being accepted due to rounding.
inline constexpr double kStabilizingRowNormBound = 1.0 - 1e-9;

/// Outcome of the distributed initialization protocol: the common number of
/// network rounds d*, and for every (agent, state) a stabilizing source agent
/// whose closed-loop row for that state has 1-norm below one.
struct CpdnResult {
  int d_star = 0;         // diameter + 1 on failure
  bool success = false;
  Eigen::MatrixXi stabilizer;       // N x n, source agent, -1 where none found
  Eigen::MatrixXi stabilizer_hops;  // N x n, hop distance of the source, -1 where none
  // Per exchange round, per node: sorted origin agents present in Q_i.
  std::vector<std::vector<std::vector<int>>> round_trace;
};

/// Synchronous message-passing simulation of the initialization protocol:
/// every node starts from its own closed-loop matrix, repeatedly merges the
/// neighbors' sets until each state has a qualifying row, then max-consensus
/// over diameter rounds aligns the local round counts. Nodes keep relaying
/// after they individually finish so that multi-hop accumulation stays exact.
/// Failure (some state unreachable within diameter hops) is returned as
/// d_star = diameter + 1 with success = false, never thrown.
CpdnResult run_cpdn_init(const Digraph& graph, const std::vector<AgentGains>& gains);

}  // namespace dio
