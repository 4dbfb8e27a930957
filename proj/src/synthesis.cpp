#include "dio/synthesis.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <utility>

namespace dio {

namespace {

void check_design_inputs(const Matrix& A, const Matrix& C_i) {
  if (A.rows() != A.cols() || A.rows() == 0) {
    throw InvalidInputError("design_gains: A must be square and nonempty");
  }
  if (C_i.cols() != A.rows() || C_i.rows() == 0) {
    throw InvalidInputError("design_gains: C has incompatible shape");
  }
  if (!all_finite(A) || !all_finite(C_i)) {
    throw InvalidInputError("design_gains: non-finite input");
  }
}

}  // namespace

RowGainResult design_gains_row(const Matrix& A, const Matrix& C_i, int s) {
  check_design_inputs(A, C_i);
  const Index n = A.rows();
  const Index m = C_i.rows();
  if (s < 0 || s >= n) {
    throw InvalidInputError("design_gains_row: state index out of range");
  }
  const Matrix CA = C_i * A;

  // Variables [Gamma_s (m) | L_s (m) | E (n)], epigraph on the residual
  // A_s - Gamma_s CA - L_s C.
  const Index nv = 2 * m + n;
  LinearProgram lp;
  lp.objective = Vector::Zero(nv);
  lp.objective.segment(2 * m, n).setOnes();
  lp.ineq_lhs = Matrix::Zero(2 * n, nv);
  lp.ineq_rhs = Vector::Zero(2 * n);
  for (Index t = 0; t < n; ++t) {
    for (Index j = 0; j < m; ++j) {
      lp.ineq_lhs(t, j) = -CA(j, t);
      lp.ineq_lhs(t, m + j) = -C_i(j, t);
      lp.ineq_lhs(n + t, j) = CA(j, t);
      lp.ineq_lhs(n + t, m + j) = C_i(j, t);
    }
    lp.ineq_lhs(t, 2 * m + t) = -1.0;
    lp.ineq_lhs(n + t, 2 * m + t) = -1.0;
    lp.ineq_rhs(t) = -A(s, t);
    lp.ineq_rhs(n + t) = A(s, t);
  }

  LpSolution sol = solve_lp(lp);
  if (sol.status != LpStatus::optimal) {
    // The epigraph LP is always feasible and bounded below by zero.
    throw LpPivotError("design_gains_row: LP did not reach an optimum");
  }
  RowGainResult result;
  result.gamma_row = sol.z.segment(0, m);
  result.l_row = sol.z.segment(m, m);
  result.min_norm = sol.objective;
  return result;
}

AgentGains design_gains(const Matrix& A, const Matrix& C_i) {
  check_design_inputs(A, C_i);
  const Index n = A.rows();
  const Index m = C_i.rows();

  AgentGains g;
  g.Gamma = Matrix::Zero(n, m);
  g.L = Matrix::Zero(n, m);
  for (Index s = 0; s < n; ++s) {
    RowGainResult row = design_gains_row(A, C_i, static_cast<int>(s));
    g.Gamma.row(s) = row.gamma_row.transpose();
    g.L.row(s) = row.l_row.transpose();
  }
  g.T = Matrix::Identity(n, n) - g.Gamma * C_i;
  g.A_tilde = g.T * A - g.L * C_i;
  g.row_norms = g.A_tilde.cwiseAbs().rowwise().sum();
  return g;
}

namespace {

struct QEntry {
  Matrix a_tilde;
  int hops;
};

using QSet = std::map<int, QEntry>;  // keyed by origin agent

bool covers_all_states(const QSet& q, Index n) {
  for (Index s = 0; s < n; ++s) {
    bool found = false;
    for (const auto& [origin, entry] : q) {
      if (entry.a_tilde.row(s).cwiseAbs().sum() <= kStabilizingRowNormBound) {
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

std::vector<int> origins_of(const QSet& q) {
  std::vector<int> keys;
  keys.reserve(q.size());
  for (const auto& [origin, entry] : q) keys.push_back(origin);
  return keys;
}

}  // namespace

CpdnResult run_cpdn_init(const Digraph& graph, const std::vector<AgentGains>& gains) {
  const int node_count = graph.node_count();
  if (static_cast<int>(gains.size()) != node_count) {
    throw InvalidInputError("run_cpdn_init: one gain set per node required");
  }
  const Index n = gains.empty() ? 0 : gains[0].A_tilde.rows();
  for (const AgentGains& g : gains) {
    if (g.A_tilde.rows() != n || g.A_tilde.cols() != n) {
      throw InvalidInputError("run_cpdn_init: closed-loop matrices disagree in dimension");
    }
  }
  const int diam = graph.diameter();

  std::vector<QSet> q(node_count);
  for (int i = 0; i < node_count; ++i) {
    q[i].emplace(i, QEntry{gains[i].A_tilde, 0});
  }

  CpdnResult result;
  result.round_trace.push_back({});
  for (int i = 0; i < node_count; ++i) result.round_trace.back().push_back(origins_of(q[i]));

  std::vector<int> local_d(node_count, -1);
  std::vector<bool> failed(node_count, false);
  int exchanges = 0;
  while (true) {
    for (int i = 0; i < node_count; ++i) {
      if (local_d[i] < 0 && covers_all_states(q[i], n)) {
        local_d[i] = std::max(1, exchanges);
      }
    }
    bool all_done = std::all_of(local_d.begin(), local_d.end(), [](int d) { return d >= 0; });
    if (all_done) break;
    if (exchanges == diam) {
      for (int i = 0; i < node_count; ++i) {
        if (local_d[i] < 0) {
          local_d[i] = diam + 1;
          failed[i] = true;
        }
      }
      break;
    }
    // Synchronous exchange; finished nodes keep relaying so multi-hop
    // accumulation stays exact for everyone else.
    std::vector<QSet> next = q;
    for (int i = 0; i < node_count; ++i) {
      for (int j : graph.neighbors(i)) {
        if (j == i) continue;
        for (const auto& [origin, entry] : q[j]) {
          auto [it, inserted] = next[i].emplace(origin, QEntry{entry.a_tilde, entry.hops + 1});
          if (!inserted && entry.hops + 1 < it->second.hops) {
            it->second.hops = entry.hops + 1;
          }
        }
      }
    }
    q = std::move(next);
    ++exchanges;
    result.round_trace.push_back({});
    for (int i = 0; i < node_count; ++i) result.round_trace.back().push_back(origins_of(q[i]));
  }

  // Max consensus over diameter rounds on (round count, failure flag).
  std::vector<int> d = local_d;
  std::vector<bool> fail_flag = failed;
  for (int round = 0; round < diam; ++round) {
    std::vector<int> next_d = d;
    std::vector<bool> next_fail = fail_flag;
    for (int i = 0; i < node_count; ++i) {
      for (int j : graph.neighbors(i)) {
        next_d[i] = std::max(next_d[i], d[j]);
        next_fail[i] = next_fail[i] || fail_flag[j];
      }
    }
    d = std::move(next_d);
    fail_flag = std::move(next_fail);
  }
  result.d_star = d[0];
  result.success = !fail_flag[0];

  // Stabilizer map: smallest hop distance first, then smallest agent index.
  result.stabilizer = Eigen::MatrixXi::Constant(node_count, n, -1);
  result.stabilizer_hops = Eigen::MatrixXi::Constant(node_count, n, -1);
  for (int i = 0; i < node_count; ++i) {
    for (Index s = 0; s < n; ++s) {
      int best_origin = -1;
      int best_hops = -1;
      for (const auto& [origin, entry] : q[i]) {
        if (result.success && entry.hops > result.d_star) continue;
        if (entry.a_tilde.row(s).cwiseAbs().sum() > kStabilizingRowNormBound) continue;
        if (best_origin < 0 || entry.hops < best_hops ||
            (entry.hops == best_hops && origin < best_origin)) {
          best_origin = origin;
          best_hops = entry.hops;
        }
      }
      result.stabilizer(i, s) = best_origin;
      result.stabilizer_hops(i, s) = best_hops;
    }
  }
  return result;
}

}  // namespace dio
