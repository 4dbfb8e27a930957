#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <vector>

#include "dio/synthesis.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "random_systems.hpp"

using dio::AgentGains;
using dio::Matrix;
using dio::Vector;

namespace {

// Monolithic form of the gain-design LP over [E | Gamma | L] (row-major
// vec), used only to cross-check the per-row decomposition.
dio::LinearProgram monolithic_design_lp(const Matrix& a, const Matrix& c) {
  const dio::Index n = a.rows();
  const dio::Index m = c.rows();
  const Matrix ca = c * a;
  const dio::Index nv = n * n + 2 * n * m;
  auto e_col = [&](dio::Index s, dio::Index t) { return s * n + t; };
  auto gamma_col = [&](dio::Index s, dio::Index j) { return n * n + s * m + j; };
  auto l_col = [&](dio::Index s, dio::Index j) { return n * n + n * m + s * m + j; };

  dio::LinearProgram lp;
  lp.objective = Vector::Zero(nv);
  lp.objective.head(n * n).setOnes();
  lp.ineq_lhs = Matrix::Zero(2 * n * n, nv);
  lp.ineq_rhs = Vector::Zero(2 * n * n);
  dio::Index row = 0;
  for (dio::Index s = 0; s < n; ++s) {
    for (dio::Index t = 0; t < n; ++t) {
      // (A - Gamma CA - L C)(s,t) <= E(s,t) and >= -E(s,t)
      for (dio::Index j = 0; j < m; ++j) {
        lp.ineq_lhs(row, gamma_col(s, j)) = -ca(j, t);
        lp.ineq_lhs(row, l_col(s, j)) = -c(j, t);
        lp.ineq_lhs(row + 1, gamma_col(s, j)) = ca(j, t);
        lp.ineq_lhs(row + 1, l_col(s, j)) = c(j, t);
      }
      lp.ineq_lhs(row, e_col(s, t)) = -1.0;
      lp.ineq_rhs(row) = -a(s, t);
      lp.ineq_lhs(row + 1, e_col(s, t)) = -1.0;
      lp.ineq_rhs(row + 1) = a(s, t);
      row += 2;
    }
  }
  return lp;
}

Vector row_norms_of(const Matrix& m) { return m.cwiseAbs().rowwise().sum(); }

}  // namespace

TEST_CASE("example-1 gain design reproduces the known row norms") {
  dio::testing::Example1 ex;
  AgentGains g1 = dio::design_gains(ex.A, ex.C[0]);
  AgentGains g2 = dio::design_gains(ex.A, ex.C[1]);
  AgentGains g3 = dio::design_gains(ex.A, ex.C[2]);

  Vector expected1(4), expected2(4), expected3(4);
  expected1 << 0, 2, 0, 1;
  expected2 << 2, 0, 1, 0;
  expected3 << 2, 2, 1, 1;
  CHECK((g1.row_norms - expected1).cwiseAbs().maxCoeff() < 1e-9);
  CHECK((g2.row_norms - expected2).cwiseAbs().maxCoeff() < 1e-9);
  CHECK((g3.row_norms - expected3).cwiseAbs().maxCoeff() < 1e-9);
  CHECK(g1.row_norms.sum() == doctest::Approx(3.0).epsilon(1e-9));

  // the printed gains attain exactly these row norms
  for (int i = 0; i < 3; ++i) {
    Matrix t_printed = Matrix::Identity(4, 4) - ex.Gamma_printed[i] * ex.C[i];
    Matrix a_tilde_printed = t_printed * ex.A - ex.L_printed[i] * ex.C[i];
    Vector printed_norms = row_norms_of(a_tilde_printed);
    AgentGains designed = dio::design_gains(ex.A, ex.C[i]);
    CHECK((printed_norms - designed.row_norms).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("gain identities hold exactly as stored") {
  dio::testing::Example1 ex;
  for (int i = 0; i < 3; ++i) {
    AgentGains g = dio::design_gains(ex.A, ex.C[i]);
    Matrix t_recomputed = Matrix::Identity(4, 4) - g.Gamma * ex.C[i];
    Matrix a_recomputed = g.T * ex.A - g.L * ex.C[i];
    CHECK((g.T - t_recomputed).cwiseAbs().maxCoeff() == 0.0);
    CHECK((g.A_tilde - a_recomputed).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("per-row oracle agrees with design_gains_row on example 1") {
  dio::testing::Example1 ex;
  auto row0 = dio::design_gains_row(ex.A, ex.C[0], 0);
  CHECK(row0.min_norm == doctest::Approx(0.0).epsilon(1e-9));
  auto row1 = dio::design_gains_row(ex.A, ex.C[0], 1);
  CHECK(row1.min_norm == doctest::Approx(2.0).epsilon(1e-9));

  // independent vertex-enumeration oracle on the same epigraph LP, per row
  for (int agent = 0; agent < 3; ++agent) {
    for (int s = 0; s < 4; ++s) {
      auto designed = dio::design_gains_row(ex.A, ex.C[agent], s);
      const Matrix ca = ex.C[agent] * ex.A;
      dio::LinearProgram lp;
      const dio::Index nv = 2 + 4;  // gamma, l, epigraph
      lp.objective = Vector::Zero(nv);
      lp.objective.tail(4).setOnes();
      lp.ineq_lhs = Matrix::Zero(8 + 2, nv);
      lp.ineq_rhs = Vector::Zero(8 + 2);
      for (dio::Index t = 0; t < 4; ++t) {
        lp.ineq_lhs(t, 0) = -ca(0, t);
        lp.ineq_lhs(t, 1) = -ex.C[agent](0, t);
        lp.ineq_lhs(t, 2 + t) = -1.0;
        lp.ineq_rhs(t) = -ex.A(s, t);
        lp.ineq_lhs(4 + t, 0) = ca(0, t);
        lp.ineq_lhs(4 + t, 1) = ex.C[agent](0, t);
        lp.ineq_lhs(4 + t, 2 + t) = -1.0;
        lp.ineq_rhs(4 + t) = ex.A(s, t);
      }
      // box on gamma and l keeps the region pointed for the oracle
      lp.ineq_lhs(8, 0) = 1.0;
      lp.ineq_rhs(8) = 100.0;
      lp.ineq_lhs(9, 1) = 1.0;
      lp.ineq_rhs(9) = 100.0;
      auto oracle = dio::testing::enumerate_lp_vertices(lp);
      REQUIRE(oracle.feasible_vertex_found);
      CHECK(designed.min_norm == doctest::Approx(oracle.objective).epsilon(1e-6));
    }
  }
}

TEST_CASE("zero row of A needs no correction") {
  std::mt19937_64 rng(17);
  Matrix a = dio::testing::random_matrix(rng, 3, 3, 1.0);
  a.row(1).setZero();
  Matrix c = dio::testing::random_matrix(rng, 1, 3, 1.0);
  auto row = dio::design_gains_row(a, c, 1);
  CHECK(row.min_norm == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("full observation zeroes every row") {
  std::mt19937_64 rng(19);
  Matrix a = dio::testing::random_matrix(rng, 4, 4, 1.5);
  AgentGains g = dio::design_gains(a, Matrix::Identity(4, 4));
  CHECK(g.row_norms.maxCoeff() < 1e-9);
}

TEST_CASE("row decomposition matches the monolithic LP") {
  dio::testing::Example1 ex;
  for (int agent = 0; agent < 3; ++agent) {
    AgentGains g = dio::design_gains(ex.A, ex.C[agent]);
    auto sol = dio::solve_lp(monolithic_design_lp(ex.A, ex.C[agent]));
    REQUIRE(sol.status == dio::LpStatus::optimal);
    CHECK(g.row_norms.sum() == doctest::Approx(sol.objective).epsilon(1e-6));
  }

  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = dio::testing::uniform_int(rng, 2, 4);
    const int m = dio::testing::uniform_int(rng, 1, 2);
    Matrix a = dio::testing::random_matrix(rng, n, n, 1.5);
    Matrix c = dio::testing::random_matrix(rng, m, n, 1.0);
    AgentGains g = dio::design_gains(a, c);
    auto sol = dio::solve_lp(monolithic_design_lp(a, c));
    REQUIRE(sol.status == dio::LpStatus::optimal);
    CHECK(g.row_norms.sum() == doctest::Approx(sol.objective).epsilon(1e-6));
  }
}

TEST_CASE("example-2 gains zero out the owned block only") {
  dio::testing::Example2 ex;
  for (int i = 0; i < 6; ++i) {
    AgentGains g = dio::design_gains(ex.A, ex.C[i]);
    for (int s = 0; s < 12; ++s) {
      if (s / 2 == i) {
        CHECK(g.row_norms(s) == 0.0);  // own block rows vanish exactly
      } else {
        const double expected = s % 2 == 0 ? 1.01 : 1.0;
        CHECK(g.row_norms(s) == doctest::Approx(expected).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("initialization on example 1: one round, alternating stabilizers") {
  dio::testing::Example1 ex;
  std::vector<AgentGains> gains;
  for (int i = 0; i < 3; ++i) gains.push_back(dio::design_gains(ex.A, ex.C[i]));
  auto cpdn = dio::run_cpdn_init(ex.graph(), gains);
  REQUIRE(cpdn.success);
  CHECK(cpdn.d_star == 1);
  for (int i = 0; i < 3; ++i) {
    CHECK(cpdn.stabilizer(i, 0) == 0);
    CHECK(cpdn.stabilizer(i, 1) == 1);
    CHECK(cpdn.stabilizer(i, 2) == 0);
    CHECK(cpdn.stabilizer(i, 3) == 1);
  }
}

TEST_CASE("initialization on example 2 runs the full ring") {
  dio::testing::Example2 ex;
  std::vector<AgentGains> gains;
  for (int i = 0; i < 6; ++i) gains.push_back(dio::design_gains(ex.A, ex.C[i]));
  auto cpdn = dio::run_cpdn_init(ex.graph(), gains);
  REQUIRE(cpdn.success);
  CHECK(cpdn.d_star == 5);
  // state s belongs to block s/2 and only that agent stabilizes it
  for (int i = 0; i < 6; ++i) {
    for (int s = 0; s < 12; ++s) {
      CHECK(cpdn.stabilizer(i, s) == s / 2);
      CHECK(cpdn.stabilizer_hops(i, s) == (s / 2 - i + 6) % 6);
    }
  }
}

TEST_CASE("single agent with full observation initializes to one round") {
  Matrix a(2, 2);
  a << 0.4, 2.0, 0.0, 0.9;
  std::vector<AgentGains> gains{dio::design_gains(a, Matrix::Identity(2, 2))};
  auto cpdn = dio::run_cpdn_init(dio::Digraph(1, {}), gains);
  REQUIRE(cpdn.success);
  CHECK(cpdn.d_star == 1);
  CHECK(cpdn.stabilizer(0, 0) == 0);
  CHECK(cpdn.stabilizer(0, 1) == 0);
}

TEST_CASE("failure is a value, not an error") {
  // two agents, no useful measurements, expanding dynamics
  Matrix a(2, 2);
  a << 1.5, 0, 0, 1.5;
  Matrix c = Matrix::Zero(1, 2);
  std::vector<AgentGains> gains{dio::design_gains(a, c), dio::design_gains(a, c)};
  auto cpdn = dio::run_cpdn_init(dio::Digraph::complete(2), gains);
  CHECK_FALSE(cpdn.success);
  CHECK(cpdn.d_star == dio::Digraph::complete(2).diameter() + 1);
  CHECK(cpdn.stabilizer(0, 0) == -1);
}

TEST_CASE("initialization success matches a direct global search") {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 60; ++trial) {
    auto system = dio::testing::random_system(rng);
    auto cpdn = dio::run_cpdn_init(system.graph, system.gains);

    const int diam = system.graph.diameter();
    bool expected_success = true;
    for (int i = 0; i < system.graph.node_count() && expected_success; ++i) {
      std::vector<int> hood = system.graph.dhop(i, diam);
      for (dio::Index s = 0; s < system.plant.state_dim() && expected_success; ++s) {
        bool found = false;
        for (int j : hood) {
          if (system.gains[j].row_norms(s) <= dio::kStabilizingRowNormBound) {
            found = true;
            break;
          }
        }
        expected_success = found;
      }
    }
    CHECK(cpdn.success == expected_success);

    if (cpdn.success) {
      CHECK(cpdn.d_star <= std::max(1, diam));
      for (int i = 0; i < system.graph.node_count(); ++i) {
        std::vector<int> hood = system.graph.dhop(i, cpdn.d_star);
        for (dio::Index s = 0; s < system.plant.state_dim(); ++s) {
          const int source = cpdn.stabilizer(i, s);
          REQUIRE(source >= 0);
          CHECK(std::binary_search(hood.begin(), hood.end(), source));
          CHECK(system.gains[source].row_norms(s) <= dio::kStabilizingRowNormBound);
        }
      }
    } else {
      CHECK(cpdn.d_star == diam + 1);
    }
  }
}

TEST_CASE("round trace starts from the own matrix and grows monotonically") {
  dio::testing::Example2 ex;
  std::vector<AgentGains> gains;
  for (int i = 0; i < 6; ++i) gains.push_back(dio::design_gains(ex.A, ex.C[i]));
  auto cpdn = dio::run_cpdn_init(ex.graph(), gains);
  REQUIRE(cpdn.round_trace.size() >= 2);
  for (int i = 0; i < 6; ++i) {
    CHECK(cpdn.round_trace[0][i] == std::vector<int>{i});
  }
  for (size_t t = 1; t < cpdn.round_trace.size(); ++t) {
    for (int i = 0; i < 6; ++i) {
      CHECK(cpdn.round_trace[t][i].size() >= cpdn.round_trace[t - 1][i].size());
    }
  }
}
