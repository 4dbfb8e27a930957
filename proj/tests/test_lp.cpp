#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "dio/lp.hpp"
#include "oracles.hpp"
#include "random_systems.hpp"

using dio::LinearProgram;
using dio::LpStatus;
using dio::Matrix;
using dio::Vector;

namespace {

// min c'z s.t. G z <= h with no equalities.
LinearProgram make_lp(const Matrix& g, const Vector& h, const Vector& c) {
  return {c, g, h, Matrix(0, c.size()), Vector(0)};
}

}  // namespace

TEST_CASE("textbook one-variable maximum") {
  Matrix g(2, 1);
  g << 1, -1;  // z <= 5, -z <= 0
  Vector h(2);
  h << 5, 0;
  Vector c(1);
  c << -1;
  auto sol = dio::solve_lp(make_lp(g, h, c));
  REQUIRE(sol.status == LpStatus::optimal);
  CHECK(sol.z(0) == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(sol.objective == doctest::Approx(-5.0).epsilon(1e-12));
}

TEST_CASE("simplex on a two-variable covering problem") {
  Matrix g(3, 2);
  g << -1, 0, 0, -1, -1, -1;  // z >= 0, z1 + z2 >= 1
  Vector h(3);
  h << 0, 0, -1;
  Vector c(2);
  c << 1, 1;
  auto sol = dio::solve_lp(make_lp(g, h, c));
  REQUIRE(sol.status == LpStatus::optimal);
  CHECK(sol.objective == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("infeasible system is reported, not thrown") {
  Matrix g(2, 1);
  g << 1, -1;  // z <= -1, z >= 0
  Vector h(2);
  h << -1, 0;
  Vector c(1);
  c << 0;
  CHECK(dio::solve_lp(make_lp(g, h, c)).status == LpStatus::infeasible);
}

TEST_CASE("unbounded direction is reported") {
  Matrix g(1, 1);
  g << -1;  // z >= 0, minimize -z
  Vector h(1);
  h << 0;
  Vector c(1);
  c << -1;
  CHECK(dio::solve_lp(make_lp(g, h, c)).status == LpStatus::unbounded);
}

TEST_CASE("equality constraints are honored") {
  // min z1 + z2 s.t. z1 + z2 = 2, z >= -10 (box keeps it pointed)
  LinearProgram lp;
  lp.objective = Vector(2);
  lp.objective << 1, 1;
  lp.ineq_lhs = Matrix(2, 2);
  lp.ineq_lhs << -1, 0, 0, -1;
  lp.ineq_rhs = Vector(2);
  lp.ineq_rhs << 10, 10;
  lp.eq_lhs = Matrix(1, 2);
  lp.eq_lhs << 1, 1;
  lp.eq_rhs = Vector(1);
  lp.eq_rhs << 2;
  auto sol = dio::solve_lp(lp);
  REQUIRE(sol.status == LpStatus::optimal);
  CHECK(sol.objective == doctest::Approx(2.0).epsilon(1e-12));
  CHECK((lp.eq_lhs * sol.z - lp.eq_rhs).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("tiny pivots raise the degenerate-pivot error") {
  Matrix g(1, 1);
  g << 5e-13;  // the only candidate pivot is below the 1e-12 threshold
  Vector h(1);
  h << 1;
  Vector c(1);
  c << -1;
  CHECK_THROWS_AS(dio::solve_lp(make_lp(g, h, c)), dio::LpPivotError);
}

TEST_CASE("repeated solves are bit-identical") {
  std::mt19937_64 rng(71);
  Matrix g = dio::testing::random_matrix(rng, 6, 3, 2.0);
  Vector h = dio::testing::random_vector(rng, 6, 2.0).cwiseAbs() + Vector::Ones(6);
  Vector c = dio::testing::random_vector(rng, 3, 1.0);
  // box to keep it bounded
  Matrix box(6, 3);
  box << Matrix::Identity(3, 3), -Matrix::Identity(3, 3);
  Matrix g_full(12, 3);
  g_full << g, box;
  Vector h_full(12);
  h_full << h, Vector::Constant(6, 10.0);

  auto first = dio::solve_lp(make_lp(g_full, h_full, c));
  auto second = dio::solve_lp(make_lp(g_full, h_full, c));
  REQUIRE(first.status == LpStatus::optimal);
  REQUIRE(second.status == LpStatus::optimal);
  CHECK(first.z == second.z);
  CHECK(first.objective == second.objective);
}

TEST_CASE("simplex matches vertex enumeration on random bounded problems") {
  std::mt19937_64 rng(101);
  int solved = 0;
  while (solved < 100) {
    const int nv = dio::testing::uniform_int(rng, 2, 4);
    const int extra_rows = dio::testing::uniform_int(rng, 1, 5);
    Matrix g(extra_rows + 2 * nv, nv);
    Vector h(extra_rows + 2 * nv);
    g.topRows(extra_rows) = dio::testing::random_matrix(rng, extra_rows, nv, 2.0);
    // feasible by construction: constraints hold at a random interior point
    Vector interior = dio::testing::random_vector(rng, nv, 1.0);
    for (int r = 0; r < extra_rows; ++r) {
      h(r) = g.row(r).dot(interior) + dio::testing::uniform(rng, 0.1, 2.0);
    }
    g.middleRows(extra_rows, nv) = Matrix::Identity(nv, nv);
    g.bottomRows(nv) = -Matrix::Identity(nv, nv);
    h.segment(extra_rows, nv) = interior + Vector::Constant(nv, 3.0);
    h.tail(nv) = Vector::Constant(nv, 3.0) - interior;
    Vector c = dio::testing::random_vector(rng, nv, 1.0);

    auto sol = dio::solve_lp(make_lp(g, h, c));
    REQUIRE(sol.status == LpStatus::optimal);
    auto oracle = dio::testing::enumerate_lp_vertices(make_lp(g, h, c));
    REQUIRE(oracle.feasible_vertex_found);
    const double scale = std::max(1.0, std::abs(oracle.objective));
    CHECK(std::abs(sol.objective - oracle.objective) / scale < 1e-6);
    ++solved;
  }
}

TEST_CASE("twelve-variable problems stay consistent with enumeration") {
  // Simplex-shaped region (z >= -1, sum z <= 5) plus random cuts keeps the
  // vertex count enumerable at this dimension.
  std::mt19937_64 rng(131);
  for (int trial = 0; trial < 10; ++trial) {
    const int nv = 12;
    const int cuts = dio::testing::uniform_int(rng, 1, 2);
    Matrix g(nv + 1 + cuts, nv);
    Vector h(nv + 1 + cuts);
    g.topRows(nv) = -Matrix::Identity(nv, nv);
    h.head(nv) = Vector::Constant(nv, 1.0);
    g.row(nv) = Vector::Ones(nv).transpose();
    h(nv) = 5.0;
    for (int r = 0; r < cuts; ++r) {
      g.row(nv + 1 + r) = dio::testing::random_vector(rng, nv, 1.0).transpose();
      h(nv + 1 + r) = g.row(nv + 1 + r).dot(Vector::Zero(nv)) +
                      dio::testing::uniform(rng, 0.5, 2.0);  // keeps the origin feasible
    }
    Vector c = dio::testing::random_vector(rng, nv, 1.0);
    auto sol = dio::solve_lp(make_lp(g, h, c));
    REQUIRE(sol.status == LpStatus::optimal);
    auto oracle = dio::testing::enumerate_lp_vertices(make_lp(g, h, c));
    REQUIRE(oracle.feasible_vertex_found);
    const double scale = std::max(1.0, std::abs(oracle.objective));
    CHECK(std::abs(sol.objective - oracle.objective) / scale < 1e-6);
  }
}
