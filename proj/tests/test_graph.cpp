#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "dio/graph.hpp"
#include "random_systems.hpp"

using dio::Digraph;

TEST_CASE("neighbors on the bundled topologies") {
  Digraph ring = Digraph::directed_ring(6);
  CHECK(ring.neighbors(0) == std::vector<int>{0, 1});
  CHECK(ring.neighbors(5) == std::vector<int>{0, 5});

  Digraph complete = Digraph::complete(3);
  CHECK(complete.neighbors(0) == std::vector<int>{0, 1, 2});

  Digraph isolated(3, {});
  CHECK(isolated.neighbors(1) == std::vector<int>{1});

  CHECK_THROWS_AS(ring.neighbors(6), dio::InvalidInputError);
}

TEST_CASE("explicit self-loops are deduplicated") {
  Digraph g(2, {{0, 0}, {0, 1}, {0, 1}});
  CHECK(g.neighbors(0) == std::vector<int>{0, 1});
}

TEST_CASE("dhop on the directed ring") {
  Digraph ring = Digraph::directed_ring(6);
  CHECK(ring.dhop(0, 0) == std::vector<int>{0});
  CHECK(ring.dhop(0, 2) == std::vector<int>{0, 1, 2});
  CHECK(ring.dhop(0, 5) == std::vector<int>{0, 1, 2, 3, 4, 5});
  CHECK(ring.dhop(4, 2) == std::vector<int>{0, 4, 5});
}

TEST_CASE("diameter examples") {
  CHECK(Digraph::complete(4).diameter() == 1);
  CHECK(Digraph::directed_ring(6).diameter() == 5);
  CHECK(Digraph(1, {}).diameter() == 0);

  Digraph broken(2, {{0, 1}});  // no path back from 1 to 0
  CHECK_THROWS_AS(broken.diameter(), dio::NotStronglyConnectedError);
}

TEST_CASE("dhop is monotone and reaches everything at the diameter") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    Digraph g = dio::testing::random_strongly_connected(rng, dio::testing::uniform_int(rng, 1, 7));
    const int diam = g.diameter();
    for (int i = 0; i < g.node_count(); ++i) {
      std::vector<int> previous = g.dhop(i, 0);
      for (int d = 1; d <= diam; ++d) {
        std::vector<int> current = g.dhop(i, d);
        CHECK(std::includes(current.begin(), current.end(), previous.begin(), previous.end()));
        previous = current;
      }
      CHECK(static_cast<int>(previous.size()) == g.node_count());
    }
  }
}

TEST_CASE("dhop agrees with repeated one-hop expansion") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 50; ++trial) {
    Digraph g = dio::testing::random_strongly_connected(rng, dio::testing::uniform_int(rng, 2, 6));
    const int d = dio::testing::uniform_int(rng, 0, g.diameter());
    for (int i = 0; i < g.node_count(); ++i) {
      std::set<int> expanded{i};
      for (int t = 0; t < d; ++t) {
        std::set<int> next;
        for (int u : expanded) {
          for (int v : g.neighbors(u)) next.insert(v);
        }
        expanded = next;
      }
      std::vector<int> expected(expanded.begin(), expanded.end());
      CHECK(g.dhop(i, d) == expected);
    }
  }
}

TEST_CASE("dhop_with_distance orders by hop then index") {
  Digraph ring = Digraph::directed_ring(4);
  auto hood = ring.dhop_with_distance(2, 2);
  std::vector<std::pair<int, int>> expected{{2, 0}, {3, 1}, {0, 2}};
  CHECK(hood == expected);
}
