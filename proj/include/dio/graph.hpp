#pragma once

#include <utility>
#include <vector>

#include "dio/types.hpp"

namespace dio {

/// Time-invariant directed communication graph. Every node carries an
/// implicit self-loop; explicit (i, i) edges in the input are deduplicated.
///
/// Edge (i, j) means j is a neighbor of i: agent i reads agent j's values,
/// so in a message pass j sends to i.
class Digraph {
 public:
  Digraph(int node_count, const std::vector<std::pair<int, int>>& edges);

  static Digraph complete(int node_count);
  static Digraph directed_ring(int node_count);

  int node_count() const { return static_cast<int>(adjacency_.size()); }

  /// {j : (i, j) in E} together with i itself; sorted.
  const std::vector<int>& neighbors(int i) const;

  /// Nodes reachable from i by a path of length at most d; sorted.
  /// d = 0 gives {i}.
  std::vector<int> dhop(int i, int d) const;

  /// Same set as dhop, as (node, distance) pairs ordered by distance then
  /// node index.
  std::vector<std::pair<int, int>> dhop_with_distance(int i, int d) const;

  /// Longest shortest directed path over all ordered pairs. Throws
  /// NotStronglyConnectedError when some node cannot reach another.
  int diameter() const;

 private:
  void check_node(int i) const;

  std::vector<std::vector<int>> adjacency_;  // sorted, self-loop included
};

}  // namespace dio
