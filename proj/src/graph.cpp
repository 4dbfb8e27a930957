#include "dio/graph.hpp"

#include <algorithm>
#include <deque>
#include <string>

namespace dio {

Digraph::Digraph(int node_count, const std::vector<std::pair<int, int>>& edges) {
  if (node_count <= 0) {
    throw InvalidInputError("Digraph: node_count must be positive");
  }
  adjacency_.resize(node_count);
  for (int i = 0; i < node_count; ++i) {
    adjacency_[i].push_back(i);
  }
  for (const auto& [i, j] : edges) {
    if (i < 0 || i >= node_count || j < 0 || j >= node_count) {
      throw InvalidInputError("Digraph: edge (" + std::to_string(i) + ", " + std::to_string(j) +
                              ") out of range");
    }
    adjacency_[i].push_back(j);
  }
  for (auto& nbrs : adjacency_) {
    std::sort(nbrs.begin(), nbrs.end());
    nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
  }
}

Digraph Digraph::complete(int node_count) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < node_count; ++i) {
    for (int j = 0; j < node_count; ++j) {
      if (i != j) edges.emplace_back(i, j);
    }
  }
  return {node_count, edges};
}

Digraph Digraph::directed_ring(int node_count) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < node_count; ++i) {
    edges.emplace_back(i, (i + 1) % node_count);
  }
  return {node_count, edges};
}

void Digraph::check_node(int i) const {
  if (i < 0 || i >= node_count()) {
    throw InvalidInputError("Digraph: node index " + std::to_string(i) + " out of range");
  }
}

const std::vector<int>& Digraph::neighbors(int i) const {
  check_node(i);
  return adjacency_[i];
}

std::vector<int> Digraph::dhop(int i, int d) const {
  std::vector<int> result;
  for (const auto& [node, dist] : dhop_with_distance(i, d)) {
    result.push_back(node);
  }
  std::sort(result.begin(), result.end());
  return result;
}

std::vector<std::pair<int, int>> Digraph::dhop_with_distance(int i, int d) const {
  check_node(i);
  if (d < 0) {
    throw InvalidInputError("Digraph: negative hop count");
  }
  // BFS truncated at depth d; self-loops do not extend reach.
  std::vector<int> dist(node_count(), -1);
  std::deque<int> frontier{i};
  dist[i] = 0;
  while (!frontier.empty()) {
    int u = frontier.front();
    frontier.pop_front();
    if (dist[u] == d) continue;
    for (int v : adjacency_[u]) {
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        frontier.push_back(v);
      }
    }
  }
  std::vector<std::pair<int, int>> result;
  for (int depth = 0; depth <= d; ++depth) {
    for (int v = 0; v < node_count(); ++v) {
      if (dist[v] == depth) result.emplace_back(v, depth);
    }
    if (depth >= node_count()) break;  // distances cannot exceed node count
  }
  return result;
}

int Digraph::diameter() const {
  int max_dist = 0;
  for (int i = 0; i < node_count(); ++i) {
    std::vector<int> dist(node_count(), -1);
    std::deque<int> frontier{i};
    dist[i] = 0;
    while (!frontier.empty()) {
      int u = frontier.front();
      frontier.pop_front();
      for (int v : adjacency_[u]) {
        if (dist[v] < 0) {
          dist[v] = dist[u] + 1;
          frontier.push_back(v);
        }
      }
    }
    for (int j = 0; j < node_count(); ++j) {
      if (dist[j] < 0) {
        throw NotStronglyConnectedError("Digraph: node " + std::to_string(j) +
                                        " unreachable from node " + std::to_string(i));
      }
      max_dist = std::max(max_dist, dist[j]);
    }
  }
  return max_dist;
}

}  // namespace dio
