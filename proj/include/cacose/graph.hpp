#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace cacose {

using Edge = std::pair<int, int>;

// Undirected simple graph in CSR layout. Immutable after construction and
// safe to share read-only across threads. Directed or duplicated input
// edges are symmetrized/deduplicated by the factory; self-loops are dropped.
class Graph {
 public:
  Graph() = default;

  // Throws std::invalid_argument naming the offending pair when an index is
  // outside [0, num_nodes).
  static Graph from_edges(int num_nodes, const std::vector<Edge>& edges);

  int num_nodes() const { return num_nodes_; }
  int num_edges() const { return static_cast<int>(edges_.size()); }

  std::span<const int> neighbors(int v) const {
    return {neighbors_.data() + offsets_[v], neighbors_.data() + offsets_[v + 1]};
  }
  int degree(int v) const { return offsets_[v + 1] - offsets_[v]; }
  bool has_edge(int u, int v) const;

  // Canonical edge list: u < v, lexicographically sorted. Edge ids used by
  // per-edge maps (coreness scores, curvature sweeps) index into this list.
  const std::vector<Edge>& edges() const { return edges_; }

  // Index of (u,v) in edges(), or -1 if absent. Order of u,v is irrelevant.
  int edge_index(int u, int v) const;

 private:
  int num_nodes_ = 0;
  std::vector<int> offsets_{0};
  std::vector<int> neighbors_;
  std::vector<Edge> edges_;
};

// Per-node class indices in [0, num_classes).
struct NodeLabels {
  std::vector<int> labels;
  int num_classes = 0;
};

// Dense row-major num_nodes x dim feature matrix.
struct FeatureMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  double at(int i, int j) const { return data[static_cast<size_t>(i) * cols + j]; }
  double& at(int i, int j) { return data[static_cast<size_t>(i) * cols + j]; }
};

inline constexpr int kUnreachable = -1;

// BFS hop distances from source; kUnreachable for nodes in other components.
std::vector<int> bfs_distances(const Graph& g, int source);

// Edges whose removal increases the number of connected components,
// found with an iterative low-link DFS.
std::vector<Edge> find_bridges(const Graph& g);

// G(n, p) with each unordered pair included independently with probability p.
// Deterministic for a given (n, p, seed). Uses geometric skipping, so the
// cost is O(n + m) rather than O(n^2).
Graph erdos_renyi(int n, double p, uint64_t seed);

// All nodes at BFS distance <= k from v (v included), sorted ascending.
std::vector<int> khop_neighborhood(const Graph& g, int v, int k);

}  // namespace cacose
