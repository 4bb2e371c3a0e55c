#include "cacose/graph.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <string>

#include "cacose/rng.hpp"

namespace cacose {

Graph Graph::from_edges(int num_nodes, const std::vector<Edge>& edges) {
  if (num_nodes < 0) throw std::invalid_argument("num_nodes must be >= 0");

  std::vector<Edge> canon;
  canon.reserve(edges.size());
  for (const auto& [u, v] : edges) {
    if (u < 0 || u >= num_nodes || v < 0 || v >= num_nodes) {
      throw std::invalid_argument("edge (" + std::to_string(u) + "," + std::to_string(v) +
                                  ") out of range for " + std::to_string(num_nodes) + " nodes");
    }
    if (u == v) continue;
    canon.emplace_back(std::min(u, v), std::max(u, v));
  }
  std::sort(canon.begin(), canon.end());
  canon.erase(std::unique(canon.begin(), canon.end()), canon.end());

  Graph g;
  g.num_nodes_ = num_nodes;
  g.edges_ = std::move(canon);

  std::vector<int> deg(num_nodes, 0);
  for (const auto& [u, v] : g.edges_) {
    ++deg[u];
    ++deg[v];
  }
  g.offsets_.assign(num_nodes + 1, 0);
  for (int v = 0; v < num_nodes; ++v) g.offsets_[v + 1] = g.offsets_[v] + deg[v];
  g.neighbors_.resize(g.offsets_[num_nodes]);
  std::vector<int> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
  for (const auto& [u, v] : g.edges_) {
    g.neighbors_[cursor[u]++] = v;
    g.neighbors_[cursor[v]++] = u;
  }
  for (int v = 0; v < num_nodes; ++v) {
    std::sort(g.neighbors_.begin() + g.offsets_[v], g.neighbors_.begin() + g.offsets_[v + 1]);
  }
  return g;
}

bool Graph::has_edge(int u, int v) const {
  auto nb = neighbors(u);
  return std::binary_search(nb.begin(), nb.end(), v);
}

int Graph::edge_index(int u, int v) const {
  Edge e{std::min(u, v), std::max(u, v)};
  auto it = std::lower_bound(edges_.begin(), edges_.end(), e);
  if (it == edges_.end() || *it != e) return -1;
  return static_cast<int>(it - edges_.begin());
}

std::vector<int> bfs_distances(const Graph& g, int source) {
  if (source < 0 || source >= g.num_nodes()) throw std::invalid_argument("bfs source out of range");
  std::vector<int> dist(g.num_nodes(), kUnreachable);
  std::queue<int> q;
  dist[source] = 0;
  q.push(source);
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    for (int w : g.neighbors(u)) {
      if (dist[w] == kUnreachable) {
        dist[w] = dist[u] + 1;
        q.push(w);
      }
    }
  }
  return dist;
}

std::vector<Edge> find_bridges(const Graph& g) {
  const int n = g.num_nodes();
  std::vector<int> entry(n, -1), low(n, 0), parent_edge(n, -1);
  std::vector<Edge> bridges;
  int timer = 0;

  // Iterative DFS; frame.second is the position within the neighbor span.
  std::vector<std::pair<int, size_t>> stack;
  for (int root = 0; root < n; ++root) {
    if (entry[root] != -1) continue;
    entry[root] = low[root] = timer++;
    stack.emplace_back(root, 0);
    while (!stack.empty()) {
      auto& [v, it] = stack.back();
      auto nb = g.neighbors(v);
      if (it < nb.size()) {
        int to = nb[it++];
        int eid = g.edge_index(v, to);
        if (eid == parent_edge[v]) continue;
        if (entry[to] != -1) {
          low[v] = std::min(low[v], entry[to]);
        } else {
          entry[to] = low[to] = timer++;
          parent_edge[to] = eid;
          stack.emplace_back(to, 0);
        }
      } else {
        stack.pop_back();
        if (!stack.empty()) {
          int p = stack.back().first;
          low[p] = std::min(low[p], low[v]);
          if (low[v] > entry[p]) bridges.emplace_back(std::min(p, v), std::max(p, v));
        }
      }
    }
  }
  std::sort(bridges.begin(), bridges.end());
  return bridges;
}

Graph erdos_renyi(int n, double p, uint64_t seed) {
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("erdos_renyi: p must lie in [0,1]");
  std::vector<Edge> edges;
  if (n >= 2 && p > 0.0) {
    Rng rng = Rng::substream(seed, "erdos-renyi");
    if (p >= 1.0) {
      for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) edges.emplace_back(u, v);
    } else {
      // Geometric jumps over the flattened strict upper triangle.
      const double log1mp = std::log1p(-p);
      int64_t total = static_cast<int64_t>(n) * (n - 1) / 2;
      int64_t idx = -1;
      while (true) {
        double r = rng.next_double();
        int64_t skip = static_cast<int64_t>(std::floor(std::log1p(-r) / log1mp));
        idx += 1 + skip;
        if (idx >= total) break;
        // invert idx -> (u, v) with u < v
        int64_t rem = idx;
        int u = 0;
        while (rem >= n - 1 - u) {
          rem -= n - 1 - u;
          ++u;
        }
        edges.emplace_back(u, u + 1 + static_cast<int>(rem));
      }
    }
  }
  return Graph::from_edges(n, edges);
}

std::vector<int> khop_neighborhood(const Graph& g, int v, int k) {
  if (k < 0) throw std::invalid_argument("khop_neighborhood: k must be >= 0");
  auto dist = bfs_distances(g, v);
  std::vector<int> out;
  for (int u = 0; u < g.num_nodes(); ++u) {
    if (dist[u] != kUnreachable && dist[u] <= k) out.push_back(u);
  }
  return out;
}

}  // namespace cacose
