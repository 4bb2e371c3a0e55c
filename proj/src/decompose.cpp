#include "cacose/decompose.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>

namespace cacose {

CorenessMap core_numbers(const Graph& g) {
  const int n = g.num_nodes();
  CorenessMap out;
  out.core.assign(n, 0);
  if (n == 0) return out;

  // Batagelj-Zaversnik bucket peeling: nodes sorted by degree, each node
  // peeled once in nondecreasing degree order.
  std::vector<int> deg(n), pos(n), order(n);
  int max_deg = 0;
  for (int v = 0; v < n; ++v) {
    deg[v] = g.degree(v);
    max_deg = std::max(max_deg, deg[v]);
  }
  std::vector<int> bin(max_deg + 2, 0);
  for (int v = 0; v < n; ++v) ++bin[deg[v]];
  int start = 0;
  for (int d = 0; d <= max_deg; ++d) {
    int count = bin[d];
    bin[d] = start;
    start += count;
  }
  for (int v = 0; v < n; ++v) {
    pos[v] = bin[deg[v]]++;
    order[pos[v]] = v;
  }
  for (int d = max_deg; d > 0; --d) bin[d] = bin[d - 1];
  bin[0] = 0;

  for (int i = 0; i < n; ++i) {
    int v = order[i];
    out.core[v] = deg[v];
    for (int w : g.neighbors(v)) {
      if (deg[w] > deg[v]) {
        // move w to the front of its bucket, then shrink its degree
        int dw = deg[w], pw = pos[w];
        int pfront = bin[dw];
        int front = order[pfront];
        if (w != front) {
          std::swap(order[pw], order[pfront]);
          pos[w] = pfront;
          pos[front] = pw;
        }
        ++bin[dw];
        --deg[w];
      }
    }
  }
  out.k_max = 0;
  for (int v = 0; v < n; ++v) out.k_max = std::max(out.k_max, out.core[v]);
  return out;
}

EdgeScoreMap edge_coreness(const Graph& g, const CorenessMap& cores) {
  if (static_cast<int>(cores.core.size()) != g.num_nodes())
    throw std::invalid_argument("edge_coreness: coreness map does not match graph");
  EdgeScoreMap out;
  out.score.resize(g.num_edges());
  const auto& edges = g.edges();
  for (int e = 0; e < g.num_edges(); ++e) {
    out.score[e] = std::min(cores.core[edges[e].first], cores.core[edges[e].second]);
  }
  return out;
}

namespace {

int sorted_intersection_size(std::span<const int> a, std::span<const int> b) {
  int count = 0;
  size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j]) {
      ++i;
    } else if (a[i] > b[j]) {
      ++j;
    } else {
      ++count;
      ++i;
      ++j;
    }
  }
  return count;
}

// Common neighbors of u,v whose core number is at least k. Because the
// k-core is the induced subgraph on {w : core(w) >= k}, this equals the
// triadic support of (u,v) inside G_k without materializing G_k.
int support_in_core(const Graph& g, const std::vector<int>& core, int u, int v, int k) {
  auto nu = g.neighbors(u);
  auto nv = g.neighbors(v);
  int count = 0;
  size_t i = 0, j = 0;
  while (i < nu.size() && j < nv.size()) {
    if (nu[i] < nv[j]) {
      ++i;
    } else if (nu[i] > nv[j]) {
      ++j;
    } else {
      if (core[nu[i]] >= k) ++count;
      ++i;
      ++j;
    }
  }
  return count;
}

}  // namespace

int triadic_support(const Graph& g, int u, int v) {
  if (!g.has_edge(u, v))
    throw std::invalid_argument("triadic_support: (" + std::to_string(u) + "," +
                                std::to_string(v) + ") is not an edge");
  return sorted_intersection_size(g.neighbors(u), g.neighbors(v));
}

EdgeScoreMap caef_filter(const Graph& g, const EdgeScoreMap& scores, int delta,
                         SupportScope scope) {
  if (delta < 1) throw std::invalid_argument("caef_filter: delta must be >= 1");
  if (static_cast<int>(scores.score.size()) != g.num_edges())
    throw std::invalid_argument("caef_filter: score map does not match graph");

  CorenessMap cores;
  if (scope == SupportScope::InducedCore) cores = core_numbers(g);

  EdgeScoreMap out = scores;
  const auto& edges = g.edges();
  const int m = g.num_edges();
  // all decisions read the pre-filtration scores, so demotions cannot cascade
#pragma omp parallel for schedule(static)
  for (int e = 0; e < m; ++e) {
    int k = scores.score[e];
    if (k < delta) continue;
    auto [u, v] = edges[e];
    int support = scope == SupportScope::InducedCore
                      ? support_in_core(g, cores.core, u, v, k)
                      : sorted_intersection_size(g.neighbors(u), g.neighbors(v));
    if (support == 0) out.score[e] = k - 1;
  }
  return out;
}

SubgraphFamily extract_subgraphs(const Graph& g, const EdgeScoreMap& scores) {
  if (static_cast<int>(scores.score.size()) != g.num_edges())
    throw std::invalid_argument("extract_subgraphs: score map does not match graph");

  std::map<int, std::vector<Edge>> groups;
  const auto& edges = g.edges();
  for (int e = 0; e < g.num_edges(); ++e) groups[scores.score[e]].push_back(edges[e]);

  SubgraphFamily family;
  for (auto& [k, group] : groups) {
    std::vector<int> nodes;
    nodes.reserve(group.size() * 2);
    for (const auto& [u, v] : group) {
      nodes.push_back(u);
      nodes.push_back(v);
    }
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());

    std::vector<Edge> local_edges;
    local_edges.reserve(group.size());
    auto local_id = [&nodes](int global) {
      return static_cast<int>(std::lower_bound(nodes.begin(), nodes.end(), global) - nodes.begin());
    };
    for (const auto& [u, v] : group) local_edges.emplace_back(local_id(u), local_id(v));

    Subgraph sub;
    sub.local = Graph::from_edges(static_cast<int>(nodes.size()), local_edges);
    sub.to_global = std::move(nodes);
    family.levels.push_back({k, std::move(sub)});
  }
  return family;
}

}  // namespace cacose
