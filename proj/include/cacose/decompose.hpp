#pragma once

#include <vector>

#include "cacose/graph.hpp"

namespace cacose {

// Per-node core numbers: core[v] is the largest k such that v survives in
// the k-core. Isolated nodes get 0.
struct CorenessMap {
  std::vector<int> core;
  int k_max = 0;
};

// Per-edge integer scores, parallel to Graph::edges(). Before filtration
// score[e] = min(core(u), core(v)); the filtration may decrement a score by
// exactly one.
struct EdgeScoreMap {
  std::vector<int> score;
};

// One level of the edge partition: a dense local graph plus the map from
// local node ids back to global ids. Nodes exist only via incident edges,
// so the local graph has no isolated nodes.
struct Subgraph {
  Graph local;
  std::vector<int> to_global;
};

// The family {S_k}: one subgraph per distinct edge score with at least one
// edge, ascending in k. Level edge sets partition the edges of the host
// graph exactly.
struct SubgraphFamily {
  struct Level {
    int k;
    Subgraph subgraph;
  };
  std::vector<Level> levels;

  const Level* find(int k) const {
    for (const auto& lv : levels)
      if (lv.k == k) return &lv;
    return nullptr;
  }
};

// Whether triadic support during filtration counts common neighbors inside
// the k-core hosting the edge or in the full graph. InducedCore is the
// default: the filtration statement is about edges of G_k with G_k's
// neighbor sets.
enum class SupportScope { InducedCore, FullGraph };

// Bucket-queue peeling, O(V + E).
CorenessMap core_numbers(const Graph& g);

// score(u,v) = min(core(u), core(v)), which equals the largest k whose
// k-core contains the edge.
EdgeScoreMap edge_coreness(const Graph& g, const CorenessMap& cores);

// |N(u) cap N(v)| in g, i.e. the number of triangles through the edge.
// Throws if (u,v) is not an edge.
int triadic_support(const Graph& g, int u, int v);

// Closure-aware filtration: a single pass over the pre-filtration scores.
// An edge with score k >= delta whose support (within scope) is zero is
// demoted to k-1; everything else is unchanged. Demotions never cascade.
EdgeScoreMap caef_filter(const Graph& g, const EdgeScoreMap& scores, int delta,
                         SupportScope scope = SupportScope::InducedCore);

// Group edges by final score into local subgraphs with dense node ids.
SubgraphFamily extract_subgraphs(const Graph& g, const EdgeScoreMap& scores);

}  // namespace cacose
