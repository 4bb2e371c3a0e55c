#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cacose/decompose.hpp"
#include "cacose/graph.hpp"
#include "cacose/model.hpp"

namespace cacose {

// Number of simple paths (vertex-distinct) with exactly n edges starting
// at v, by bounded DFS.
int64_t count_paths(const Graph& g, int v, int n);

// Mean of count_paths over all nodes, zero-degree nodes included.
double anp(const Graph& g, int n);

// Same node set, only edges joining same-label endpoints.
Graph homophilic_subgraph(const Graph& g, const NodeLabels& labels);

struct AnpRecord {
  std::string graph_id;
  std::string variant;  // original | core-k | pooled-k | homophilic-* | warning
  int hop = 0;
  double anp = 0.0;
  std::string note;
};

// Average-path-count study over the original graph, its top-m coreness
// level subgraphs (raw edge scores, no filtration), their pooled
// counterparts (node-induced on a seed-fixed untrained pooling selection),
// and the homophilic counterpart of each. Records are ordered original
// first, then levels descending in k. When fewer than m levels exist a
// warning record is appended and the available levels are used.
std::vector<AnpRecord> pilot_study(const Graph& g, const NodeLabels& labels,
                                   const std::optional<FeatureMatrix>& features,
                                   int top_m_levels, const std::vector<int>& hops,
                                   const CacoseConfig& config);

struct BridgeRecord {
  Edge edge;            // global endpoints
  std::string context;  // "original" or "level-<k>"
  std::vector<int> class_histogram;
  int neighborhood_size = 0;
  int same_label_edges = 0;
  int total_edges = 0;
  double homophily_ratio = 0.0;
};

// For each bridge of g: the class histogram and homophily ratio of the
// union of both endpoints' 2-hop neighborhoods, in g and in the level
// subgraph holding that edge.
std::vector<BridgeRecord> bridge_analysis(const Graph& g, const NodeLabels& labels,
                                          const SubgraphFamily& family);

struct ScalabilityRecord {
  int64_t n = 0;
  double p = 0.0;
  int64_t edges = 0;
  int k_max = 0;
  int levels = 0;
  double elapsed_seconds = 0.0;  // volatile; kept out of deterministic outputs
  bool skipped = false;
  std::string note;
};

// Random graphs across (sizes x densities): generate, decompose (cores,
// edge scores, filtration, extraction) and record k_max. Combinations whose
// expected edge count exceeds the memory budget are skipped with a note.
std::vector<ScalabilityRecord> scalability_study(const std::vector<int>& sizes,
                                                 const std::vector<double>& densities,
                                                 uint64_t seed, int delta,
                                                 double memory_budget_bytes = 2e9);

}  // namespace cacose
