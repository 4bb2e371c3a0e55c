#include "cacose/analysis.hpp"

#include <algorithm>
#include <chrono>
#include <stdexcept>

#include "cacose/dataset.hpp"
#include "cacose/layers.hpp"

namespace cacose {

namespace {

int64_t count_paths_from(const Graph& g, std::vector<char>& visited, int v, int remaining) {
  if (remaining == 0) return 1;
  int64_t total = 0;
  visited[v] = 1;
  for (int w : g.neighbors(v)) {
    if (!visited[w]) total += count_paths_from(g, visited, w, remaining - 1);
  }
  visited[v] = 0;
  return total;
}

}  // namespace

int64_t count_paths(const Graph& g, int v, int n) {
  if (n < 1) throw std::invalid_argument("count_paths: n must be >= 1");
  if (v < 0 || v >= g.num_nodes()) throw std::invalid_argument("count_paths: node out of range");
  std::vector<char> visited(g.num_nodes(), 0);
  return count_paths_from(g, visited, v, n);
}

double anp(const Graph& g, int n) {
  if (g.num_nodes() == 0) throw std::invalid_argument("anp: empty graph");
  const int nodes = g.num_nodes();
  std::vector<int64_t> counts(nodes);
#pragma omp parallel
  {
    std::vector<char> visited(nodes, 0);
#pragma omp for schedule(dynamic)
    for (int v = 0; v < nodes; ++v) counts[v] = count_paths_from(g, visited, v, n);
  }
  int64_t total = 0;
  for (int64_t c : counts) total += c;
  return static_cast<double>(total) / nodes;
}

Graph homophilic_subgraph(const Graph& g, const NodeLabels& labels) {
  if (static_cast<int>(labels.labels.size()) != g.num_nodes())
    throw std::invalid_argument("homophilic_subgraph: label count does not match graph");
  std::vector<Edge> kept;
  for (const auto& [u, v] : g.edges())
    if (labels.labels[u] == labels.labels[v]) kept.emplace_back(u, v);
  return Graph::from_edges(g.num_nodes(), kept);
}

namespace {

NodeLabels restrict_labels(const NodeLabels& labels, const std::vector<int>& to_global) {
  NodeLabels out;
  out.num_classes = labels.num_classes;
  out.labels.reserve(to_global.size());
  for (int global : to_global) out.labels.push_back(labels.labels[global]);
  return out;
}

void append_anp_records(std::vector<AnpRecord>& records, const Graph& g,
                        const std::string& graph_id, const std::string& variant,
                        const std::vector<int>& hops) {
  for (int n : hops) records.push_back({graph_id, variant, n, anp(g, n), ""});
}

// Node-induced subgraph on `nodes` (local ids of host), reindexed densely.
Graph induced_subgraph(const Graph& host, std::vector<int> nodes, std::vector<int>* node_map) {
  std::sort(nodes.begin(), nodes.end());
  std::vector<Edge> edges;
  auto local_of = [&nodes](int v) {
    auto it = std::lower_bound(nodes.begin(), nodes.end(), v);
    return it != nodes.end() && *it == v ? static_cast<int>(it - nodes.begin()) : -1;
  };
  for (const auto& [u, v] : host.edges()) {
    int lu = local_of(u), lv = local_of(v);
    if (lu >= 0 && lv >= 0) edges.emplace_back(lu, lv);
  }
  if (node_map) *node_map = nodes;
  return Graph::from_edges(static_cast<int>(nodes.size()), edges);
}

}  // namespace

std::vector<AnpRecord> pilot_study(const Graph& g, const NodeLabels& labels,
                                   const std::optional<FeatureMatrix>& features,
                                   int top_m_levels, const std::vector<int>& hops,
                                   const CacoseConfig& config) {
  if (top_m_levels < 1) throw std::invalid_argument("pilot_study: top_m_levels must be >= 1");
  if (static_cast<int>(labels.labels.size()) != g.num_nodes())
    throw std::invalid_argument("pilot_study: label count does not match graph");

  std::vector<AnpRecord> records;
  append_anp_records(records, g, "G", "original", hops);
  append_anp_records(records, homophilic_subgraph(g, labels), "G", "homophilic-original", hops);

  // Pilot uses raw edge scores (no filtration): the study predates it.
  CorenessMap cores = core_numbers(g);
  EdgeScoreMap scores = edge_coreness(g, cores);
  SubgraphFamily family = extract_subgraphs(g, scores);

  const FeatureMatrix feats =
      features ? *features : degree_onehot_features(g, config.degree_onehot_cap);

  std::vector<const SubgraphFamily::Level*> chosen;
  for (auto it = family.levels.rbegin(); it != family.levels.rend(); ++it) {
    if (static_cast<int>(chosen.size()) == top_m_levels) break;
    chosen.push_back(&*it);
  }
  if (static_cast<int>(chosen.size()) < top_m_levels) {
    records.push_back({"G", "warning", 0, 0.0,
                       "requested " + std::to_string(top_m_levels) + " levels, only " +
                           std::to_string(chosen.size()) + " nonempty"});
  }

  for (const auto* level : chosen) {
    const std::string kstr = std::to_string(level->k);
    const Subgraph& sub = level->subgraph;
    NodeLabels sub_labels = restrict_labels(labels, sub.to_global);

    append_anp_records(records, sub.local, "S" + kstr, "core-" + kstr, hops);
    append_anp_records(records, homophilic_subgraph(sub.local, sub_labels), "S" + kstr,
                       "homophilic-core-" + kstr, hops);

    // Untrained, seed-fixed pooling selection at the configured ratio.
    Rng rng = Rng::substream(config.seed, "pilot-pool", static_cast<uint64_t>(level->k));
    SagPool pool("pilot", feats.cols, config.pooling_ratio, rng);
    ad::Tape tape;
    ad::Tensor a_hat = tape.constant(sub.local.num_nodes(), sub.local.num_nodes(),
                                     normalize_adjacency(sub));
    std::vector<double> sub_feats;
    sub_feats.reserve(sub.to_global.size() * feats.cols);
    for (int global : sub.to_global)
      for (int j = 0; j < feats.cols; ++j) sub_feats.push_back(feats.at(global, j));
    ad::Tensor h = tape.constant(sub.local.num_nodes(), feats.cols, std::move(sub_feats));
    SagPoolResult pooled = pool.forward(tape, a_hat, h);

    std::vector<int> pooled_map;
    Graph pooled_graph = induced_subgraph(sub.local, pooled.selected, &pooled_map);
    std::vector<int> pooled_global;
    pooled_global.reserve(pooled_map.size());
    for (int local : pooled_map) pooled_global.push_back(sub.to_global[local]);
    NodeLabels pooled_labels = restrict_labels(labels, pooled_global);

    append_anp_records(records, pooled_graph, "P" + kstr, "pooled-" + kstr, hops);
    append_anp_records(records, homophilic_subgraph(pooled_graph, pooled_labels), "P" + kstr,
                       "homophilic-pooled-" + kstr, hops);
  }
  return records;
}

namespace {

BridgeRecord neighborhood_record(const Graph& host, const std::vector<int>& global_of, int u,
                                 int v, const NodeLabels& labels, const std::string& context) {
  auto n_u = khop_neighborhood(host, u, 2);
  auto n_v = khop_neighborhood(host, v, 2);
  std::vector<int> nodes;
  std::set_union(n_u.begin(), n_u.end(), n_v.begin(), n_v.end(), std::back_inserter(nodes));

  BridgeRecord rec;
  rec.context = context;
  rec.neighborhood_size = static_cast<int>(nodes.size());
  rec.class_histogram.assign(labels.num_classes, 0);
  for (int local : nodes) ++rec.class_histogram[labels.labels[global_of[local]]];

  std::vector<int> ignored;
  Graph induced = induced_subgraph(host, nodes, &ignored);
  auto label_of = [&](int idx) { return labels.labels[global_of[nodes[idx]]]; };
  for (const auto& [a, b] : induced.edges()) {
    ++rec.total_edges;
    if (label_of(a) == label_of(b)) ++rec.same_label_edges;
  }
  rec.homophily_ratio =
      rec.total_edges == 0 ? 0.0 : static_cast<double>(rec.same_label_edges) / rec.total_edges;
  return rec;
}

}  // namespace

std::vector<BridgeRecord> bridge_analysis(const Graph& g, const NodeLabels& labels,
                                          const SubgraphFamily& family) {
  if (static_cast<int>(labels.labels.size()) != g.num_nodes())
    throw std::invalid_argument("bridge_analysis: label count does not match graph");

  std::vector<int> identity(g.num_nodes());
  for (int v = 0; v < g.num_nodes(); ++v) identity[v] = v;

  std::vector<BridgeRecord> records;
  for (const auto& [u, v] : find_bridges(g)) {
    BridgeRecord original = neighborhood_record(g, identity, u, v, labels, "original");
    original.edge = {u, v};
    records.push_back(std::move(original));

    // the family partitions edges, so exactly one level holds (u,v)
    for (const auto& level : family.levels) {
      const Subgraph& sub = level.subgraph;
      auto lu = std::lower_bound(sub.to_global.begin(), sub.to_global.end(), u);
      auto lv = std::lower_bound(sub.to_global.begin(), sub.to_global.end(), v);
      if (lu == sub.to_global.end() || *lu != u) continue;
      if (lv == sub.to_global.end() || *lv != v) continue;
      int local_u = static_cast<int>(lu - sub.to_global.begin());
      int local_v = static_cast<int>(lv - sub.to_global.begin());
      if (!sub.local.has_edge(local_u, local_v)) continue;
      BridgeRecord rec = neighborhood_record(sub.local, sub.to_global, local_u, local_v, labels,
                                             "level-" + std::to_string(level.k));
      rec.edge = {u, v};
      records.push_back(std::move(rec));
    }
  }
  return records;
}

std::vector<ScalabilityRecord> scalability_study(const std::vector<int>& sizes,
                                                 const std::vector<double>& densities,
                                                 uint64_t seed, int delta,
                                                 double memory_budget_bytes) {
  if (sizes.empty() || densities.empty())
    throw std::invalid_argument("scalability_study: sizes and densities must be nonempty");

  std::vector<ScalabilityRecord> records;
  for (int n : sizes) {
    for (double p : densities) {
      ScalabilityRecord rec;
      rec.n = n;
      rec.p = p;
      const double expected_edges = p * n * (n - 1.0) / 2.0;
      if (expected_edges * 32.0 > memory_budget_bytes) {
        rec.skipped = true;
        rec.note = "skipped: expected edges exceed memory budget";
        records.push_back(std::move(rec));
        continue;
      }
      Graph g = erdos_renyi(n, p, seed);
      auto t0 = std::chrono::steady_clock::now();
      CorenessMap cores = core_numbers(g);
      EdgeScoreMap scores = edge_coreness(g, cores);
      EdgeScoreMap filtered = caef_filter(g, scores, delta);
      SubgraphFamily family = extract_subgraphs(g, filtered);
      auto t1 = std::chrono::steady_clock::now();
      rec.edges = g.num_edges();
      rec.k_max = cores.k_max;
      rec.levels = static_cast<int>(family.levels.size());
      rec.elapsed_seconds = std::chrono::duration<double>(t1 - t0).count();
      records.push_back(std::move(rec));
    }
  }
  return records;
}

}  // namespace cacose
