#include "cacose/curvature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <queue>
#include <stdexcept>

#include "cacose/decompose.hpp"

namespace cacose {

namespace {

constexpr double kSignTol = 1e-9;

// Minimal successive-shortest-path min-cost flow; sizes here are tiny
// (bipartite transportation between two neighbor sets).
class MinCostFlow {
 public:
  explicit MinCostFlow(int n) : head_(n, -1) {}

  void add_edge(int u, int v, int64_t cap, int64_t cost) {
    edges_.push_back({v, head_[u], cap, cost});
    head_[u] = static_cast<int>(edges_.size()) - 1;
    edges_.push_back({u, head_[v], 0, -cost});
    head_[v] = static_cast<int>(edges_.size()) - 1;
  }

  // Returns {flow, cost}; sends as much flow as possible from s to t.
  std::pair<int64_t, int64_t> solve(int s, int t) {
    const int64_t inf = std::numeric_limits<int64_t>::max() / 4;
    int64_t flow = 0, cost = 0;
    const int n = static_cast<int>(head_.size());
    while (true) {
      std::vector<int64_t> dist(n, inf);
      std::vector<int> in_queue(n, 0), prev_edge(n, -1);
      std::deque<int> queue;
      dist[s] = 0;
      queue.push_back(s);
      in_queue[s] = 1;
      while (!queue.empty()) {
        int u = queue.front();
        queue.pop_front();
        in_queue[u] = 0;
        for (int e = head_[u]; e != -1; e = edges_[e].next) {
          if (edges_[e].cap <= 0) continue;
          int v = edges_[e].to;
          if (dist[u] + edges_[e].cost < dist[v]) {
            dist[v] = dist[u] + edges_[e].cost;
            prev_edge[v] = e;
            if (!in_queue[v]) {
              in_queue[v] = 1;
              queue.push_back(v);
            }
          }
        }
      }
      if (dist[t] >= inf) break;
      int64_t push = inf;
      for (int v = t; v != s; v = edges_[prev_edge[v] ^ 1].to)
        push = std::min(push, edges_[prev_edge[v]].cap);
      for (int v = t; v != s; v = edges_[prev_edge[v] ^ 1].to) {
        edges_[prev_edge[v]].cap -= push;
        edges_[prev_edge[v] ^ 1].cap += push;
      }
      flow += push;
      cost += push * dist[t];
    }
    return {flow, cost};
  }

 private:
  struct Arc {
    int to;
    int next;
    int64_t cap;
    int64_t cost;
  };
  std::vector<Arc> edges_;
  std::vector<int> head_;
};

void validate_measure(const WalkMeasure& m, const char* which) {
  if (m.support.empty()) throw std::invalid_argument(std::string(which) + ": empty support");
  double sum = 0.0;
  for (double p : m.mass) {
    if (!(p > 0.0)) throw std::invalid_argument(std::string(which) + ": non-positive mass");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw std::invalid_argument(std::string(which) + ": masses do not sum to 1");
}

}  // namespace

WalkMeasure walk_measure(const Graph& g, int u) {
  if (u < 0 || u >= g.num_nodes()) throw std::invalid_argument("walk_measure: node out of range");
  int deg = g.degree(u);
  if (deg == 0) throw std::invalid_argument("walk_measure: undefined for isolated node");
  WalkMeasure m;
  m.support.assign(g.neighbors(u).begin(), g.neighbors(u).end());
  m.mass.assign(deg, 1.0 / deg);
  return m;
}

double wasserstein1(const Graph& g, const WalkMeasure& a, const WalkMeasure& b) {
  validate_measure(a, "wasserstein1: first measure");
  validate_measure(b, "wasserstein1: second measure");

  const int na = static_cast<int>(a.support.size());
  const int nb = static_cast<int>(b.support.size());

  // Feasibility needs mass balance per connected component.
  {
    std::vector<int> comp(g.num_nodes(), -1);
    int ncomp = 0;
    for (int v = 0; v < g.num_nodes(); ++v) {
      if (comp[v] != -1) continue;
      std::queue<int> q;
      q.push(v);
      comp[v] = ncomp;
      while (!q.empty()) {
        int u = q.front();
        q.pop();
        for (int w : g.neighbors(u))
          if (comp[w] == -1) {
            comp[w] = ncomp;
            q.push(w);
          }
      }
      ++ncomp;
    }
    std::vector<double> balance(ncomp, 0.0);
    for (int i = 0; i < na; ++i) balance[comp[a.support[i]]] += a.mass[i];
    for (int j = 0; j < nb; ++j) balance[comp[b.support[j]]] -= b.mass[j];
    for (double d : balance) {
      if (std::abs(d) > 1e-12)
        throw std::domain_error("wasserstein1: supports span disconnected components; cost unbounded");
    }
  }

  // Integerize: uniform masses 1/na and 1/nb scale exactly by L = lcm.
  const int64_t L = std::lcm<int64_t>(na, nb);
  const int64_t supply = L / na;
  const int64_t demand = L / nb;

  // node layout: 0 = source, 1..na = a-support, na+1..na+nb = b-support, last = sink
  MinCostFlow mcf(na + nb + 2);
  const int src = 0, snk = na + nb + 1;
  for (int i = 0; i < na; ++i) mcf.add_edge(src, 1 + i, supply, 0);
  for (int j = 0; j < nb; ++j) mcf.add_edge(1 + na + j, snk, demand, 0);
  for (int i = 0; i < na; ++i) {
    auto dist = bfs_distances(g, a.support[i]);
    for (int j = 0; j < nb; ++j) {
      int d = dist[b.support[j]];
      if (d != kUnreachable) mcf.add_edge(1 + i, 1 + na + j, L, d);
    }
  }
  auto [flow, cost] = mcf.solve(src, snk);
  if (flow != L)
    throw std::domain_error("wasserstein1: transport infeasible across components");
  return static_cast<double>(cost) / static_cast<double>(L);
}

CurvatureResult ollivier_ricci(const Graph& g, int u, int v) {
  if (!g.has_edge(u, v))
    throw std::invalid_argument("ollivier_ricci: (" + std::to_string(u) + "," +
                                std::to_string(v) + ") is not an edge");
  CurvatureResult r;
  r.u = u;
  r.v = v;
  r.w1 = wasserstein1(g, walk_measure(g, u), walk_measure(g, v));
  r.kappa = 1.0 - r.w1;  // d(u,v) = 1 for adjacent endpoints
  return r;
}

TheoremReport verify_no_common_neighbor_theorem(const Graph& g) {
  const auto& edges = g.edges();
  const int m = g.num_edges();
  std::vector<int> supports(m);
#pragma omp parallel for schedule(static)
  for (int e = 0; e < m; ++e) supports[e] = triadic_support(g, edges[e].first, edges[e].second);

  std::vector<int> zero_support;
  for (int e = 0; e < m; ++e)
    if (supports[e] == 0) zero_support.push_back(e);

  TheoremReport report;
  report.entries.resize(zero_support.size());
  const int z = static_cast<int>(zero_support.size());
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < z; ++i) {
    auto [u, v] = edges[zero_support[i]];
    CurvatureResult cr = ollivier_ricci(g, u, v);
    report.entries[i] = {u, v, 0, cr.w1, cr.kappa, cr.kappa > kSignTol};
  }
  for (const auto& entry : report.entries)
    if (entry.violation) ++report.num_violations;
  return report;
}

}  // namespace cacose
