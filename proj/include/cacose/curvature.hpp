#pragma once

#include <vector>

#include "cacose/graph.hpp"

namespace cacose {

// Uniform 1-step random walk measure: mass 1/deg(u) on each neighbor of u.
struct WalkMeasure {
  std::vector<int> support;  // = N(u), sorted
  std::vector<double> mass;  // uniform, sums to 1
};

struct CurvatureResult {
  int u = 0;
  int v = 0;
  double w1 = 0.0;
  double kappa = 0.0;
};

// Throws std::invalid_argument for isolated nodes (measure undefined).
WalkMeasure walk_measure(const Graph& g, int u);

// Exact Wasserstein-1 cost between two uniform walk measures over BFS hop
// distance. The problem is integerized (supplies L/|a|, demands L/|b| with
// L = lcm) and solved as an integer min-cost flow, so the result is exact
// up to one final division; no iterative approximation is involved.
// Throws std::domain_error when the supports cannot be balanced within
// connected components (transport cost unbounded).
double wasserstein1(const Graph& g, const WalkMeasure& a, const WalkMeasure& b);

// kappa(u,v) = 1 - W1(mu_u, mu_v) for an edge (u,v); non-edges rejected.
CurvatureResult ollivier_ricci(const Graph& g, int u, int v);

struct TheoremReport {
  struct Entry {
    int u, v;
    int support;
    double w1;
    double kappa;
    bool violation;
  };
  std::vector<Entry> entries;  // one per edge with empty common neighborhood
  int num_violations = 0;
};

// For every edge whose endpoints share no neighbor, computes kappa and
// flags kappa > 1e-9 as a violation of the zero-support bound.
TheoremReport verify_no_common_neighbor_theorem(const Graph& g);

}  // namespace cacose
