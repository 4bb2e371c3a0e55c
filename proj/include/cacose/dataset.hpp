#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cacose/graph.hpp"

namespace cacose {

// Disjoint, exhaustive item assignment produced by a seeded shuffle and
// contiguous slicing; sizes are the rounded fractions.
struct SplitAssignment {
  std::vector<int> train, val, test;
  uint64_t seed = 0;
  int total = 0;
};

// Throws if any partition would be empty or fractions do not sum to 1.
SplitAssignment make_split(int n_items, double f_train, double f_val, double f_test,
                           uint64_t seed);

struct DatasetBundle {
  std::string name;
  Graph graph;
  std::optional<FeatureMatrix> features;
  std::optional<NodeLabels> labels;
  std::string graph_path, features_path, labels_path;
};

// Multiple graphs with one label each (graph classification datasets).
struct GraphCollection {
  std::vector<Graph> graphs;
  std::vector<FeatureMatrix> features;
  std::vector<int> labels;
  std::vector<std::string> ids;
  int num_classes = 0;
  int feature_dim = 0;
};

// One `u v` pair per line, 0-based, '#' starts a comment. Directed input is
// symmetrized; duplicates and self-loops dropped. num_nodes is 1 + max
// index unless a larger count is given.
Graph load_edge_list(const std::string& path, int num_nodes = -1);
void save_edge_list(const Graph& g, const std::string& path);

// One integer label per line.
NodeLabels load_labels(const std::string& path, int num_nodes);

// One whitespace-separated row of reals per node.
FeatureMatrix load_features(const std::string& path, int num_nodes);

// Bundle loader with cross-validation of row counts; labels/features paths
// may be empty. Errors carry file and line diagnostics.
DatasetBundle load_dataset(const std::string& graph_path, const std::string& features_path,
                           const std::string& labels_path);

// List file: one `relative/path<ws>label` per line; paths resolve against
// the list file's directory. Features are synthesized per graph
// (degree one-hot with the given cap) so the dimension is consistent.
GraphCollection load_graph_collection(const std::string& list_path, int degree_onehot_cap);

// One-hot of min(degree, cap): dim = cap + 1.
FeatureMatrix degree_onehot_features(const Graph& g, int cap);

// Identity matrix features (dim = num_nodes).
FeatureMatrix identity_features(const Graph& g);

}  // namespace cacose
