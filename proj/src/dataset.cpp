#include "cacose/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "cacose/rng.hpp"

namespace cacose {

namespace {

[[noreturn]] void file_error(const std::string& path, int line, const std::string& what) {
  throw std::runtime_error(path + ":" + std::to_string(line) + ": " + what);
}

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return in;
}

std::string strip_comment(const std::string& line) {
  auto pos = line.find('#');
  return pos == std::string::npos ? line : line.substr(0, pos);
}

}  // namespace

SplitAssignment make_split(int n_items, double f_train, double f_val, double f_test,
                           uint64_t seed) {
  if (n_items < 3) throw std::invalid_argument("make_split: need at least 3 items");
  if (std::abs(f_train + f_val + f_test - 1.0) > 1e-9)
    throw std::invalid_argument("make_split: fractions must sum to 1");

  const int n_train = static_cast<int>(std::llround(f_train * n_items));
  const int n_val = static_cast<int>(std::llround(f_val * n_items));
  const int n_test = n_items - n_train - n_val;
  if (n_train < 1 || n_val < 1 || n_test < 1)
    throw std::invalid_argument("make_split: a partition would be empty (n=" +
                                std::to_string(n_items) + ")");

  std::vector<int> order(n_items);
  for (int i = 0; i < n_items; ++i) order[i] = i;
  Rng rng = Rng::substream(seed, "split");
  rng.shuffle(order);

  SplitAssignment split;
  split.seed = seed;
  split.total = n_items;
  split.train.assign(order.begin(), order.begin() + n_train);
  split.val.assign(order.begin() + n_train, order.begin() + n_train + n_val);
  split.test.assign(order.begin() + n_train + n_val, order.end());
  return split;
}

Graph load_edge_list(const std::string& path, int num_nodes) {
  std::ifstream in = open_or_throw(path);
  std::vector<Edge> edges;
  int max_index = -1;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ss(strip_comment(line));
    long long u, v;
    if (!(ss >> u)) continue;  // blank or comment-only line
    if (!(ss >> v)) file_error(path, lineno, "expected two node indices");
    long long trailing;
    if (ss >> trailing) file_error(path, lineno, "expected exactly two node indices");
    if (u < 0 || v < 0) file_error(path, lineno, "negative node index");
    edges.emplace_back(static_cast<int>(u), static_cast<int>(v));
    max_index = std::max(max_index, static_cast<int>(std::max(u, v)));
  }
  int n = num_nodes >= 0 ? num_nodes : max_index + 1;
  if (max_index >= n)
    throw std::runtime_error(path + ": node index " + std::to_string(max_index) +
                             " exceeds declared node count " + std::to_string(n));
  return Graph::from_edges(n, edges);
}

void save_edge_list(const Graph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "# nodes " << g.num_nodes() << "\n";
  for (const auto& [u, v] : g.edges()) out << u << " " << v << "\n";
}

NodeLabels load_labels(const std::string& path, int num_nodes) {
  std::ifstream in = open_or_throw(path);
  NodeLabels out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ss(strip_comment(line));
    long long y;
    if (!(ss >> y)) continue;
    if (y < 0) file_error(path, lineno, "negative label");
    out.labels.push_back(static_cast<int>(y));
    out.num_classes = std::max(out.num_classes, static_cast<int>(y) + 1);
  }
  if (static_cast<int>(out.labels.size()) != num_nodes)
    throw std::runtime_error(path + ": " + std::to_string(out.labels.size()) +
                             " labels for " + std::to_string(num_nodes) + " nodes");
  return out;
}

FeatureMatrix load_features(const std::string& path, int num_nodes) {
  std::ifstream in = open_or_throw(path);
  FeatureMatrix out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ss(strip_comment(line));
    std::vector<double> row;
    double x;
    while (ss >> x) {
      if (!std::isfinite(x)) file_error(path, lineno, "non-finite feature value");
      row.push_back(x);
    }
    if (row.empty()) continue;
    if (out.cols == 0) out.cols = static_cast<int>(row.size());
    if (static_cast<int>(row.size()) != out.cols)
      file_error(path, lineno,
                 "ragged row: " + std::to_string(row.size()) + " values, expected " +
                     std::to_string(out.cols));
    out.data.insert(out.data.end(), row.begin(), row.end());
    ++out.rows;
  }
  if (out.rows != num_nodes)
    throw std::runtime_error(path + ": " + std::to_string(out.rows) + " feature rows for " +
                             std::to_string(num_nodes) + " nodes");
  return out;
}

DatasetBundle load_dataset(const std::string& graph_path, const std::string& features_path,
                           const std::string& labels_path) {
  DatasetBundle bundle;
  bundle.graph_path = graph_path;
  bundle.name = std::filesystem::path(graph_path).stem().string();
  bundle.graph = load_edge_list(graph_path);
  if (!features_path.empty()) {
    bundle.features = load_features(features_path, bundle.graph.num_nodes());
    bundle.features_path = features_path;
  }
  if (!labels_path.empty()) {
    bundle.labels = load_labels(labels_path, bundle.graph.num_nodes());
    bundle.labels_path = labels_path;
  }
  return bundle;
}

GraphCollection load_graph_collection(const std::string& list_path, int degree_onehot_cap) {
  std::ifstream in = open_or_throw(list_path);
  const auto base = std::filesystem::path(list_path).parent_path();
  GraphCollection coll;
  coll.feature_dim = degree_onehot_cap + 1;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ss(strip_comment(line));
    std::string rel;
    long long label;
    if (!(ss >> rel)) continue;
    if (!(ss >> label)) file_error(list_path, lineno, "expected `path label`");
    if (label < 0) file_error(list_path, lineno, "negative label");
    Graph g = load_edge_list((base / rel).string());
    if (g.num_edges() == 0)
      file_error(list_path, lineno, "graph '" + rel + "' has no edges; cannot decompose");
    coll.features.push_back(degree_onehot_features(g, degree_onehot_cap));
    coll.graphs.push_back(std::move(g));
    coll.labels.push_back(static_cast<int>(label));
    coll.ids.push_back(rel);
    coll.num_classes = std::max(coll.num_classes, static_cast<int>(label) + 1);
  }
  if (coll.graphs.empty()) throw std::runtime_error(list_path + ": no graphs listed");
  return coll;
}

FeatureMatrix degree_onehot_features(const Graph& g, int cap) {
  if (cap < 1) throw std::invalid_argument("degree_onehot_features: cap must be >= 1");
  FeatureMatrix f;
  f.rows = g.num_nodes();
  f.cols = cap + 1;
  f.data.assign(static_cast<size_t>(f.rows) * f.cols, 0.0);
  for (int v = 0; v < g.num_nodes(); ++v) f.at(v, std::min(g.degree(v), cap)) = 1.0;
  return f;
}

FeatureMatrix identity_features(const Graph& g) {
  FeatureMatrix f;
  f.rows = g.num_nodes();
  f.cols = g.num_nodes();
  f.data.assign(static_cast<size_t>(f.rows) * f.cols, 0.0);
  for (int v = 0; v < g.num_nodes(); ++v) f.at(v, v) = 1.0;
  return f;
}

}  // namespace cacose
