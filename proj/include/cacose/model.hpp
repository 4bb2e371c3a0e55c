#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cacose/decompose.hpp"
#include "cacose/graph.hpp"
#include "cacose/layers.hpp"
#include "cacose/tensor.hpp"

namespace cacose {

enum class Task { NodeClassification, GraphClassification };

struct CacoseConfig {
  int delta = 3;
  double pooling_ratio = 0.5;
  int heads = 2;
  int hidden_dim = 128;
  int subgraph_dim = 128;
  int num_gcn_layers = 2;
  double learning_rate = 2.5e-3;
  double weight_decay = 1e-4;
  int max_epochs = 250;
  int patience = 50;
  uint64_t seed = 0;
  double train_fraction = 0.48;
  double val_fraction = 0.32;
  double test_fraction = 0.20;
  // cap for synthesized degree-one-hot features
  int degree_onehot_cap = 32;

  static CacoseConfig node_defaults();
  static CacoseConfig graph_defaults();

  // Throws std::invalid_argument on non-positive fields, fractions not
  // summing to 1, or subgraph_dim != hidden_dim (the pooled embedding is
  // the mean of hidden-dim rows and the attention projections are square,
  // so the two dimensions must agree).
  void validate() const;
};

struct ForwardResult {
  ad::Tensor node_embeddings;                 // N_v x (hidden + subgraph dim)
  std::optional<ad::Tensor> graph_embedding;  // 1 x subgraph dim; absent when no levels
  std::vector<int> level_order;               // k per attention row, ascending
  std::map<int, std::vector<int>> selected;   // k -> pooled local node ids
};

// Per-coreness-level subgraph encoder plus the shared cross-attention and
// prediction heads. Level encoders are created lazily as levels are
// observed (at most once per k); their init draws from a substream keyed by
// k, so parameter values do not depend on encounter order.
class CacoseModel {
 public:
  CacoseModel(CacoseConfig config, int feature_dim, int num_classes);

  const CacoseConfig& config() const { return config_; }
  int feature_dim() const { return feature_dim_; }
  int num_classes() const { return num_classes_; }

  // Creates any missing level encoders and returns pointers to the newly
  // created parameters (for optimizer registration).
  std::vector<ad::Parameter*> ensure_levels(const SubgraphFamily& family);

  // Eqs. of the pipeline: per-level GCN stack and pooling, cross-attention
  // over the stacked level embeddings, mean graph embedding, and the
  // shared-node sum merge into per-node rows. Nodes in no level get zero
  // rows. `x` must be a tape tensor with one row per global node.
  ForwardResult forward(ad::Tape& tape, const Graph& g, ad::Tensor x,
                        const SubgraphFamily& family);

  ad::Tensor predict_nodes(ad::Tape& tape, ad::Tensor node_embeddings);
  ad::Tensor predict_graph(ad::Tape& tape, ad::Tensor graph_embedding);

  // All parameters in a deterministic order (heads, attention, then levels
  // ascending in k).
  std::vector<ad::Parameter*> parameters();

  // Value snapshot/restore for best-epoch checkpointing. The snapshot only
  // covers parameters existing at snapshot time; restore requires the same
  // set.
  std::vector<std::vector<double>> snapshot() const;
  void restore(const std::vector<std::vector<double>>& snap);

  struct LevelEncoder {
    std::vector<GcnLayer> gcn;
    SagPool pool;
  };
  const std::map<int, LevelEncoder>& level_encoders() const { return levels_; }

  CrossAttention& cross_attention() { return cross_; }
  MlpHead& node_head() { return node_head_; }
  MlpHead& graph_head() { return graph_head_; }

 private:
  std::vector<ad::Parameter*> level_parameters(int k);

  CacoseConfig config_;
  int feature_dim_ = 0;
  int num_classes_ = 0;
  std::map<int, LevelEncoder> levels_;
  CrossAttention cross_;
  MlpHead node_head_;
  MlpHead graph_head_;
};

}  // namespace cacose
