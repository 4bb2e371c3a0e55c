#include "cacose/model.hpp"

#include <cmath>
#include <stdexcept>

namespace cacose {

CacoseConfig CacoseConfig::node_defaults() { return CacoseConfig{}; }

CacoseConfig CacoseConfig::graph_defaults() {
  CacoseConfig c;
  c.heads = 1;
  c.max_epochs = 100;
  c.patience = 25;
  c.train_fraction = 0.8;
  c.val_fraction = 0.1;
  c.test_fraction = 0.1;
  return c;
}

void CacoseConfig::validate() const {
  auto positive = [](double x, const char* what) {
    if (!(x > 0))
      throw std::invalid_argument(std::string("config: ") + what + " must be positive");
  };
  positive(delta, "delta");
  positive(pooling_ratio, "pooling_ratio");
  positive(heads, "heads");
  positive(hidden_dim, "hidden_dim");
  positive(subgraph_dim, "subgraph_dim");
  positive(num_gcn_layers, "num_gcn_layers");
  positive(learning_rate, "learning_rate");
  positive(max_epochs, "max_epochs");
  positive(patience, "patience");
  positive(train_fraction, "train_fraction");
  positive(val_fraction, "val_fraction");
  positive(test_fraction, "test_fraction");
  positive(degree_onehot_cap, "degree_onehot_cap");
  if (weight_decay < 0) throw std::invalid_argument("config: weight_decay must be >= 0");
  if (pooling_ratio > 1.0) throw std::invalid_argument("config: pooling_ratio must lie in (0,1]");
  if (std::abs(train_fraction + val_fraction + test_fraction - 1.0) > 1e-9)
    throw std::invalid_argument("config: split fractions must sum to 1");
  if (subgraph_dim != hidden_dim)
    throw std::invalid_argument(
        "config: subgraph_dim must equal hidden_dim (pooled embeddings are mean readouts of "
        "hidden-dim rows and the attention projections are square)");
  if (hidden_dim % heads != 0)
    throw std::invalid_argument("config: hidden_dim must be divisible by heads");
}

CacoseModel::CacoseModel(CacoseConfig config, int feature_dim, int num_classes)
    : config_(config), feature_dim_(feature_dim), num_classes_(num_classes) {
  config_.validate();
  if (feature_dim < 1) throw std::invalid_argument("model: feature_dim must be >= 1");
  if (num_classes < 2) throw std::invalid_argument("model: need at least 2 classes");
  Rng cross_rng = Rng::substream(config_.seed, "init-cross");
  cross_ = CrossAttention("cross", config_.subgraph_dim, config_.heads, cross_rng);
  Rng nh_rng = Rng::substream(config_.seed, "init-node-head");
  node_head_ = MlpHead("node_head", config_.hidden_dim + config_.subgraph_dim,
                       config_.hidden_dim, num_classes_, nh_rng);
  Rng gh_rng = Rng::substream(config_.seed, "init-graph-head");
  graph_head_ = MlpHead("graph_head", config_.subgraph_dim, config_.hidden_dim, num_classes_,
                        gh_rng);
}

std::vector<ad::Parameter*> CacoseModel::ensure_levels(const SubgraphFamily& family) {
  std::vector<ad::Parameter*> created;
  for (const auto& level : family.levels) {
    if (levels_.count(level.k)) continue;
    Rng rng = Rng::substream(config_.seed, "init-level", static_cast<uint64_t>(level.k));
    LevelEncoder enc;
    const std::string base = "level" + std::to_string(level.k);
    for (int l = 0; l < config_.num_gcn_layers; ++l) {
      int d_in = l == 0 ? feature_dim_ : config_.hidden_dim;
      enc.gcn.emplace_back(base + ".gcn" + std::to_string(l), d_in, config_.hidden_dim, rng);
    }
    enc.pool = SagPool(base + ".pool", config_.hidden_dim, config_.pooling_ratio, rng);
    levels_.emplace(level.k, std::move(enc));
    for (ad::Parameter* p : level_parameters(level.k)) created.push_back(p);
  }
  return created;
}

std::vector<ad::Parameter*> CacoseModel::level_parameters(int k) {
  std::vector<ad::Parameter*> out;
  LevelEncoder& enc = levels_.at(k);
  for (GcnLayer& layer : enc.gcn) out.push_back(&layer.weight);
  out.push_back(&enc.pool.attention.weight);
  return out;
}

ForwardResult CacoseModel::forward(ad::Tape& tape, const Graph& g, ad::Tensor x,
                                   const SubgraphFamily& family) {
  if (x.rows() != g.num_nodes())
    throw std::invalid_argument("forward: feature rows do not match graph nodes");
  if (x.cols() != feature_dim_)
    throw std::invalid_argument("forward: feature dim does not match model");
  for (const auto& level : family.levels) {
    for (int global : level.subgraph.to_global)
      if (global >= g.num_nodes())
        throw std::invalid_argument("forward: subgraph family does not match graph");
    if (!levels_.count(level.k))
      throw std::logic_error("forward: level encoder missing; call ensure_levels first");
  }

  ForwardResult result;
  const int n_total = g.num_nodes();
  const int merged_dim = config_.hidden_dim + config_.subgraph_dim;

  if (family.levels.empty()) {
    result.node_embeddings = tape.zeros(n_total, merged_dim);
    return result;
  }

  std::vector<ad::Tensor> level_h;
  ad::Tensor z_stack;
  for (size_t li = 0; li < family.levels.size(); ++li) {
    const auto& [k, sub] = family.levels[li];
    LevelEncoder& enc = levels_.at(k);
    const int n = sub.local.num_nodes();
    ad::Tensor a_hat = tape.constant(n, n, normalize_adjacency(sub));
    ad::Tensor h = tape.gather_rows(x, sub.to_global);
    for (GcnLayer& layer : enc.gcn) h = layer.forward(tape, a_hat, h);
    SagPoolResult pooled = enc.pool.forward(tape, a_hat, h);
    level_h.push_back(h);
    result.level_order.push_back(k);
    result.selected.emplace(k, std::move(pooled.selected));
    z_stack = li == 0 ? pooled.embedding : tape.concat_rows(z_stack, pooled.embedding);
  }

  ad::Tensor z_attn = cross_.forward(tape, z_stack);
  result.graph_embedding = tape.mean_rows(z_attn);

  ad::Tensor merged;
  for (size_t li = 0; li < family.levels.size(); ++li) {
    const auto& sub = family.levels[li].subgraph;
    ad::Tensor z_row = tape.gather_rows(z_attn, {static_cast<int>(li)});
    ad::Tensor rep = tape.repeat_rows(z_row, sub.local.num_nodes());
    ad::Tensor cat = tape.concat_cols(level_h[li], rep);
    ad::Tensor scattered = tape.scatter_add_rows(cat, sub.to_global, n_total);
    merged = li == 0 ? scattered : tape.add(merged, scattered);
  }
  result.node_embeddings = merged;
  return result;
}

ad::Tensor CacoseModel::predict_nodes(ad::Tape& tape, ad::Tensor node_embeddings) {
  return node_head_.forward(tape, node_embeddings);
}

ad::Tensor CacoseModel::predict_graph(ad::Tape& tape, ad::Tensor graph_embedding) {
  return graph_head_.forward(tape, graph_embedding);
}

std::vector<ad::Parameter*> CacoseModel::parameters() {
  std::vector<ad::Parameter*> out{&node_head_.w1, &node_head_.b1, &node_head_.w2, &node_head_.b2,
                                  &graph_head_.w1, &graph_head_.b1, &graph_head_.w2,
                                  &graph_head_.b2, &cross_.wq, &cross_.wk, &cross_.wv};
  if (cross_.heads > 1) out.push_back(&cross_.wo);
  for (auto& [k, enc] : levels_) {
    for (GcnLayer& layer : enc.gcn) out.push_back(&layer.weight);
    out.push_back(&enc.pool.attention.weight);
  }
  return out;
}

std::vector<std::vector<double>> CacoseModel::snapshot() const {
  std::vector<std::vector<double>> snap;
  for (ad::Parameter* p : const_cast<CacoseModel*>(this)->parameters()) snap.push_back(p->value);
  return snap;
}

void CacoseModel::restore(const std::vector<std::vector<double>>& snap) {
  auto params = parameters();
  if (snap.size() != params.size())
    throw std::logic_error("restore: snapshot does not match current parameter set");
  for (size_t i = 0; i < params.size(); ++i) {
    if (snap[i].size() != params[i]->value.size())
      throw std::logic_error("restore: snapshot shape mismatch for " + params[i]->name);
    params[i]->value = snap[i];
  }
}

}  // namespace cacose
