#pragma once

#include <string>
#include <vector>

#include "cacose/decompose.hpp"
#include "cacose/rng.hpp"
#include "cacose/tensor.hpp"

namespace cacose {

// Dense symmetric-normalized adjacency with self-loops for a local
// subgraph: D^{-1/2} (A + I) D^{-1/2}, row-major n x n.
std::vector<double> normalize_adjacency(const Subgraph& sub);

// Glorot-uniform fill, seeded; biases are zeroed separately.
void glorot_init(ad::Parameter& p, Rng& rng);

// One graph convolution: ReLU(A_hat * H * W).
struct GcnLayer {
  ad::Parameter weight;

  GcnLayer() = default;
  GcnLayer(const std::string& name, int d_in, int d_out, Rng& rng);

  // a_hat is the cached normalized adjacency for the subgraph being encoded.
  ad::Tensor forward(ad::Tape& tape, ad::Tensor a_hat, ad::Tensor h);
  // linear variant without the activation (used for attention scores)
  ad::Tensor forward_linear(ad::Tape& tape, ad::Tensor a_hat, ad::Tensor h);
};

struct SagPoolResult {
  ad::Tensor embedding;       // 1 x d readout of the score-scaled selection
  std::vector<int> selected;  // local node ids, the top-ceil(PR*N) by score
};

// Self-attention pooling: scores from a 1-channel GCN, top-ceil(PR*N)
// selection with ties broken by lower node index, selected rows scaled by
// their scores, mean readout.
struct SagPool {
  GcnLayer attention;
  double pooling_ratio = 0.5;

  SagPool() = default;
  SagPool(const std::string& name, int d_in, double ratio, Rng& rng);

  SagPoolResult forward(ad::Tape& tape, ad::Tensor a_hat, ad::Tensor h);
};

// Number of nodes kept by the pooling for a subgraph of n nodes.
int sagpool_keep_count(int n, double pooling_ratio);

// Scaled dot-product attention over the stack of subgraph embeddings.
// dim is split into `heads` slices for Q/K/V; head outputs are concatenated
// and, when heads > 1, linearly projected. With one head this is exactly
// softmax(Q K^T / sqrt(dim)) V.
struct CrossAttention {
  ad::Parameter wq, wk, wv, wo;
  int heads = 1;
  int dim = 0;

  CrossAttention() = default;
  CrossAttention(const std::string& name, int dim, int heads, Rng& rng);

  ad::Tensor forward(ad::Tape& tape, ad::Tensor z);
};

// Two affine layers with a ReLU between.
struct MlpHead {
  ad::Parameter w1, b1, w2, b2;

  MlpHead() = default;
  MlpHead(const std::string& name, int d_in, int d_hidden, int d_out, Rng& rng);

  ad::Tensor forward(ad::Tape& tape, ad::Tensor x);
};

}  // namespace cacose
