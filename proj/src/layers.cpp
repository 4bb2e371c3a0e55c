#include "cacose/layers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace cacose {

std::vector<double> normalize_adjacency(const Subgraph& sub) {
  const int n = sub.local.num_nodes();
  if (n == 0) throw std::invalid_argument("normalize_adjacency: empty subgraph");
  std::vector<double> a(static_cast<size_t>(n) * n, 0.0);
  for (int v = 0; v < n; ++v) {
    a[static_cast<size_t>(v) * n + v] = 1.0;
    for (int w : sub.local.neighbors(v)) a[static_cast<size_t>(v) * n + w] = 1.0;
  }
  std::vector<double> inv_sqrt_deg(n);
  for (int v = 0; v < n; ++v)
    inv_sqrt_deg[v] = 1.0 / std::sqrt(static_cast<double>(sub.local.degree(v) + 1));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      a[static_cast<size_t>(i) * n + j] *= inv_sqrt_deg[i] * inv_sqrt_deg[j];
  return a;
}

void glorot_init(ad::Parameter& p, Rng& rng) {
  const double limit = std::sqrt(6.0 / (p.rows + p.cols));
  for (double& x : p.value) x = rng.uniform(-limit, limit);
}

GcnLayer::GcnLayer(const std::string& name, int d_in, int d_out, Rng& rng)
    : weight(name + ".weight", d_in, d_out) {
  glorot_init(weight, rng);
}

ad::Tensor GcnLayer::forward(ad::Tape& tape, ad::Tensor a_hat, ad::Tensor h) {
  return tape.relu(forward_linear(tape, a_hat, h));
}

ad::Tensor GcnLayer::forward_linear(ad::Tape& tape, ad::Tensor a_hat, ad::Tensor h) {
  auto w = tape.leaf(weight);
  return tape.matmul(tape.matmul(a_hat, h), w);
}

int sagpool_keep_count(int n, double pooling_ratio) {
  if (n < 1) throw std::invalid_argument("sagpool_keep_count: empty subgraph");
  if (pooling_ratio <= 0.0 || pooling_ratio > 1.0)
    throw std::invalid_argument("sagpool_keep_count: pooling ratio must lie in (0,1]");
  int keep = static_cast<int>(std::ceil(pooling_ratio * n));
  return std::clamp(keep, 1, n);
}

SagPool::SagPool(const std::string& name, int d_in, double ratio, Rng& rng)
    : attention(name + ".att", d_in, 1, rng), pooling_ratio(ratio) {}

SagPoolResult SagPool::forward(ad::Tape& tape, ad::Tensor a_hat, ad::Tensor h) {
  const int n = h.rows();
  if (n < 1) throw std::invalid_argument("SagPool: empty subgraph");

  ad::Tensor scores = attention.forward(tape, a_hat, h);  // n x 1

  const int keep = sagpool_keep_count(n, pooling_ratio);
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  auto sv = scores.value();
  std::stable_sort(order.begin(), order.end(), [&sv](int a, int b) { return sv[a] > sv[b]; });
  std::vector<int> selected(order.begin(), order.begin() + keep);

  ad::Tensor picked = tape.gather_rows(h, selected);
  ad::Tensor mask = tape.gather_rows(scores, selected);
  ad::Tensor scaled = tape.scale_rows(picked, mask);
  return {tape.mean_rows(scaled), std::move(selected)};
}

CrossAttention::CrossAttention(const std::string& name, int dim, int heads, Rng& rng)
    : wq(name + ".wq", dim, dim), wk(name + ".wk", dim, dim), wv(name + ".wv", dim, dim),
      heads(heads), dim(dim) {
  if (heads < 1 || dim % heads != 0)
    throw std::invalid_argument("CrossAttention: dim must be divisible by heads");
  glorot_init(wq, rng);
  glorot_init(wk, rng);
  glorot_init(wv, rng);
  if (heads > 1) {
    wo = ad::Parameter(name + ".wo", dim, dim);
    glorot_init(wo, rng);
  }
}

ad::Tensor CrossAttention::forward(ad::Tape& tape, ad::Tensor z) {
  if (z.cols() != dim) throw std::invalid_argument("CrossAttention: embedding dim mismatch");
  auto q = tape.matmul(z, tape.leaf(wq));
  auto k = tape.matmul(z, tape.leaf(wk));
  auto v = tape.matmul(z, tape.leaf(wv));

  const int head_dim = dim / heads;
  const double inv_sqrt = 1.0 / std::sqrt(static_cast<double>(head_dim));
  ad::Tensor out;
  for (int h = 0; h < heads; ++h) {
    const int c0 = h * head_dim, c1 = (h + 1) * head_dim;
    auto qh = tape.slice_cols(q, c0, c1);
    auto kh = tape.slice_cols(k, c0, c1);
    auto vh = tape.slice_cols(v, c0, c1);
    auto attn = tape.softmax_rows(tape.scale(tape.matmul(qh, tape.transpose(kh)), inv_sqrt));
    auto oh = tape.matmul(attn, vh);
    out = h == 0 ? oh : tape.concat_cols(out, oh);
  }
  if (heads > 1) out = tape.matmul(out, tape.leaf(wo));
  return out;
}

MlpHead::MlpHead(const std::string& name, int d_in, int d_hidden, int d_out, Rng& rng)
    : w1(name + ".w1", d_in, d_hidden), b1(name + ".b1", 1, d_hidden),
      w2(name + ".w2", d_hidden, d_out), b2(name + ".b2", 1, d_out) {
  glorot_init(w1, rng);
  glorot_init(w2, rng);
}

ad::Tensor MlpHead::forward(ad::Tape& tape, ad::Tensor x) {
  auto hidden = tape.relu(tape.add(tape.matmul(x, tape.leaf(w1)), tape.leaf(b1)));
  return tape.add(tape.matmul(hidden, tape.leaf(w2)), tape.leaf(b2));
}

}  // namespace cacose
