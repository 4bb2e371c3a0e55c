#pragma once

#include <array>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace cacose::ad {

// A trainable dense matrix. Lives outside any Tape so it persists across
// forward/backward episodes; episodes pull it in via Tape::leaf and push
// gradients back into grad.
struct Parameter {
  std::string name;
  int rows = 0;
  int cols = 0;
  std::vector<double> value;
  std::vector<double> grad;

  Parameter() = default;
  Parameter(std::string n, int r, int c)
      : name(std::move(n)), rows(r), cols(c), value(static_cast<size_t>(r) * c, 0.0),
        grad(static_cast<size_t>(r) * c, 0.0) {}

  void zero_grad() { std::fill(grad.begin(), grad.end(), 0.0); }
};

class Tape;

// Handle to a node on a Tape. Copyable; the Tape owns the storage.
class Tensor {
 public:
  Tensor() = default;
  int rows() const;
  int cols() const;
  bool requires_grad() const;
  std::span<const double> value() const;
  std::span<const double> grad() const;
  double scalar() const;  // value()[0] of a 1x1 tensor

 private:
  friend class Tape;
  Tensor(Tape* tape, int id) : tape_(tape), id_(id) {}
  Tape* tape_ = nullptr;
  int id_ = -1;
};

// Reverse-mode tape: an ordered record of executed ops. Execution order is
// a topological order of the DAG, so backward is a single reverse sweep
// that visits each node exactly once. Every forward op validates shapes and
// rejects non-finite results.
//
// A Tape and its Tensors belong to one logical thread for an episode;
// independent episodes may run concurrently on separate Tapes.
class Tape {
 public:
  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Tensor constant(int rows, int cols, std::vector<double> data);
  Tensor zeros(int rows, int cols);
  Tensor leaf(Parameter& p);

  Tensor matmul(Tensor a, Tensor b);
  // same shape, or b a 1 x c bias row broadcast over a's rows
  Tensor add(Tensor a, Tensor b);
  Tensor hadamard(Tensor a, Tensor b);
  Tensor scale(Tensor a, double s);
  // rows of a scaled by the n x 1 column s
  Tensor scale_rows(Tensor a, Tensor s);
  Tensor relu(Tensor a);
  // rowwise softmax, shift-invariant via row-max subtraction
  Tensor softmax_rows(Tensor a);
  Tensor mean_rows(Tensor a);  // 1 x c column means
  Tensor sum_all(Tensor a);    // 1 x 1
  Tensor concat_cols(Tensor a, Tensor b);
  Tensor concat_rows(Tensor a, Tensor b);
  Tensor transpose(Tensor a);
  Tensor slice_cols(Tensor a, int col_begin, int col_end);
  Tensor repeat_rows(Tensor a, int copies);  // a is 1 x c
  Tensor gather_rows(Tensor a, std::vector<int> idx);
  // out[idx[i], :] += a[i, :] over a zero matrix with num_rows rows
  Tensor scatter_add_rows(Tensor a, std::vector<int> idx, int num_rows);
  // mean over rows of -log softmax(logits)[target]; returns 1 x 1
  Tensor cross_entropy(Tensor logits, const std::vector<int>& targets);

  // Seeds d(loss)/d(loss) = 1, sweeps the tape in reverse, and accumulates
  // leaf gradients into their Parameters. loss must be 1 x 1.
  void backward(Tensor loss);

  size_t num_nodes() const { return nodes_.size(); }

 private:
  friend class Tensor;

  struct Node {
    int rows = 0;
    int cols = 0;
    bool requires_grad = false;
    std::vector<double> value;
    std::vector<double> grad;
    std::function<void(Tape&)> backprop;  // empty for leaves/constants
    Parameter* source = nullptr;
  };

  Node& node(int id) { return nodes_[id]; }
  const Node& node(int id) const { return nodes_[id]; }

  int push(int rows, int cols, bool requires_grad, std::vector<double> value);
  void check_finite(int id, const char* op) const;
  Tensor wrap(int id) { return Tensor(this, id); }

  std::vector<Node> nodes_;
};

}  // namespace cacose::ad
