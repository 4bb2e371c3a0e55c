#include "cacose/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cacose/kernels.hpp"

namespace cacose::ad {

namespace {

std::string shape_str(int r, int c) {
  return std::to_string(r) + "x" + std::to_string(c);
}

[[noreturn]] void shape_error(const char* op, int ar, int ac, int br, int bc) {
  throw std::invalid_argument(std::string(op) + ": incompatible shapes " + shape_str(ar, ac) +
                              " and " + shape_str(br, bc));
}

}  // namespace

int Tensor::rows() const { return tape_->node(id_).rows; }
int Tensor::cols() const { return tape_->node(id_).cols; }
bool Tensor::requires_grad() const { return tape_->node(id_).requires_grad; }
std::span<const double> Tensor::value() const { return tape_->node(id_).value; }
std::span<const double> Tensor::grad() const { return tape_->node(id_).grad; }

double Tensor::scalar() const {
  const auto& n = tape_->node(id_);
  if (n.rows != 1 || n.cols != 1) throw std::logic_error("scalar(): tensor is not 1x1");
  return n.value[0];
}

int Tape::push(int rows, int cols, bool requires_grad, std::vector<double> value) {
  Node n;
  n.rows = rows;
  n.cols = cols;
  n.requires_grad = requires_grad;
  n.value = std::move(value);
  n.grad.assign(static_cast<size_t>(rows) * cols, 0.0);
  nodes_.push_back(std::move(n));
  return static_cast<int>(nodes_.size()) - 1;
}

void Tape::check_finite(int id, const char* op) const {
  for (double x : nodes_[id].value) {
    if (!std::isfinite(x))
      throw std::runtime_error(std::string(op) + ": non-finite value in result");
  }
}

Tensor Tape::constant(int rows, int cols, std::vector<double> data) {
  if (static_cast<size_t>(rows) * cols != data.size())
    throw std::invalid_argument("constant: data length does not match shape");
  int id = push(rows, cols, false, std::move(data));
  check_finite(id, "constant");
  return wrap(id);
}

Tensor Tape::zeros(int rows, int cols) {
  return wrap(push(rows, cols, false, std::vector<double>(static_cast<size_t>(rows) * cols, 0.0)));
}

Tensor Tape::leaf(Parameter& p) {
  int id = push(p.rows, p.cols, true, p.value);
  check_finite(id, "leaf");
  nodes_[id].source = &p;
  return wrap(id);
}

Tensor Tape::matmul(Tensor a, Tensor b) {
  const auto& na = node(a.id_);
  const auto& nb = node(b.id_);
  if (na.cols != nb.rows) shape_error("matmul", na.rows, na.cols, nb.rows, nb.cols);
  const int n = na.rows, k = na.cols, m = nb.cols;
  std::vector<double> out(static_cast<size_t>(n) * m);
  kernels::matmul(na.value.data(), nb.value.data(), out.data(), n, k, m);
  int id = push(n, m, na.requires_grad || nb.requires_grad, std::move(out));
  check_finite(id, "matmul");
  int ia = a.id_, ib = b.id_;
  node(id).backprop = [id, ia, ib, n, k, m](Tape& t) {
    auto& self = t.node(id);
    auto& pa = t.node(ia);
    auto& pb = t.node(ib);
    // dA += dOut * B^T ; dB += A^T * dOut
    std::vector<double> tmp(static_cast<size_t>(n) * k);
    kernels::matmul_a_bt(self.grad.data(), pb.value.data(), tmp.data(), n, m, k);
    for (size_t i = 0; i < tmp.size(); ++i) pa.grad[i] += tmp[i];
    std::vector<double> tmp2(static_cast<size_t>(k) * m);
    kernels::matmul_at_b(pa.value.data(), self.grad.data(), tmp2.data(), n, k, m);
    for (size_t i = 0; i < tmp2.size(); ++i) pb.grad[i] += tmp2[i];
  };
  return wrap(id);
}

Tensor Tape::add(Tensor a, Tensor b) {
  const auto& na = node(a.id_);
  const auto& nb = node(b.id_);
  const bool bias_row = nb.rows == 1 && na.cols == nb.cols && na.rows != 1;
  if (!bias_row && (na.rows != nb.rows || na.cols != nb.cols))
    shape_error("add", na.rows, na.cols, nb.rows, nb.cols);
  std::vector<double> out(na.value);
  if (bias_row) {
    for (int i = 0; i < na.rows; ++i)
      for (int j = 0; j < na.cols; ++j) out[static_cast<size_t>(i) * na.cols + j] += nb.value[j];
  } else {
    for (size_t i = 0; i < out.size(); ++i) out[i] += nb.value[i];
  }
  int id = push(na.rows, na.cols, na.requires_grad || nb.requires_grad, std::move(out));
  check_finite(id, "add");
  int ia = a.id_, ib = b.id_;
  node(id).backprop = [id, ia, ib, bias_row](Tape& t) {
    auto& self = t.node(id);
    auto& pa = t.node(ia);
    auto& pb = t.node(ib);
    for (size_t i = 0; i < self.grad.size(); ++i) pa.grad[i] += self.grad[i];
    if (bias_row) {
      for (int i = 0; i < self.rows; ++i)
        for (int j = 0; j < self.cols; ++j)
          pb.grad[j] += self.grad[static_cast<size_t>(i) * self.cols + j];
    } else {
      for (size_t i = 0; i < self.grad.size(); ++i) pb.grad[i] += self.grad[i];
    }
  };
  return wrap(id);
}

Tensor Tape::hadamard(Tensor a, Tensor b) {
  const auto& na = node(a.id_);
  const auto& nb = node(b.id_);
  if (na.rows != nb.rows || na.cols != nb.cols)
    shape_error("hadamard", na.rows, na.cols, nb.rows, nb.cols);
  std::vector<double> out(na.value.size());
  for (size_t i = 0; i < out.size(); ++i) out[i] = na.value[i] * nb.value[i];
  int id = push(na.rows, na.cols, na.requires_grad || nb.requires_grad, std::move(out));
  check_finite(id, "hadamard");
  int ia = a.id_, ib = b.id_;
  node(id).backprop = [id, ia, ib](Tape& t) {
    auto& self = t.node(id);
    auto& pa = t.node(ia);
    auto& pb = t.node(ib);
    for (size_t i = 0; i < self.grad.size(); ++i) {
      pa.grad[i] += self.grad[i] * pb.value[i];
      pb.grad[i] += self.grad[i] * pa.value[i];
    }
  };
  return wrap(id);
}

Tensor Tape::scale(Tensor a, double s) {
  if (!std::isfinite(s)) throw std::invalid_argument("scale: non-finite factor");
  const auto& na = node(a.id_);
  std::vector<double> out(na.value.size());
  for (size_t i = 0; i < out.size(); ++i) out[i] = na.value[i] * s;
  int id = push(na.rows, na.cols, na.requires_grad, std::move(out));
  check_finite(id, "scale");
  int ia = a.id_;
  node(id).backprop = [id, ia, s](Tape& t) {
    auto& self = t.node(id);
    auto& pa = t.node(ia);
    for (size_t i = 0; i < self.grad.size(); ++i) pa.grad[i] += self.grad[i] * s;
  };
  return wrap(id);
}

Tensor Tape::scale_rows(Tensor a, Tensor s) {
  const auto& na = node(a.id_);
  const auto& ns = node(s.id_);
  if (ns.cols != 1 || ns.rows != na.rows)
    shape_error("scale_rows", na.rows, na.cols, ns.rows, ns.cols);
  std::vector<double> out(na.value.size());
  for (int i = 0; i < na.rows; ++i)
    for (int j = 0; j < na.cols; ++j)
      out[static_cast<size_t>(i) * na.cols + j] =
          na.value[static_cast<size_t>(i) * na.cols + j] * ns.value[i];
  int id = push(na.rows, na.cols, na.requires_grad || ns.requires_grad, std::move(out));
  check_finite(id, "scale_rows");
  int ia = a.id_, is = s.id_;
  node(id).backprop = [id, ia, is](Tape& t) {
    auto& self = t.node(id);
    auto& pa = t.node(ia);
    auto& ps = t.node(is);
    for (int i = 0; i < self.rows; ++i) {
      double acc = 0.0;
      for (int j = 0; j < self.cols; ++j) {
        size_t off = static_cast<size_t>(i) * self.cols + j;
        pa.grad[off] += self.grad[off] * ps.value[i];
        acc += self.grad[off] * pa.value[off];
      }
      ps.grad[i] += acc;
    }
  };
  return wrap(id);
}

Tensor Tape::relu(Tensor a) {
  const auto& na = node(a.id_);
  std::vector<double> out(na.value.size());
  for (size_t i = 0; i < out.size(); ++i) out[i] = na.value[i] > 0.0 ? na.value[i] : 0.0;
  int id = push(na.rows, na.cols, na.requires_grad, std::move(out));
  int ia = a.id_;
  node(id).backprop = [id, ia](Tape& t) {
    auto& self = t.node(id);
    auto& pa = t.node(ia);
    for (size_t i = 0; i < self.grad.size(); ++i)
      if (pa.value[i] > 0.0) pa.grad[i] += self.grad[i];
  };
  return wrap(id);
}

Tensor Tape::softmax_rows(Tensor a) {
  const auto& na = node(a.id_);
  if (na.cols < 1) throw std::invalid_argument("softmax_rows: empty rows");
  std::vector<double> out(na.value.size());
  for (int i = 0; i < na.rows; ++i) {
    const double* row = na.value.data() + static_cast<size_t>(i) * na.cols;
    double* orow = out.data() + static_cast<size_t>(i) * na.cols;
    double mx = row[0];
    for (int j = 1; j < na.cols; ++j) mx = std::max(mx, row[j]);
    double sum = 0.0;
    for (int j = 0; j < na.cols; ++j) {
      orow[j] = std::exp(row[j] - mx);
      sum += orow[j];
    }
    for (int j = 0; j < na.cols; ++j) orow[j] /= sum;
  }
  int id = push(na.rows, na.cols, na.requires_grad, std::move(out));
  check_finite(id, "softmax_rows");
  int ia = a.id_;
  node(id).backprop = [id, ia](Tape& t) {
    auto& self = t.node(id);
    auto& pa = t.node(ia);
    for (int i = 0; i < self.rows; ++i) {
      const double* y = self.value.data() + static_cast<size_t>(i) * self.cols;
      const double* dy = self.grad.data() + static_cast<size_t>(i) * self.cols;
      double dot = 0.0;
      for (int j = 0; j < self.cols; ++j) dot += dy[j] * y[j];
      double* dx = pa.grad.data() + static_cast<size_t>(i) * self.cols;
      for (int j = 0; j < self.cols; ++j) dx[j] += y[j] * (dy[j] - dot);
    }
  };
  return wrap(id);
}

Tensor Tape::mean_rows(Tensor a) {
  const auto& na = node(a.id_);
  if (na.rows < 1) throw std::invalid_argument("mean_rows: no rows");
  std::vector<double> out(na.cols, 0.0);
  for (int i = 0; i < na.rows; ++i)
    for (int j = 0; j < na.cols; ++j) out[j] += na.value[static_cast<size_t>(i) * na.cols + j];
  const double inv = 1.0 / na.rows;
  for (double& x : out) x *= inv;
  int id = push(1, na.cols, na.requires_grad, std::move(out));
  check_finite(id, "mean_rows");
  int ia = a.id_;
  node(id).backprop = [id, ia, inv](Tape& t) {
    auto& self = t.node(id);
    auto& pa = t.node(ia);
    for (int i = 0; i < pa.rows; ++i)
      for (int j = 0; j < pa.cols; ++j)
        pa.grad[static_cast<size_t>(i) * pa.cols + j] += self.grad[j] * inv;
  };
  return wrap(id);
}

Tensor Tape::sum_all(Tensor a) {
  const auto& na = node(a.id_);
  double total = 0.0;
  for (double x : na.value) total += x;
  int id = push(1, 1, na.requires_grad, {total});
  check_finite(id, "sum_all");
  int ia = a.id_;
  node(id).backprop = [id, ia](Tape& t) {
    auto& self = t.node(id);
    auto& pa = t.node(ia);
    for (double& gx : pa.grad) gx += self.grad[0];
  };
  return wrap(id);
}

Tensor Tape::concat_cols(Tensor a, Tensor b) {
  const auto& na = node(a.id_);
  const auto& nb = node(b.id_);
  if (na.rows != nb.rows) shape_error("concat_cols", na.rows, na.cols, nb.rows, nb.cols);
  const int ca = na.cols, cb = nb.cols;
  std::vector<double> out(static_cast<size_t>(na.rows) * (ca + cb));
  for (int i = 0; i < na.rows; ++i) {
    std::copy_n(na.value.data() + static_cast<size_t>(i) * ca, ca,
                out.data() + static_cast<size_t>(i) * (ca + cb));
    std::copy_n(nb.value.data() + static_cast<size_t>(i) * cb, cb,
                out.data() + static_cast<size_t>(i) * (ca + cb) + ca);
  }
  int id = push(na.rows, ca + cb, na.requires_grad || nb.requires_grad, std::move(out));
  int ia = a.id_, ib = b.id_;
  node(id).backprop = [id, ia, ib, ca, cb](Tape& t) {
    auto& self = t.node(id);
    auto& pa = t.node(ia);
    auto& pb = t.node(ib);
    for (int i = 0; i < self.rows; ++i) {
      const double* g = self.grad.data() + static_cast<size_t>(i) * (ca + cb);
      for (int j = 0; j < ca; ++j) pa.grad[static_cast<size_t>(i) * ca + j] += g[j];
      for (int j = 0; j < cb; ++j) pb.grad[static_cast<size_t>(i) * cb + j] += g[ca + j];
    }
  };
  return wrap(id);
}

Tensor Tape::concat_rows(Tensor a, Tensor b) {
  const auto& na = node(a.id_);
  const auto& nb = node(b.id_);
  if (na.cols != nb.cols) shape_error("concat_rows", na.rows, na.cols, nb.rows, nb.cols);
  std::vector<double> out;
  out.reserve(na.value.size() + nb.value.size());
  out.insert(out.end(), na.value.begin(), na.value.end());
  out.insert(out.end(), nb.value.begin(), nb.value.end());
  int id = push(na.rows + nb.rows, na.cols, na.requires_grad || nb.requires_grad, std::move(out));
  int ia = a.id_, ib = b.id_;
  const size_t split = na.value.size();
  node(id).backprop = [id, ia, ib, split](Tape& t) {
    auto& self = t.node(id);
    auto& pa = t.node(ia);
    auto& pb = t.node(ib);
    for (size_t i = 0; i < split; ++i) pa.grad[i] += self.grad[i];
    for (size_t i = split; i < self.grad.size(); ++i) pb.grad[i - split] += self.grad[i];
  };
  return wrap(id);
}

Tensor Tape::transpose(Tensor a) {
  const auto& na = node(a.id_);
  std::vector<double> out(na.value.size());
  for (int i = 0; i < na.rows; ++i)
    for (int j = 0; j < na.cols; ++j)
      out[static_cast<size_t>(j) * na.rows + i] = na.value[static_cast<size_t>(i) * na.cols + j];
  int id = push(na.cols, na.rows, na.requires_grad, std::move(out));
  int ia = a.id_;
  node(id).backprop = [id, ia](Tape& t) {
    auto& self = t.node(id);
    auto& pa = t.node(ia);
    for (int i = 0; i < self.rows; ++i)
      for (int j = 0; j < self.cols; ++j)
        pa.grad[static_cast<size_t>(j) * self.rows + i] +=
            self.grad[static_cast<size_t>(i) * self.cols + j];
  };
  return wrap(id);
}

Tensor Tape::slice_cols(Tensor a, int col_begin, int col_end) {
  const auto& na = node(a.id_);
  if (col_begin < 0 || col_end > na.cols || col_begin >= col_end)
    throw std::invalid_argument("slice_cols: bad range [" + std::to_string(col_begin) + "," +
                                std::to_string(col_end) + ") for " +
                                shape_str(na.rows, na.cols));
  const int w = col_end - col_begin;
  std::vector<double> out(static_cast<size_t>(na.rows) * w);
  for (int i = 0; i < na.rows; ++i)
    std::copy_n(na.value.data() + static_cast<size_t>(i) * na.cols + col_begin, w,
                out.data() + static_cast<size_t>(i) * w);
  int id = push(na.rows, w, na.requires_grad, std::move(out));
  int ia = a.id_;
  node(id).backprop = [id, ia, col_begin, w](Tape& t) {
    auto& self = t.node(id);
    auto& pa = t.node(ia);
    for (int i = 0; i < self.rows; ++i)
      for (int j = 0; j < w; ++j)
        pa.grad[static_cast<size_t>(i) * pa.cols + col_begin + j] +=
            self.grad[static_cast<size_t>(i) * w + j];
  };
  return wrap(id);
}

Tensor Tape::repeat_rows(Tensor a, int copies) {
  const auto& na = node(a.id_);
  if (na.rows != 1) throw std::invalid_argument("repeat_rows: input must be a single row");
  if (copies < 1) throw std::invalid_argument("repeat_rows: copies must be >= 1");
  std::vector<double> out(static_cast<size_t>(copies) * na.cols);
  for (int i = 0; i < copies; ++i)
    std::copy_n(na.value.data(), na.cols, out.data() + static_cast<size_t>(i) * na.cols);
  int id = push(copies, na.cols, na.requires_grad, std::move(out));
  int ia = a.id_;
  node(id).backprop = [id, ia](Tape& t) {
    auto& self = t.node(id);
    auto& pa = t.node(ia);
    for (int i = 0; i < self.rows; ++i)
      for (int j = 0; j < self.cols; ++j)
        pa.grad[j] += self.grad[static_cast<size_t>(i) * self.cols + j];
  };
  return wrap(id);
}

Tensor Tape::gather_rows(Tensor a, std::vector<int> idx) {
  const auto& na = node(a.id_);
  for (int i : idx)
    if (i < 0 || i >= na.rows)
      throw std::out_of_range("gather_rows: index " + std::to_string(i) + " out of range");
  std::vector<double> out(idx.size() * na.cols);
  for (size_t r = 0; r < idx.size(); ++r)
    std::copy_n(na.value.data() + static_cast<size_t>(idx[r]) * na.cols, na.cols,
                out.data() + r * na.cols);
  int id = push(static_cast<int>(idx.size()), na.cols, na.requires_grad, std::move(out));
  int ia = a.id_;
  auto shared_idx = std::make_shared<std::vector<int>>(std::move(idx));
  node(id).backprop = [id, ia, shared_idx](Tape& t) {
    auto& self = t.node(id);
    auto& pa = t.node(ia);
    for (size_t r = 0; r < shared_idx->size(); ++r)
      for (int j = 0; j < self.cols; ++j)
        pa.grad[static_cast<size_t>((*shared_idx)[r]) * self.cols + j] +=
            self.grad[r * self.cols + j];
  };
  return wrap(id);
}

Tensor Tape::scatter_add_rows(Tensor a, std::vector<int> idx, int num_rows) {
  const auto& na = node(a.id_);
  if (static_cast<int>(idx.size()) != na.rows)
    throw std::invalid_argument("scatter_add_rows: index count does not match rows");
  for (int i : idx)
    if (i < 0 || i >= num_rows)
      throw std::out_of_range("scatter_add_rows: index " + std::to_string(i) + " out of range");
  std::vector<double> out(static_cast<size_t>(num_rows) * na.cols, 0.0);
  for (size_t r = 0; r < idx.size(); ++r)
    for (int j = 0; j < na.cols; ++j)
      out[static_cast<size_t>(idx[r]) * na.cols + j] += na.value[r * na.cols + j];
  int id = push(num_rows, na.cols, na.requires_grad, std::move(out));
  check_finite(id, "scatter_add_rows");
  int ia = a.id_;
  auto shared_idx = std::make_shared<std::vector<int>>(std::move(idx));
  node(id).backprop = [id, ia, shared_idx](Tape& t) {
    auto& self = t.node(id);
    auto& pa = t.node(ia);
    for (size_t r = 0; r < shared_idx->size(); ++r)
      for (int j = 0; j < self.cols; ++j)
        pa.grad[r * self.cols + j] += self.grad[static_cast<size_t>((*shared_idx)[r]) * self.cols + j];
  };
  return wrap(id);
}

Tensor Tape::cross_entropy(Tensor logits, const std::vector<int>& targets) {
  const auto& nl = node(logits.id_);
  if (static_cast<int>(targets.size()) != nl.rows)
    throw std::invalid_argument("cross_entropy: target count does not match logit rows");
  for (int t : targets)
    if (t < 0 || t >= nl.cols)
      throw std::out_of_range("cross_entropy: target class " + std::to_string(t) + " out of range");

  const int n = nl.rows, c = nl.cols;
  double loss = 0.0;
  for (int i = 0; i < n; ++i) {
    const double* row = nl.value.data() + static_cast<size_t>(i) * c;
    double mx = row[0];
    for (int j = 1; j < c; ++j) mx = std::max(mx, row[j]);
    double lse = 0.0;
    for (int j = 0; j < c; ++j) lse += std::exp(row[j] - mx);
    loss += mx + std::log(lse) - row[targets[i]];
  }
  loss /= n;
  int id = push(1, 1, nl.requires_grad, {loss});
  check_finite(id, "cross_entropy");
  int il = logits.id_;
  auto shared_targets = std::make_shared<std::vector<int>>(targets);
  node(id).backprop = [id, il, shared_targets, n, c](Tape& t) {
    auto& self = t.node(id);
    auto& pl = t.node(il);
    const double g = self.grad[0] / n;
    for (int i = 0; i < n; ++i) {
      const double* row = pl.value.data() + static_cast<size_t>(i) * c;
      double mx = row[0];
      for (int j = 1; j < c; ++j) mx = std::max(mx, row[j]);
      double lse = 0.0;
      for (int j = 0; j < c; ++j) lse += std::exp(row[j] - mx);
      for (int j = 0; j < c; ++j) {
        double p = std::exp(row[j] - mx) / lse;
        pl.grad[static_cast<size_t>(i) * c + j] +=
            g * (p - (j == (*shared_targets)[i] ? 1.0 : 0.0));
      }
    }
  };
  return wrap(id);
}

void Tape::backward(Tensor loss) {
  if (loss.tape_ != this) throw std::logic_error("backward: loss from a different tape");
  auto& ln = node(loss.id_);
  if (ln.rows != 1 || ln.cols != 1) throw std::invalid_argument("backward: loss must be 1x1");
  if (nodes_.empty()) throw std::logic_error("backward: empty tape");
  ln.grad[0] = 1.0;
  for (int id = loss.id_; id >= 0; --id) {
    Node& n = nodes_[id];
    if (!n.requires_grad) continue;
    if (n.backprop) n.backprop(*this);
    if (n.source) {
      for (size_t i = 0; i < n.grad.size(); ++i) n.source->grad[i] += n.grad[i];
    }
  }
}

}  // namespace cacose::ad
