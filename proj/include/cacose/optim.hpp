#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "cacose/tensor.hpp"

namespace cacose::ad {

struct AdamConfig {
  double lr = 2.5e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double weight_decay = 1e-4;  // decoupled
};

// Adam with decoupled weight decay. Parameters may be registered lazily
// (per-level encoders appear as new levels are observed); each keeps its
// own step counter so bias correction is right regardless of when it joins.
class Adam {
 public:
  explicit Adam(AdamConfig cfg = {}) : cfg_(cfg) {}

  void register_parameter(Parameter* p);
  bool registered(const Parameter* p) const;
  void step();
  void zero_grad();

  std::span<Parameter* const> parameters() const { return params_; }
  const AdamConfig& config() const { return cfg_; }

 private:
  struct State {
    std::vector<double> m, v;
    long long t = 0;
  };
  AdamConfig cfg_;
  std::vector<Parameter*> params_;
  std::vector<State> states_;
};

// Compares the gradients produced by loss_fn(true) against central finite
// differences of loss_fn(false). loss_fn must be deterministic; with_grad
// runs backward and accumulates into the parameters' grad buffers.
//
// Elements where the one-sided differences disagree (a ReLU kink or a
// pooling selection boundary inside the step interval) are reported as
// excluded rather than failed.
struct FiniteDiffReport {
  struct Item {
    std::string param;
    int index = 0;
    double analytic = 0.0;
    double numeric = 0.0;
    double rel_err = 0.0;
  };
  double max_rel_err = 0.0;
  int checked = 0;
  int excluded = 0;
  bool pass = false;
  Item worst;
  std::vector<Item> excluded_points;
};

FiniteDiffReport finite_diff_check(const std::function<double(bool with_grad)>& loss_fn,
                                   std::span<Parameter* const> params, double step, double tol);

}  // namespace cacose::ad
