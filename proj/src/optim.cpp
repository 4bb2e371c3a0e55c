#include "cacose/optim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cacose::ad {

void Adam::register_parameter(Parameter* p) {
  if (registered(p))
    throw std::logic_error("Adam: parameter '" + p->name + "' registered twice");
  params_.push_back(p);
  State s;
  s.m.assign(p->value.size(), 0.0);
  s.v.assign(p->value.size(), 0.0);
  states_.push_back(std::move(s));
}

bool Adam::registered(const Parameter* p) const {
  return std::find(params_.begin(), params_.end(), p) != params_.end();
}

void Adam::step() {
  for (size_t k = 0; k < params_.size(); ++k) {
    Parameter& p = *params_[k];
    State& s = states_[k];
    ++s.t;
    const double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(s.t));
    const double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(s.t));
    for (size_t i = 0; i < p.value.size(); ++i) {
      const double g = p.grad[i];
      s.m[i] = cfg_.beta1 * s.m[i] + (1.0 - cfg_.beta1) * g;
      s.v[i] = cfg_.beta2 * s.v[i] + (1.0 - cfg_.beta2) * g * g;
      const double mhat = s.m[i] / bc1;
      const double vhat = s.v[i] / bc2;
      p.value[i] -= cfg_.lr * (mhat / (std::sqrt(vhat) + cfg_.eps) + cfg_.weight_decay * p.value[i]);
    }
  }
}

void Adam::zero_grad() {
  for (Parameter* p : params_) p->zero_grad();
}

FiniteDiffReport finite_diff_check(const std::function<double(bool with_grad)>& loss_fn,
                                   std::span<Parameter* const> params, double step, double tol) {
  FiniteDiffReport report;

  for (Parameter* p : params) p->zero_grad();
  loss_fn(true);
  std::vector<std::vector<double>> analytic;
  analytic.reserve(params.size());
  for (Parameter* p : params) analytic.push_back(p->grad);
  const double f_mid = loss_fn(false);

  report.pass = true;
  for (size_t k = 0; k < params.size(); ++k) {
    Parameter& p = *params[k];
    double scale = 1e-8;
    for (double g : analytic[k]) scale = std::max(scale, 1e-3 * std::abs(g));
    for (size_t i = 0; i < p.value.size(); ++i) {
      const double saved = p.value[i];
      p.value[i] = saved + step;
      const double f_plus = loss_fn(false);
      p.value[i] = saved - step;
      const double f_minus = loss_fn(false);
      p.value[i] = saved;

      const double d_plus = (f_plus - f_mid) / step;
      const double d_minus = (f_mid - f_minus) / step;
      const double central = (f_plus - f_minus) / (2.0 * step);
      const double a = analytic[k][i];

      const double jump_scale = std::max({std::abs(d_plus), std::abs(d_minus), 1.0});
      if (std::abs(d_plus - d_minus) > 1e-3 * jump_scale) {
        ++report.excluded;
        report.excluded_points.push_back({p.name, static_cast<int>(i), a, central, 0.0});
        continue;
      }

      const double rel = std::abs(a - central) / std::max({std::abs(a), std::abs(central), scale});
      ++report.checked;
      if (rel > report.max_rel_err) {
        report.max_rel_err = rel;
        report.worst = {p.name, static_cast<int>(i), a, central, rel};
      }
      if (rel > tol) report.pass = false;
    }
  }
  return report;
}

}  // namespace cacose::ad
