#include "footlift/nn/adamw.hpp"

#include <cmath>

namespace footlift::nn {

AdamW::AdamW(ParamStore& params, AdamWConfig cfg) : params_(params), cfg_(cfg) {
  for (const auto& p : params_.items()) {
    m_.emplace_back(p.value.shape());
    v_.emplace_back(p.value.shape());
  }
}

void AdamW::step(double lr_override, double grad_scale) {
  const double lr = lr_override < 0.0 ? cfg_.lr : lr_override;
  ++t_;
  const double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
  size_t i = 0;
  for (auto& p : params_.items()) {
    if (!p.grad.same_shape(p.value)) throw ShapeMismatch("adamw: " + p.name);
    auto g = p.grad.map().array() * grad_scale;
    auto m = m_[i].map().array();
    auto v = v_[i].map().array();
    m = cfg_.beta1 * m + (1.0 - cfg_.beta1) * g;
    v = cfg_.beta2 * v + (1.0 - cfg_.beta2) * g.square();
    p.value.map().array() -=
        lr * (m / bc1) / ((v / bc2).sqrt() + cfg_.eps) +
        lr * cfg_.weight_decay * p.value.map().array();
    ++i;
  }
}

void AdamW::restore(std::vector<Tensor> m, std::vector<Tensor> v, long t) {
  if (m.size() != m_.size() || v.size() != v_.size())
    throw ShapeMismatch("adamw restore: state count mismatch");
  size_t i = 0;
  for (const auto& p : params_.items()) {
    if (!m[i].same_shape(p.value) || !v[i].same_shape(p.value))
      throw ShapeMismatch("adamw restore: state shape mismatch at " + p.name);
    ++i;
  }
  m_ = std::move(m);
  v_ = std::move(v);
  t_ = t;
}

}  // namespace footlift::nn
