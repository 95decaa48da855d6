#pragma once

#include <vector>

#include "footlift/nn/graph.hpp"

namespace footlift::nn {

struct AdamWConfig {
  double lr = 2e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double weight_decay = 0.0;
};

// Decoupled-weight-decay adaptive moment optimizer with bias correction:
//   p <- p - lr * mhat / (sqrt(vhat) + eps) - lr * weight_decay * p
class AdamW {
 public:
  AdamW(ParamStore& params, AdamWConfig cfg);

  // Applies one update from the gradients accumulated in the store.
  // grad_scale multiplies every gradient first (batch averaging);
  // lr_override < 0 keeps the configured rate.
  void step(double lr_override = -1.0, double grad_scale = 1.0);

  long step_count() const { return t_; }
  const AdamWConfig& config() const { return cfg_; }

  // Checkpoint access. Moment vectors follow the store's parameter order.
  const std::vector<Tensor>& m() const { return m_; }
  const std::vector<Tensor>& v() const { return v_; }
  void restore(std::vector<Tensor> m, std::vector<Tensor> v, long t);

 private:
  ParamStore& params_;
  AdamWConfig cfg_;
  std::vector<Tensor> m_, v_;
  long t_ = 0;
};

}  // namespace footlift::nn
