#include "footlift/nn/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace footlift::nn {

double grad_check(ParamStore& params, const std::function<double()>& forward_eval,
                  const std::function<double()>& backward_eval, double eps) {
  params.zero_grads();
  backward_eval();
  std::vector<Tensor> analytic;
  analytic.reserve(params.items().size());
  double grad_scale = 0.0;
  for (const auto& p : params.items()) {
    analytic.push_back(p.grad);
    for (long i = 0; i < p.grad.size(); ++i)
      grad_scale = std::max(grad_scale, std::abs(p.grad.at(i)));
  }
  // Components orders of magnitude below the gradient norm sit inside the
  // finite-difference noise floor; they are measured against the gradient's
  // scale instead of their own.
  const double floor = std::max(1e-6, 1e-6 * grad_scale);

  double max_rel = 0.0;
  size_t pi = 0;
  for (auto& p : params.items()) {
    for (long i = 0; i < p.value.size(); ++i) {
      const double saved = p.value.at(i);
      p.value.at(i) = saved + eps;
      const double fp = forward_eval();
      p.value.at(i) = saved - eps;
      const double fm = forward_eval();
      p.value.at(i) = saved;
      const double numeric = (fp - fm) / (2.0 * eps);
      const double a = analytic[pi].at(i);
      const double rel =
          std::abs(a - numeric) /
          std::max({std::abs(a), std::abs(numeric), floor});
      max_rel = std::max(max_rel, rel);
    }
    ++pi;
  }
  return max_rel;
}

}  // namespace footlift::nn
