#pragma once

#include <functional>

#include "footlift/nn/graph.hpp"

namespace footlift::nn {

// Central finite differences against reverse-mode gradients.
//
// backward_eval() must build a fresh graph from the current parameter
// values, call Graph::backward on a scalar loss and return its value;
// forward_eval() returns the same scalar without touching gradients.
// Every parameter component is perturbed by +-eps. The per-component
// relative error is |a - n| / max(|a|, |n|, floor) with the floor tied to
// the gradient's infinity norm (1e-6 * max(1, |grad|_inf)), so components
// buried under the finite-difference noise floor are judged against the
// gradient's scale. The max over components is returned.
double grad_check(ParamStore& params, const std::function<double()>& forward_eval,
                  const std::function<double()>& backward_eval,
                  double eps = 1e-5);

}  // namespace footlift::nn
