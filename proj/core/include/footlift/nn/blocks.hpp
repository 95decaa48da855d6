#pragma once

#include "footlift/nn/graph.hpp"
#include "footlift/rng.hpp"

namespace footlift::nn {

// Two linear layers with a GELU between them.
struct MlpRef {
  Param* w1;
  Param* b1;
  Param* w2;
  Param* b2;
};

struct MhaRef {
  Param *wq, *bq, *wk, *bk, *wv, *bv, *wo, *bo;
};

// Pre-norm residual block: x + mha(norm(x)); then x + mlp(norm(x)).
struct EncoderLayerRef {
  Param *ln1_g, *ln1_b;
  MhaRef attn;
  Param *ln2_g, *ln2_b;
  MlpRef ff;
};

Var linear(Graph& g, Var x, Param& w, Param& b);
Var mlp(Graph& g, Var x, const MlpRef& p);

// Scaled dot-product attention with RoPE on q and k, an additive banded
// mask before the softmax, head concatenation and an output projection.
Var mha(Graph& g, Var x, const AttentionMask& mask, const MhaRef& p, int heads,
        double rope_base);

Var encoder_layer(Graph& g, Var x, const AttentionMask& mask,
                  const EncoderLayerRef& p, int heads, double rope_base);

// Uniform Glorot init for the weight, zeros for the bias.
void init_linear(Param& w, Param& b, Rng& rng);
void init_layernorm(Param& gain, Param& bias);

// Standalone rotary embedding over a {L, heads, d_h} tensor (also accepts
// {L, d_h}); pair (2j, 2j+1) of each head is rotated by
// positions[l] * base^(-2j/d_h).
Tensor rope_apply(const Tensor& x, const std::vector<int>& positions,
                  double base);

}  // namespace footlift::nn
