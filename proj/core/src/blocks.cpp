#include "footlift/nn/blocks.hpp"

#include <cmath>

namespace footlift::nn {

Var linear(Graph& g, Var x, Param& w, Param& b) {
  if (x.cols() != w.value.rows())
    throw ShapeMismatch("linear: input " + std::to_string(x.cols()) +
                        " vs weight " + std::to_string(w.value.rows()));
  return g.add_rowvec(g.matmul(x, g.param(w)), g.param(b));
}

Var mlp(Graph& g, Var x, const MlpRef& p) {
  return linear(g, g.gelu(linear(g, x, *p.w1, *p.b1)), *p.w2, *p.b2);
}

Var mha(Graph& g, Var x, const AttentionMask& mask, const MhaRef& p, int heads,
        double rope_base) {
  const int d = x.cols();
  if (heads < 1 || d % heads != 0)
    throw ShapeMismatch("mha: model width not divisible by head count");
  const int dh = d / heads;
  Var q = linear(g, x, *p.wq, *p.bq);
  Var k = linear(g, x, *p.wk, *p.bk);
  Var v = linear(g, x, *p.wv, *p.bv);
  std::vector<Var> head_outputs;
  head_outputs.reserve(heads);
  const double inv_sqrt_dh = 1.0 / std::sqrt(static_cast<double>(dh));
  for (int h = 0; h < heads; ++h) {
    Var qh = g.rope(g.slice_cols(q, h * dh, dh), rope_base);
    Var kh = g.rope(g.slice_cols(k, h * dh, dh), rope_base);
    Var vh = g.slice_cols(v, h * dh, dh);
    Var scores = g.scale(g.matmul_nt(qh, kh), inv_sqrt_dh);
    Var probs = g.softmax_masked(scores, mask);
    head_outputs.push_back(g.matmul(probs, vh));
  }
  return linear(g, g.concat_cols(head_outputs), *p.wo, *p.bo);
}

Var encoder_layer(Graph& g, Var x, const AttentionMask& mask,
                  const EncoderLayerRef& p, int heads, double rope_base) {
  Var h = g.add(
      x, mha(g, g.layernorm(x, g.param(*p.ln1_g), g.param(*p.ln1_b)), mask,
             p.attn, heads, rope_base));
  return g.add(
      h, mlp(g, g.layernorm(h, g.param(*p.ln2_g), g.param(*p.ln2_b)), p.ff));
}

void init_linear(Param& w, Param& b, Rng& rng) {
  const double bound =
      std::sqrt(6.0 / static_cast<double>(w.value.rows() + w.value.cols()));
  for (long i = 0; i < w.value.size(); ++i)
    w.value.at(i) = rng.uniform(-bound, bound);
  b.value.set_zero();
}

void init_layernorm(Param& gain, Param& bias) {
  gain.value.fill(1.0);
  bias.value.set_zero();
}

Tensor rope_apply(const Tensor& x, const std::vector<int>& positions,
                  double base) {
  if (x.rank() != 2 && x.rank() != 3)
    throw ShapeMismatch("rope_apply expects {L, d} or {L, heads, d_h}");
  const int L = x.rows();
  const int heads = x.rank() == 3 ? x.shape()[1] : 1;
  const int dh = x.rank() == 3 ? x.shape()[2] : x.shape()[1];
  if (dh % 2 != 0) throw OddHeadDim("rope_apply head dimension must be even");
  if (static_cast<int>(positions.size()) != L)
    throw ShapeMismatch("rope_apply positions length");
  Tensor out = x;
  for (int l = 0; l < L; ++l) {
    for (int h = 0; h < heads; ++h) {
      double* row = out.data() + (static_cast<long>(l) * heads + h) * dh;
      for (int j = 0; j < dh / 2; ++j) {
        const double th =
            positions[l] * std::pow(base, -2.0 * j / static_cast<double>(dh));
        const double c = std::cos(th), s = std::sin(th);
        const double x0 = row[2 * j], x1 = row[2 * j + 1];
        row[2 * j] = x0 * c - x1 * s;
        row[2 * j + 1] = x0 * s + x1 * c;
      }
    }
  }
  return out;
}

}  // namespace footlift::nn
