#include "footlift/footmr.hpp"

#include "footlift/kinematics.hpp"

namespace footlift {

using nn::Graph;
using nn::Tensor;
using nn::Var;

std::string to_string(OutputMode m) {
  switch (m) {
    case OutputMode::relative: return "relative";
    case OutputMode::global: return "global";
    case OutputMode::residual_relative: return "residual_relative";
    case OutputMode::residual_global: return "residual_global";
  }
  return "?";
}

OutputMode output_mode_from_string(const std::string& s) {
  if (s == "relative") return OutputMode::relative;
  if (s == "global") return OutputMode::global;
  if (s == "residual_relative") return OutputMode::residual_relative;
  if (s == "residual_global") return OutputMode::residual_global;
  throw ConfigError("unknown output mode: " + s);
}

void ModelConfig::validate() const {
  if (d_h < 2 || layers < 1 || heads < 1)
    throw ConfigError("model dimensions must be positive");
  if (d_h % heads != 0) throw ConfigError("d_h must be divisible by heads");
  if ((d_h / heads) % 2 != 0)
    throw ConfigError("head dimension must be even for rotary embeddings");
  if (window < 0) throw ConfigError("window must be >= 0");
  if (!(rope_base > 0.0)) throw ConfigError("rope_base must be positive");
  normalize_input_joints(input_joints);  // throws on duplicates
}

namespace {

FootMR::AppliedOutput apply_output_impl(
    Graph& g, Var delta, Var init_l6, Var init_r6,
    const std::vector<std::array<Mat3, 2>>& knee_global, OutputMode mode) {
  const int L = delta.rows();
  if (delta.cols() != 12) throw ShapeMismatch("delta must be [L, 12]");
  if (static_cast<int>(knee_global.size()) != L)
    throw LengthMismatch("knee stream vs delta length");

  FootMR::AppliedOutput out;
  for (int side = 0; side < 2; ++side) {
    std::vector<Mat3> knees(L);
    for (int l = 0; l < L; ++l) knees[l] = knee_global[l][side];
    Var knee9 = g.constant(pack_mats9(knees));
    Var delta6 = g.slice_cols(delta, 6 * side, 6);
    Var init6 = side == 0 ? init_l6 : init_r6;

    switch (mode) {
      case OutputMode::residual_global: {
        Var sum = g.add(delta6, g.detach(init6));
        out.global9[side] = gs_rot6_to_mat9(g, sum);
        out.rel9[side] = matrow_tn(g, knee9, out.global9[side]);
        break;
      }
      case OutputMode::residual_relative: {
        // Initial estimate converted to the knee-relative frame first.
        std::vector<Rot6> init_rel(L);
        for (int l = 0; l < L; ++l) {
          const Mat3 init_mat = rot6d_to_rotmat(unpack_rot6(init6.value())[l]);
          init_rel[l] =
              rotmat_to_rot6d(global_to_relative(init_mat, knees[l]));
        }
        Var sum = g.add(delta6, g.constant(pack_rot6(init_rel)));
        out.rel9[side] = gs_rot6_to_mat9(g, sum);
        out.global9[side] = matrow_nn(g, knee9, out.rel9[side]);
        break;
      }
      case OutputMode::global: {
        out.global9[side] = gs_rot6_to_mat9(g, delta6);
        out.rel9[side] = matrow_tn(g, knee9, out.global9[side]);
        break;
      }
      case OutputMode::relative: {
        out.rel9[side] = gs_rot6_to_mat9(g, delta6);
        out.global9[side] = matrow_nn(g, knee9, out.rel9[side]);
        break;
      }
    }
  }
  return out;
}

}  // namespace

AnkleRotations apply_output(const Tensor& delta,
                            const std::vector<std::array<Rot6, 2>>& init_ankle6,
                            const std::vector<std::array<Mat3, 2>>& knee_global,
                            OutputMode mode) {
  const int L = delta.rows();
  if (static_cast<int>(init_ankle6.size()) != L)
    throw LengthMismatch("initial ankle stream vs delta length");
  Graph g;
  std::vector<Rot6> l6(L), r6(L);
  for (int l = 0; l < L; ++l) {
    l6[l] = init_ankle6[l][0];
    r6[l] = init_ankle6[l][1];
  }
  auto applied = apply_output_impl(g, g.constant(delta),
                                   g.constant(pack_rot6(l6)),
                                   g.constant(pack_rot6(r6)), knee_global, mode);
  AnkleRotations out;
  out.global.resize(L);
  out.relative.resize(L);
  const auto gl = unpack_mats9(applied.global9[0].value());
  const auto gr = unpack_mats9(applied.global9[1].value());
  const auto rl = unpack_mats9(applied.rel9[0].value());
  const auto rr = unpack_mats9(applied.rel9[1].value());
  for (int l = 0; l < L; ++l) {
    out.global[l] = {gl[l], gr[l]};
    out.relative[l] = {rl[l], rr[l]};
  }
  return out;
}

FootMR::FootMR(const ModelConfig& cfg, std::uint64_t init_seed) : cfg_(cfg) {
  cfg_.input_joints = normalize_input_joints(cfg_.input_joints);
  cfg_.validate();
  create_params(init_seed);
}

FootMR::FootMR(const ModelConfig& cfg, nn::ParamStore params)
    : cfg_(cfg), params_(std::move(params)) {
  cfg_.input_joints = normalize_input_joints(cfg_.input_joints);
  cfg_.validate();
}

void FootMR::create_params(std::uint64_t init_seed) {
  Rng rng = Rng::substream(init_seed, 0xf00d);
  const int d = cfg_.d_h;
  auto make_mlp = [&](const std::string& prefix, int in, int hidden, int out) {
    nn::init_linear(params_.create(prefix + ".w1", in, hidden),
                    params_.create(prefix + ".b1", 1, hidden), rng);
    nn::init_linear(params_.create(prefix + ".w2", hidden, out),
                    params_.create(prefix + ".b2", 1, out), rng);
  };
  make_mlp("fuse.kp", 2 * kNumMarkers, d, d);
  make_mlp("fuse.bbox", 3, d, d);
  if (cfg_.rot_dim() > 0) make_mlp("fuse.rot", cfg_.rot_dim(), d, d);
  for (int i = 0; i < cfg_.layers; ++i) {
    const std::string p = "enc" + std::to_string(i);
    nn::init_layernorm(params_.create(p + ".ln1.g", 1, d),
                       params_.create(p + ".ln1.b", 1, d));
    for (const char* w : {"wq", "wk", "wv", "wo"}) {
      nn::init_linear(params_.create(p + ".attn." + w, d, d),
                      params_.create(p + ".attn.b" + std::string(w + 1), 1, d),
                      rng);
    }
    nn::init_layernorm(params_.create(p + ".ln2.g", 1, d),
                       params_.create(p + ".ln2.b", 1, d));
    make_mlp(p + ".ff", d, 4 * d, d);
  }
  make_mlp("head", d, d, 12);
  if (cfg_.residual()) {
    // Residual modes start exactly at the identity refinement.
    params_.at("head.w2").value.set_zero();
    params_.at("head.b2").value.set_zero();
  }
}

nn::MlpRef FootMR::mlp_ref(const std::string& prefix) {
  return {&params_.at(prefix + ".w1"), &params_.at(prefix + ".b1"),
          &params_.at(prefix + ".w2"), &params_.at(prefix + ".b2")};
}

nn::EncoderLayerRef FootMR::layer_ref(int i) {
  const std::string p = "enc" + std::to_string(i);
  nn::EncoderLayerRef ref;
  ref.ln1_g = &params_.at(p + ".ln1.g");
  ref.ln1_b = &params_.at(p + ".ln1.b");
  ref.attn = {&params_.at(p + ".attn.wq"), &params_.at(p + ".attn.bq"),
              &params_.at(p + ".attn.wk"), &params_.at(p + ".attn.bk"),
              &params_.at(p + ".attn.wv"), &params_.at(p + ".attn.bv"),
              &params_.at(p + ".attn.wo"), &params_.at(p + ".attn.bo")};
  ref.ln2_g = &params_.at(p + ".ln2.g");
  ref.ln2_b = &params_.at(p + ".ln2.b");
  ref.ff = mlp_ref(p + ".ff");
  return ref;
}

Var FootMR::fuse_tokens(Graph& g, Var foot2d, Var bboxf, Var rot) {
  Var tokens = g.add(nn::mlp(g, foot2d, mlp_ref("fuse.kp")),
                     nn::mlp(g, bboxf, mlp_ref("fuse.bbox")));
  if (cfg_.rot_dim() > 0) {
    if (rot.cols() != cfg_.rot_dim())
      throw ShapeMismatch("rotation stream width vs configured input joints");
    tokens = g.add(tokens, nn::mlp(g, rot, mlp_ref("fuse.rot")));
  }
  return tokens;
}

Var FootMR::forward(Graph& g, Var foot2d, Var bboxf, Var rot) {
  Var x = fuse_tokens(g, foot2d, bboxf, rot);
  const nn::AttentionMask mask = nn::banded_mask(x.rows(), cfg_.window);
  for (int i = 0; i < cfg_.layers; ++i) {
    auto ref = layer_ref(i);
    x = nn::encoder_layer(g, x, mask, ref, cfg_.heads, cfg_.rope_base);
  }
  return nn::mlp(g, x, mlp_ref("head"));
}

Var FootMR::forward(Graph& g, const RefineInput& input) {
  return forward(g, g.constant(input.foot2d), g.constant(input.bboxf),
                 g.constant(input.rot));
}

Tensor FootMR::forward_tensor(const RefineInput& input) {
  Graph g;
  return forward(g, input).value();
}

FootMR::AppliedOutput FootMR::apply_output_graph(
    Graph& g, Var delta, Var init_l6, Var init_r6,
    const std::vector<std::array<Mat3, 2>>& knee_global) {
  return apply_output_impl(g, delta, init_l6, init_r6, knee_global,
                           cfg_.output_mode);
}

AnkleRotations FootMR::refine_sequence(
    const ObservationSequence& obs,
    const std::vector<std::array<Rot6, 4>>& init) {
  const int L = obs.length();
  if (static_cast<int>(init.size()) != L)
    throw LengthMismatch("initial estimate stream vs observation length");
  JointRotationStreams rots;
  rots.knee.resize(L);
  rots.ankle.resize(L);
  std::vector<std::array<Rot6, 2>> init_ankle(L);
  std::vector<std::array<Mat3, 2>> knees(L);
  for (int l = 0; l < L; ++l) {
    rots.knee[l] = {init[l][0], init[l][1]};
    rots.ankle[l] = {init[l][2], init[l][3]};
    init_ankle[l] = {init[l][2], init[l][3]};
    knees[l] = {rot6d_to_rotmat(init[l][0]), rot6d_to_rotmat(init[l][1])};
  }
  return refine_streams(obs, rots, init_ankle, knees);
}

AnkleRotations FootMR::refine_streams(
    const ObservationSequence& obs, const JointRotationStreams& rots,
    const std::vector<std::array<Rot6, 2>>& init_ankle6,
    const std::vector<std::array<Mat3, 2>>& knee_global) {
  const RefineInput input = build_refine_input(obs, rots, cfg_.input_joints);
  const Tensor delta = forward_tensor(input);
  return apply_output(delta, init_ankle6, knee_global, cfg_.output_mode);
}

}  // namespace footlift
