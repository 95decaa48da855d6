#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "footlift/graph_rot.hpp"
#include "footlift/nn/blocks.hpp"
#include "footlift/refine_input.hpp"

namespace footlift {

// What the network head's 12 numbers per frame mean.
enum class OutputMode { relative, global, residual_relative, residual_global };

std::string to_string(OutputMode m);
OutputMode output_mode_from_string(const std::string& s);

struct ModelConfig {
  int d_h = 256;
  int layers = 6;
  int heads = 4;
  int window = 120;  // attend iff |i - j| <= window
  OutputMode output_mode = OutputMode::residual_global;
  std::vector<InputJoint> input_joints{InputJoint::knee, InputJoint::ankle};
  double rope_base = 10000.0;

  int rot_dim() const { return rot_stream_dim(input_joints); }
  bool residual() const {
    return output_mode == OutputMode::residual_relative ||
           output_mode == OutputMode::residual_global;
  }
  void validate() const;
};

// Refined ankle rotations per frame, left/right.
struct AnkleRotations {
  std::vector<std::array<Mat3, 2>> global;
  std::vector<std::array<Mat3, 2>> relative;
};

// Mode-dependent fusion of the network output with the initial estimate
// (residual modes add in 6D before the Gram-Schmidt recovery; direct modes
// interpret delta as the rotation itself). Returns both the global and the
// knee-relative form.
AnkleRotations apply_output(const nn::Tensor& delta,
                            const std::vector<std::array<Rot6, 2>>& init_ankle6,
                            const std::vector<std::array<Mat3, 2>>& knee_global,
                            OutputMode mode);

class FootMR {
 public:
  // Fresh parameters; the residual modes start as the identity refinement
  // (zero-initialized head output layer).
  FootMR(const ModelConfig& cfg, std::uint64_t init_seed);
  FootMR(const ModelConfig& cfg, nn::ParamStore params);  // from checkpoint

  const ModelConfig& config() const { return cfg_; }
  nn::ParamStore& params() { return params_; }
  const nn::ParamStore& params() const { return params_; }

  // Per-frame MLP embeddings summed into one token per frame: [L, d_h].
  nn::Var fuse_tokens(nn::Graph& g, nn::Var foot2d, nn::Var bboxf, nn::Var rot);

  // Token fusion, windowed encoder stack and output head: delta [L, 12]
  // (left ankle 6D, right ankle 6D).
  nn::Var forward(nn::Graph& g, nn::Var foot2d, nn::Var bboxf, nn::Var rot);
  nn::Var forward(nn::Graph& g, const RefineInput& input);
  nn::Tensor forward_tensor(const RefineInput& input);

  struct AppliedOutput {
    nn::Var global9[2];  // [L, 9] row-major camera-frame rotations
    nn::Var rel9[2];     // [L, 9] knee-relative
  };
  // Graph form of apply_output. init vars are detached internally: no
  // gradient ever reaches the initial ankle estimates.
  AppliedOutput apply_output_graph(
      nn::Graph& g, nn::Var delta, nn::Var init_l6, nn::Var init_r6,
      const std::vector<std::array<Mat3, 2>>& knee_global);

  // End-to-end inference for one sequence: build input streams from the
  // observations and the estimator's global rotations, run the network and
  // fuse the output. init order per frame: l_knee, r_knee, l_ankle, r_ankle.
  AnkleRotations refine_sequence(const ObservationSequence& obs,
                                 const std::vector<std::array<Rot6, 4>>& init);
  // General form for configurations that also consume hip/pelvis context.
  AnkleRotations refine_streams(
      const ObservationSequence& obs, const JointRotationStreams& rots,
      const std::vector<std::array<Rot6, 2>>& init_ankle6,
      const std::vector<std::array<Mat3, 2>>& knee_global);

 private:
  void create_params(std::uint64_t init_seed);
  nn::MlpRef mlp_ref(const std::string& prefix);
  nn::EncoderLayerRef layer_ref(int i);

  ModelConfig cfg_;
  nn::ParamStore params_;
};

}  // namespace footlift
