#pragma once

#include <array>
#include <string>
#include <vector>

#include "footlift/camera.hpp"
#include "footlift/nn/tensor.hpp"
#include "footlift/rotmath.hpp"

namespace footlift {

// Joints whose camera-frame global rotations can be fed to the network.
// Stream layout always follows chain order (pelvis, hip, knee, ankle) with
// the left side before the right, so the default {knee, ankle} set maps to
// [l_knee, r_knee, l_ankle, r_ankle].
enum class InputJoint { pelvis, hip, knee, ankle };

std::string to_string(InputJoint j);
InputJoint input_joint_from_string(const std::string& s);
// Sorts into chain order, rejects duplicates.
std::vector<InputJoint> normalize_input_joints(std::vector<InputJoint> joints);
// 6D column count of the rotation stream: pelvis contributes one block,
// every other joint two (left + right).
int rot_stream_dim(const std::vector<InputJoint>& joints);
// Column offset of the ankle block, or -1 when the ankle is not an input.
int ankle_block_offset(const std::vector<InputJoint>& joints);

// The three per-frame feature streams fed to the network.
struct RefineInput {
  nn::Tensor foot2d;  // [L, 16] bbox-normalized; zeroed when invisible
  nn::Tensor bboxf;   // [L, 3] focal-normalized center offset and scale
  nn::Tensor rot;     // [L, rot_stream_dim] global 6D rotations

  int length() const { return foot2d.rows(); }
  void validate() const;
};

// Global 6D rotation streams available for assembly; only the joints named
// in the configuration have to be filled in.
struct JointRotationStreams {
  std::vector<Rot6> pelvis;
  std::vector<std::array<Rot6, 2>> hip;    // left, right
  std::vector<std::array<Rot6, 2>> knee;
  std::vector<std::array<Rot6, 2>> ankle;
};

RefineInput build_refine_input(const ObservationSequence& obs,
                               const JointRotationStreams& rots,
                               const std::vector<InputJoint>& joints);

}  // namespace footlift
