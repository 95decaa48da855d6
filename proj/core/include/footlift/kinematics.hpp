#pragma once

#include <array>
#include <vector>

#include "footlift/rotmath.hpp"
#include "footlift/skeleton.hpp"

namespace footlift {

struct MotionFrame {
  // Parent-relative rotations in 6D; the pelvis entry is the root
  // orientation in the camera frame.
  std::array<Rot6, kNumJoints> rel6;
  Vec3 trans;  // camera-space root translation, meters
};

struct MotionSequence {
  double fps = 30.0;
  std::vector<MotionFrame> frames;

  int length() const { return static_cast<int>(frames.size()); }
  void validate() const;
};

struct PoseFK {
  std::array<Mat3, kNumJoints> global_rot;  // camera frame
  std::array<Vec3, kNumJoints> joint_pos;   // camera frame, meters
};

// Ordered chain product: global[i] = global[parent(i)] * rel[i], root first.
std::array<Mat3, kNumJoints> relative_to_global(
    const Skeleton& skeleton, const std::array<Mat3, kNumJoints>& rel);

// Parent-relative rotation of a child given both global rotations.
Mat3 global_to_relative(const Mat3& global_child, const Mat3& global_parent);

PoseFK forward_kinematics(const Skeleton& skeleton, const MotionFrame& frame);

// 3D marker positions: L big toe, L small toe, L heel, L ankle, then right.
std::array<Vec3, kNumMarkers> foot_keypoints_3d(const PoseFK& pose,
                                                const Skeleton& skeleton);

// Left-multiplies the root orientation of every frame by r; all
// parent-relative rotations and translations are untouched.
MotionSequence apply_root_augmentation(const MotionSequence& seq, const Mat3& r);

// Convenience: per-frame global rotations of one joint.
std::vector<Mat3> global_rotations(const Skeleton& skeleton,
                                   const MotionSequence& seq, int joint);

}  // namespace footlift
