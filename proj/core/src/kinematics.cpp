#include "footlift/kinematics.hpp"

namespace footlift {

void MotionSequence::validate() const {
  if (frames.empty()) throw LengthMismatch("motion sequence has no frames");
  if (!(fps > 0.0)) throw FormatError("fps must be positive");
  for (const auto& f : frames) {
    for (const auto& r : f.rel6) rot6d_to_rotmat(r);  // throws on degenerate
    if (!f.trans.allFinite()) throw FormatError("translation is not finite");
  }
}

std::array<Mat3, kNumJoints> relative_to_global(
    const Skeleton& skeleton, const std::array<Mat3, kNumJoints>& rel) {
  std::array<Mat3, kNumJoints> global;
  for (int i = 0; i < kNumJoints; ++i) {
    const int parent = skeleton.joints[i].parent;
    global[i] = parent < 0 ? rel[i] : compose(global[parent], rel[i]);
  }
  return global;
}

Mat3 global_to_relative(const Mat3& global_child, const Mat3& global_parent) {
  return global_parent.transpose() * global_child;
}

PoseFK forward_kinematics(const Skeleton& skeleton, const MotionFrame& frame) {
  std::array<Mat3, kNumJoints> rel;
  for (int i = 0; i < kNumJoints; ++i) rel[i] = rot6d_to_rotmat(frame.rel6[i]);
  PoseFK pose;
  pose.global_rot = relative_to_global(skeleton, rel);
  for (int i = 0; i < kNumJoints; ++i) {
    const int parent = skeleton.joints[i].parent;
    pose.joint_pos[i] =
        parent < 0 ? frame.trans
                   : pose.joint_pos[parent] +
                         pose.global_rot[parent] * skeleton.joints[i].rest_offset;
  }
  return pose;
}

std::array<Vec3, kNumMarkers> foot_keypoints_3d(const PoseFK& pose,
                                                const Skeleton& skeleton) {
  std::array<Vec3, kNumMarkers> out;
  for (int side = 0; side < 2; ++side) {
    const int ankle = side == 0 ? kLeftAnkle : kRightAnkle;
    const auto& markers = skeleton.markers(side == 0);
    for (int k = 0; k < kMarkersPerFoot; ++k)
      out[side * kMarkersPerFoot + k] =
          pose.joint_pos[ankle] + pose.global_rot[ankle] * markers[k];
  }
  return out;
}

MotionSequence apply_root_augmentation(const MotionSequence& seq, const Mat3& r) {
  MotionSequence out = seq;
  for (auto& frame : out.frames) {
    const Mat3 root = rot6d_to_rotmat(frame.rel6[kPelvis]);
    frame.rel6[kPelvis] = rotmat_to_rot6d(compose(r, root));
  }
  return out;
}

std::vector<Mat3> global_rotations(const Skeleton& skeleton,
                                   const MotionSequence& seq, int joint) {
  std::vector<Mat3> out;
  out.reserve(seq.frames.size());
  for (const auto& frame : seq.frames) {
    std::array<Mat3, kNumJoints> rel;
    for (int i = 0; i < kNumJoints; ++i) rel[i] = rot6d_to_rotmat(frame.rel6[i]);
    out.push_back(relative_to_global(skeleton, rel)[joint]);
  }
  return out;
}

}  // namespace footlift
