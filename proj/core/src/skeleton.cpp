#include "footlift/skeleton.hpp"

#include <cmath>

namespace footlift {

namespace {
const char* kJointNames[kNumJoints] = {
    "pelvis", "l_hip", "r_hip",   "l_knee", "r_knee",
    "l_ankle", "r_ankle", "l_foot", "r_foot"};
const int kParents[kNumJoints] = {-1, 0, 0, 1, 2, 3, 4, 5, 6};
}  // namespace

void Skeleton::validate() const {
  if (joints.size() != kNumJoints)
    throw FormatError("skeleton must have exactly 9 joints");
  for (int i = 0; i < kNumJoints; ++i) {
    const auto& j = joints[i];
    if (j.name != kJointNames[i])
      throw FormatError("joint " + std::to_string(i) + " must be named '" +
                        kJointNames[i] + "', got '" + j.name + "'");
    if (j.parent != kParents[i])
      throw FormatError("joint '" + j.name + "' has wrong parent index");
    if (!j.rest_offset.allFinite())
      throw FormatError("joint '" + j.name + "' offset is not finite");
  }
  for (const auto& m : left_markers)
    if (!m.allFinite()) throw FormatError("left marker offset is not finite");
  for (const auto& m : right_markers)
    if (!m.allFinite()) throw FormatError("right marker offset is not finite");
}

Skeleton default_skeleton() {
  Skeleton s;
  const Vec3 offsets[kNumJoints] = {
      {0.0, 0.0, 0.0},            // pelvis
      {0.0, 0.10, 0.0},           // l_hip
      {0.0, -0.10, 0.0},          // r_hip
      {0.0, 0.0, -0.42},          // l_knee
      {0.0, 0.0, -0.42},          // r_knee
      {0.0, 0.0, -0.43},          // l_ankle
      {0.0, 0.0, -0.43},          // r_ankle
      {0.20, 0.0, -0.04},         // l_foot
      {0.20, 0.0, -0.04},         // r_foot
  };
  s.joints.reserve(kNumJoints);
  for (int i = 0; i < kNumJoints; ++i)
    s.joints.push_back({kJointNames[i], kParents[i], offsets[i]});
  // big toe, small toe, heel, ankle; small toe is on the lateral side.
  s.left_markers = {Vec3(0.19, 0.0, -0.04), Vec3(0.15, 0.05, -0.04),
                    Vec3(-0.06, 0.0, -0.04), Vec3(0.0, 0.0, 0.0)};
  s.right_markers = {Vec3(0.19, 0.0, -0.04), Vec3(0.15, -0.05, -0.04),
                     Vec3(-0.06, 0.0, -0.04), Vec3(0.0, 0.0, 0.0)};
  return s;
}

}  // namespace footlift
