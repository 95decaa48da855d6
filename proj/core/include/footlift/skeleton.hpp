#pragma once

#include <array>
#include <string>
#include <vector>

#include "footlift/common.hpp"

namespace footlift {

// Joint order of the reduced lower-body chain. parent_index[i] < i.
enum JointId : int {
  kPelvis = 0,
  kLeftHip = 1,
  kRightHip = 2,
  kLeftKnee = 3,
  kRightKnee = 4,
  kLeftAnkle = 5,
  kRightAnkle = 6,
  kLeftFoot = 7,
  kRightFoot = 8,
};
constexpr int kNumJoints = 9;

// Foot surface markers, in the ankle joint's local frame.
// Order per foot: big toe, small toe, heel, ankle.
constexpr int kMarkersPerFoot = 4;
constexpr int kNumMarkers = 2 * kMarkersPerFoot;
constexpr const char* kMarkerNames[kMarkersPerFoot] = {"big_toe", "small_toe",
                                                       "heel", "ankle"};

struct SkeletonJoint {
  std::string name;
  int parent;  // -1 for the root
  Vec3 rest_offset;
};

struct Skeleton {
  std::vector<SkeletonJoint> joints;
  std::array<Vec3, kMarkersPerFoot> left_markers;
  std::array<Vec3, kMarkersPerFoot> right_markers;

  const std::array<Vec3, kMarkersPerFoot>& markers(bool left) const {
    return left ? left_markers : right_markers;
  }

  // Throws FormatError if the joint list is not the expected 9-joint chain
  // in topological order or any offset is non-finite.
  void validate() const;
};

// Adult-proportioned default: hip spread 0.20 m, thigh 0.42 m, shank 0.43 m,
// ankle->toe about 0.20 m. Body frame: x forward, y left, z up.
Skeleton default_skeleton();

}  // namespace footlift
