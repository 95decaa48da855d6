#pragma once

#include <array>
#include <vector>

#include "footlift/common.hpp"
#include "footlift/skeleton.hpp"

namespace footlift {

struct CameraIntrinsics {
  double f = 1000.0;  // focal length, pixels
  double cx = 960.0;
  double cy = 540.0;
  double width = 1920.0;
  double height = 1080.0;

  void validate() const;
};

// Square person box: center (u, v) and side length, pixels.
struct BBox {
  Vec2 center = Vec2::Zero();
  double size = 1.0;
};

struct Keypoint2D {
  Vec2 uv = Vec2::Zero();  // pixels
  double conf = 0.0;       // 0 = invisible, 1 = visible

  bool visible() const { return conf >= 0.5; }
};

struct ObservationFrame {
  std::array<Keypoint2D, kNumMarkers> keypoints;  // marker order, pixels
  BBox bbox;
};

struct ObservationSequence {
  double fps = 30.0;
  CameraIntrinsics camera;
  std::vector<ObservationFrame> frames;

  int length() const { return static_cast<int>(frames.size()); }
};

// Pinhole projection; throws BehindCamera when z <= 1e-6.
Vec2 project(const Vec3& point, const CameraIntrinsics& cam);
std::vector<Vec2> project(const std::vector<Vec3>& points,
                          const CameraIntrinsics& cam);

// Square box over the tight extent of the points, side floored at 1 px and
// scaled by (1 + pad_fraction). Throws EmptyInput.
BBox bbox_from_points(const std::vector<Vec2>& points2d, double pad_fraction);

// ((u - center_u) / b, (v - center_v) / b)
Vec2 normalize_keypoint(const Vec2& uv, const BBox& bbox);
Vec2 denormalize_keypoint(const Vec2& norm, const BBox& bbox);

// CLIFF-style focal-normalized triplet:
// ((center_u - width/2)/f, (center_v - height/2)/f, b/f)
Vec3 bbox_features(const BBox& bbox, const CameraIntrinsics& cam);

}  // namespace footlift
