#include "footlift/camera.hpp"

#include <algorithm>
#include <limits>

namespace footlift {

void CameraIntrinsics::validate() const {
  if (!(f > 0.0)) throw FormatError("focal length must be positive");
  if (!(width > 0.0) || !(height > 0.0))
    throw FormatError("image size must be positive");
}

Vec2 project(const Vec3& point, const CameraIntrinsics& cam) {
  if (point.z() <= 1e-6)
    throw BehindCamera("z = " + std::to_string(point.z()));
  return {cam.f * point.x() / point.z() + cam.cx,
          cam.f * point.y() / point.z() + cam.cy};
}

std::vector<Vec2> project(const std::vector<Vec3>& points,
                          const CameraIntrinsics& cam) {
  std::vector<Vec2> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(project(p, cam));
  return out;
}

BBox bbox_from_points(const std::vector<Vec2>& points2d, double pad_fraction) {
  if (points2d.empty()) throw EmptyInput("bbox needs at least one point");
  Vec2 lo(std::numeric_limits<double>::infinity(),
          std::numeric_limits<double>::infinity());
  Vec2 hi = -lo;
  for (const auto& p : points2d) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  BBox box;
  box.center = 0.5 * (lo + hi);
  box.size = std::max((hi - lo).maxCoeff(), 1.0) * (1.0 + pad_fraction);
  return box;
}

Vec2 normalize_keypoint(const Vec2& uv, const BBox& bbox) {
  return (uv - bbox.center) / bbox.size;
}

Vec2 denormalize_keypoint(const Vec2& norm, const BBox& bbox) {
  return norm * bbox.size + bbox.center;
}

Vec3 bbox_features(const BBox& bbox, const CameraIntrinsics& cam) {
  return {(bbox.center.x() - cam.width / 2.0) / cam.f,
          (bbox.center.y() - cam.height / 2.0) / cam.f, bbox.size / cam.f};
}

}  // namespace footlift
