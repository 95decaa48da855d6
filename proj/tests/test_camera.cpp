#include <doctest.h>

#include "footlift/camera.hpp"

using namespace footlift;

namespace {
CameraIntrinsics default_cam() { return CameraIntrinsics{}; }
}  // namespace

TEST_CASE("project hits the principal point on the optical axis") {
  const Vec2 p = project(Vec3(0, 0, 2), default_cam());
  CHECK(p.x() == doctest::Approx(960.0));
  CHECK(p.y() == doctest::Approx(540.0));
}

TEST_CASE("project closed-form arithmetic") {
  const Vec2 p = project(Vec3(0.5, 0, 2), default_cam());
  CHECK(p.x() == doctest::Approx(1000.0 * 0.25 + 960.0));  // 1210
  CHECK(p.x() == doctest::Approx(1210.0));
  CHECK(p.y() == doctest::Approx(540.0));
}

TEST_CASE("doubling depth halves the offset from the principal point") {
  const CameraIntrinsics cam = default_cam();
  const Vec2 a = project(Vec3(0.3, -0.2, 2), cam);
  const Vec2 b = project(Vec3(0.3, -0.2, 4), cam);
  CHECK((b.x() - cam.cx) == doctest::Approx((a.x() - cam.cx) / 2).epsilon(1e-12));
  CHECK((b.y() - cam.cy) == doctest::Approx((a.y() - cam.cy) / 2).epsilon(1e-12));
}

TEST_CASE("points behind the camera are rejected") {
  CHECK_THROWS_AS(project(Vec3(0, 0, 0), default_cam()), BehindCamera);
  CHECK_THROWS_AS(project(Vec3(0, 0, -1), default_cam()), BehindCamera);
}

TEST_CASE("off-axis points move toward the principal point as depth grows") {
  const CameraIntrinsics cam = default_cam();
  double prev = 1e18;
  for (double z = 1.0; z < 32.0; z *= 2.0) {
    const Vec2 p = project(Vec3(0.4, 0.1, z), cam);
    const double off = (p - Vec2(cam.cx, cam.cy)).norm();
    CHECK(off < prev);
    prev = off;
  }
}

TEST_CASE("bbox_from_points basics") {
  SUBCASE("single point gets the minimum floor") {
    const BBox b = bbox_from_points({Vec2(100, 50)}, 0.2);
    CHECK(b.center.x() == doctest::Approx(100.0));
    CHECK(b.center.y() == doctest::Approx(50.0));
    CHECK(b.size == doctest::Approx(1.2));
  }
  SUBCASE("axis-aligned pair") {
    const BBox b = bbox_from_points({Vec2(0, 0), Vec2(10, 0)}, 0.0);
    CHECK(b.center.x() == doctest::Approx(5.0));
    CHECK(b.center.y() == doctest::Approx(0.0));
    CHECK(b.size == doctest::Approx(10.0));
  }
  SUBCASE("padding scales the side") {
    const BBox b = bbox_from_points({Vec2(0, 0), Vec2(10, 0)}, 0.2);
    CHECK(b.size == doctest::Approx(12.0));
  }
  SUBCASE("empty input is rejected") {
    CHECK_THROWS_AS(bbox_from_points({}, 0.2), EmptyInput);
  }
}

TEST_CASE("keypoint normalization") {
  BBox box;
  box.center = Vec2(200, 300);
  box.size = 50;
  CHECK(normalize_keypoint(Vec2(200, 300), box).norm() == doctest::Approx(0.0));
  const Vec2 n = normalize_keypoint(Vec2(250, 300), box);
  CHECK(n.x() == doctest::Approx(1.0));
  CHECK(n.y() == doctest::Approx(0.0));
  const Vec2 rt = denormalize_keypoint(normalize_keypoint(Vec2(123.4, -7.8), box), box);
  CHECK((rt - Vec2(123.4, -7.8)).norm() < 1e-12);
}

TEST_CASE("normalization is invariant to joint translation") {
  BBox box;
  box.center = Vec2(10, 20);
  box.size = 33;
  const Vec2 kp(17, 5);
  const Vec2 shift(101.5, -44.0);
  BBox moved = box;
  moved.center += shift;
  CHECK((normalize_keypoint(kp, box) - normalize_keypoint(kp + shift, moved))
            .norm() < 1e-12);
}

TEST_CASE("bbox features") {
  const CameraIntrinsics cam = default_cam();
  SUBCASE("box at the image center") {
    BBox box;
    box.center = Vec2(cam.width / 2, cam.height / 2);
    box.size = 123;
    const Vec3 f = bbox_features(box, cam);
    CHECK(f.x() == doctest::Approx(0.0));
    CHECK(f.y() == doctest::Approx(0.0));
    CHECK(f.z() == doctest::Approx(123.0 / 1000.0));
  }
  SUBCASE("size equal to focal length gives scale 1") {
    BBox box;
    box.center = Vec2(0, 0);
    box.size = cam.f;
    CHECK(bbox_features(box, cam).z() == doctest::Approx(1.0));
  }
  SUBCASE("shifting by f pixels moves the first feature by one") {
    BBox a;
    a.center = Vec2(300, 400);
    a.size = 80;
    BBox b = a;
    b.center.x() += cam.f;
    CHECK(bbox_features(b, cam).x() - bbox_features(a, cam).x() ==
          doctest::Approx(1.0).epsilon(1e-12));
  }
}
