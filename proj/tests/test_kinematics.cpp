#include <doctest.h>

#include <cmath>

#include "footlift/kinematics.hpp"
#include "footlift/synth.hpp"

using namespace footlift;

namespace {

Mat3 rot_z(double deg) { return axis_angle(Vec3::UnitZ(), deg * M_PI / 180.0); }
Mat3 rot_x(double deg) { return axis_angle(Vec3::UnitX(), deg * M_PI / 180.0); }

MotionFrame identity_frame(const Vec3& trans = Vec3::Zero()) {
  MotionFrame f;
  for (auto& r : f.rel6) r = rotmat_to_rot6d(Mat3::Identity());
  f.trans = trans;
  return f;
}

std::array<Mat3, kNumJoints> random_rel(Rng& rng) {
  std::array<Mat3, kNumJoints> rel;
  for (auto& r : rel) r = sample_uniform_rotation(rng);
  return rel;
}

// Independent oracle: plain recursion instead of the iterative pass.
Mat3 recursive_global(const Skeleton& s, const std::array<Mat3, kNumJoints>& rel,
                      int joint) {
  if (s.joints[joint].parent < 0) return rel[joint];
  return recursive_global(s, rel, s.joints[joint].parent) * rel[joint];
}

}  // namespace

TEST_CASE("relative_to_global root broadcast") {
  const Skeleton s = default_skeleton();
  std::array<Mat3, kNumJoints> rel;
  for (auto& r : rel) r = Mat3::Identity();
  rel[kPelvis] = rot_z(90);
  const auto global = relative_to_global(s, rel);
  for (int i = 0; i < kNumJoints; ++i)
    CHECK((global[i] - rot_z(90)).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("relative_to_global chain pelvis-hip-knee oracle") {
  const Skeleton s = default_skeleton();
  std::array<Mat3, kNumJoints> rel;
  for (auto& r : rel) r = Mat3::Identity();
  rel[kPelvis] = rot_x(30);
  rel[kLeftHip] = rot_x(30);
  rel[kLeftKnee] = rot_x(30);
  const auto global = relative_to_global(s, rel);
  CHECK((global[kLeftKnee] - rot_x(90)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("relative_to_global equals the naive recursive oracle exactly") {
  const Skeleton s = default_skeleton();
  Rng rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    const auto rel = random_rel(rng);
    const auto global = relative_to_global(s, rel);
    for (int j = 0; j < kNumJoints; ++j) {
      const Mat3 expect = recursive_global(s, rel, j);
      CHECK((global[j] - expect).cwiseAbs().maxCoeff() == 0.0);
    }
  }
}

TEST_CASE("global_to_relative basics and inverse property") {
  const Skeleton s = default_skeleton();
  Rng rng(23);
  const Mat3 r = sample_uniform_rotation(rng);
  CHECK((global_to_relative(r, r) - Mat3::Identity()).cwiseAbs().maxCoeff() <
        1e-15);
  CHECK((global_to_relative(rot_z(90), Mat3::Identity()) - rot_z(90))
            .cwiseAbs()
            .maxCoeff() < 1e-15);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto rel = random_rel(rng);
    const auto global = relative_to_global(s, rel);
    for (int j = 1; j < kNumJoints; ++j) {
      const Mat3 back =
          global_to_relative(global[j], global[s.joints[j].parent]);
      worst = std::max(worst, (back - rel[j]).cwiseAbs().maxCoeff());
    }
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("forward_kinematics identity pose accumulates rest offsets") {
  const Skeleton s = default_skeleton();
  const PoseFK pose = forward_kinematics(s, identity_frame(Vec3(0, 0, 2)));
  CHECK((pose.joint_pos[kPelvis] - Vec3(0, 0, 2)).norm() < 1e-15);
  CHECK((pose.joint_pos[kLeftHip] - Vec3(0, 0.10, 2)).norm() < 1e-15);
  CHECK((pose.joint_pos[kLeftKnee] - Vec3(0, 0.10, 2 - 0.42)).norm() < 1e-15);
  CHECK((pose.joint_pos[kLeftAnkle] - Vec3(0, 0.10, 2 - 0.85)).norm() < 1e-15);
}

TEST_CASE("forward_kinematics two-bone oracle with flexed hip") {
  const Skeleton s = default_skeleton();
  MotionFrame f = identity_frame();
  f.rel6[kLeftHip] = rotmat_to_rot6d(rot_x(90));
  const PoseFK pose = forward_kinematics(s, f);
  // Knee offset (0,0,-0.42) rotated by Rx(90): (0, 0.42, 0).
  const Vec3 expect = Vec3(0, 0.10, 0) + Vec3(0, 0.42, 0);
  CHECK((pose.joint_pos[kLeftKnee] - expect).norm() < 1e-12);
}

TEST_CASE("bone lengths are conserved for 1000 random poses") {
  const Skeleton s = default_skeleton();
  Rng rng(29);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    MotionFrame f;
    for (auto& r : f.rel6) r = rotmat_to_rot6d(sample_uniform_rotation(rng));
    f.trans = Vec3(rng.normal(), rng.normal(), rng.normal());
    const PoseFK pose = forward_kinematics(s, f);
    for (int j = 1; j < kNumJoints; ++j) {
      const double len =
          (pose.joint_pos[j] - pose.joint_pos[s.joints[j].parent]).norm();
      worst = std::max(
          worst, std::abs(len - s.joints[j].rest_offset.norm()));
    }
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("foot markers sit at rest offsets under identity ankle") {
  const Skeleton s = default_skeleton();
  const PoseFK pose = forward_kinematics(s, identity_frame());
  const auto markers = foot_keypoints_3d(pose, s);
  for (int k = 0; k < kMarkersPerFoot; ++k) {
    CHECK((markers[k] - (pose.joint_pos[kLeftAnkle] + s.left_markers[k]))
              .norm() < 1e-15);
    CHECK((markers[kMarkersPerFoot + k] -
           (pose.joint_pos[kRightAnkle] + s.right_markers[k]))
              .norm() < 1e-15);
  }
}

TEST_CASE("ankle rotation by 180 deg about z mirrors planar markers") {
  const Skeleton s = default_skeleton();
  MotionFrame f = identity_frame();
  f.rel6[kLeftAnkle] = rotmat_to_rot6d(rot_z(180));
  const PoseFK pose = forward_kinematics(s, f);
  const auto markers = foot_keypoints_3d(pose, s);
  const Vec3 ankle = pose.joint_pos[kLeftAnkle];
  for (int k = 0; k < kMarkersPerFoot; ++k) {
    const Vec3 rel = markers[k] - ankle;
    const Vec3& off = s.left_markers[k];
    CHECK(rel.x() == doctest::Approx(-off.x()).epsilon(1e-12));
    CHECK(rel.y() == doctest::Approx(-off.y()).epsilon(1e-12));
    CHECK(rel.z() == doctest::Approx(off.z()).epsilon(1e-12));
  }
}

TEST_CASE("marker-ankle distances are invariant under any ankle rotation") {
  const Skeleton s = default_skeleton();
  Rng rng(37);
  for (int trial = 0; trial < 50; ++trial) {
    MotionFrame f = identity_frame();
    f.rel6[kLeftAnkle] = rotmat_to_rot6d(sample_uniform_rotation(rng));
    const PoseFK pose = forward_kinematics(s, f);
    const auto markers = foot_keypoints_3d(pose, s);
    for (int k = 0; k < kMarkersPerFoot; ++k)
      CHECK((markers[k] - pose.joint_pos[kLeftAnkle]).norm() ==
            doctest::Approx(s.left_markers[k].norm()).epsilon(1e-12));
  }
}

TEST_CASE("root augmentation with identity leaves the sequence unchanged") {
  Rng rng(41);
  MotionProfile p = MotionProfile::everyday();
  const MotionSequence seq = generate_sequence(p, 8, 30.0, rng);
  const MotionSequence aug = apply_root_augmentation(seq, Mat3::Identity());
  for (int l = 0; l < seq.length(); ++l)
    for (int j = 0; j < kNumJoints; ++j)
      CHECK((aug.frames[l].rel6[j] - seq.frames[l].rel6[j])
                .cwiseAbs()
                .maxCoeff() < 1e-15);
}

TEST_CASE("augmentation leaves relative ankle targets bitwise intact") {
  Rng rng(43);
  const MotionSequence seq =
      generate_sequence(MotionProfile::complex_foot(), 12, 30.0, rng);
  const Mat3 r = sample_uniform_rotation(rng);
  const MotionSequence aug = apply_root_augmentation(seq, r);
  for (int l = 0; l < seq.length(); ++l) {
    for (int j = 0; j < kNumJoints; ++j) {
      if (j == kPelvis) continue;
      CHECK((aug.frames[l].rel6[j].array() == seq.frames[l].rel6[j].array())
                .all());
    }
    CHECK((aug.frames[l].trans.array() == seq.frames[l].trans.array()).all());
  }
}

TEST_CASE("augmentation recovers original relatives through the chain") {
  const Skeleton s = default_skeleton();
  Rng rng(47);
  const MotionSequence seq =
      generate_sequence(MotionProfile::everyday(), 10, 30.0, rng);
  const Mat3 r = sample_uniform_rotation(rng);
  const MotionSequence aug = apply_root_augmentation(seq, r);
  for (int l = 0; l < seq.length(); ++l) {
    std::array<Mat3, kNumJoints> rel, rel_aug;
    for (int j = 0; j < kNumJoints; ++j) {
      rel[j] = rot6d_to_rotmat(seq.frames[l].rel6[j]);
      rel_aug[j] = rot6d_to_rotmat(aug.frames[l].rel6[j]);
    }
    const auto g0 = relative_to_global(s, rel);
    const auto g1 = relative_to_global(s, rel_aug);
    for (const int ankle : {kLeftAnkle, kRightAnkle}) {
      const int knee = s.joints[ankle].parent;
      const Mat3 back = global_to_relative(g1[ankle], g1[knee]);
      CHECK((back - rel[ankle]).cwiseAbs().maxCoeff() < 1e-12);
      // Global rotations are left-multiplied by the augmentation.
      CHECK((g1[ankle] - r * g0[ankle]).cwiseAbs().maxCoeff() < 1e-9);
    }
  }
}

TEST_CASE("FK equivariance under root augmentation") {
  const Skeleton s = default_skeleton();
  Rng rng(53);
  const MotionSequence seq =
      generate_sequence(MotionProfile::everyday(), 6, 30.0, rng);
  const Mat3 r = sample_uniform_rotation(rng);
  const MotionSequence aug = apply_root_augmentation(seq, r);
  for (int l = 0; l < seq.length(); ++l) {
    const PoseFK p0 = forward_kinematics(s, seq.frames[l]);
    const PoseFK p1 = forward_kinematics(s, aug.frames[l]);
    const Vec3 t = seq.frames[l].trans;
    for (int j = 0; j < kNumJoints; ++j) {
      const Vec3 expect = r * (p0.joint_pos[j] - t) + t;
      CHECK((p1.joint_pos[j] - expect).norm() < 1e-12);
    }
  }
}
