#include "footlift/refine_input.hpp"

#include <algorithm>

namespace footlift {

std::string to_string(InputJoint j) {
  switch (j) {
    case InputJoint::pelvis: return "pelvis";
    case InputJoint::hip: return "hip";
    case InputJoint::knee: return "knee";
    case InputJoint::ankle: return "ankle";
  }
  return "?";
}

InputJoint input_joint_from_string(const std::string& s) {
  if (s == "pelvis") return InputJoint::pelvis;
  if (s == "hip") return InputJoint::hip;
  if (s == "knee") return InputJoint::knee;
  if (s == "ankle") return InputJoint::ankle;
  throw ConfigError("unknown input joint: " + s);
}

std::vector<InputJoint> normalize_input_joints(std::vector<InputJoint> joints) {
  std::sort(joints.begin(), joints.end(),
            [](InputJoint a, InputJoint b) { return static_cast<int>(a) < static_cast<int>(b); });
  if (std::adjacent_find(joints.begin(), joints.end()) != joints.end())
    throw ConfigError("duplicate input joint");
  return joints;
}

int rot_stream_dim(const std::vector<InputJoint>& joints) {
  int blocks = 0;
  for (InputJoint j : joints) blocks += j == InputJoint::pelvis ? 1 : 2;
  return 6 * blocks;
}

int ankle_block_offset(const std::vector<InputJoint>& joints) {
  int off = 0;
  for (InputJoint j : joints) {
    if (j == InputJoint::ankle) return off;
    off += 6 * (j == InputJoint::pelvis ? 1 : 2);
  }
  return -1;
}

void RefineInput::validate() const {
  const int L = foot2d.rows();
  if (foot2d.cols() != 2 * kNumMarkers)
    throw ShapeMismatch("foot2d stream must be [L, 16]");
  if (bboxf.rows() != L || bboxf.cols() != 3)
    throw ShapeMismatch("bbox stream must be [L, 3]");
  if (rot.rows() != L) throw ShapeMismatch("rotation stream length");
  if (rot.cols() % 6 != 0) throw ShapeMismatch("rotation stream width");
  // Every 6D entry must describe a near-orthonormal frame.
  for (int r = 0; r < L; ++r) {
    for (int b = 0; b < rot.cols() / 6; ++b) {
      Rot6 v;
      for (int k = 0; k < 6; ++k) v[k] = rot(r, 6 * b + k);
      const Mat3 m = rot6d_to_rotmat(v);
      if ((rotmat_to_rot6d(m) - v).cwiseAbs().maxCoeff() > 1e-6)
        throw DegenerateInput("rotation stream entry is not orthonormal");
    }
  }
}

RefineInput build_refine_input(const ObservationSequence& obs,
                               const JointRotationStreams& rots,
                               const std::vector<InputJoint>& joints) {
  const int L = obs.length();
  RefineInput in;
  in.foot2d = nn::Tensor(L, 2 * kNumMarkers);
  in.bboxf = nn::Tensor(L, 3);
  in.rot = nn::Tensor(L, rot_stream_dim(joints));

  for (int l = 0; l < L; ++l) {
    const auto& frame = obs.frames[l];
    for (int k = 0; k < kNumMarkers; ++k) {
      const auto& kp = frame.keypoints[k];
      // Invisible keypoints enter the network as exact zeros.
      const Vec2 n =
          kp.visible() ? normalize_keypoint(kp.uv, frame.bbox) : Vec2::Zero();
      in.foot2d(l, 2 * k) = n.x();
      in.foot2d(l, 2 * k + 1) = n.y();
    }
    const Vec3 bf = bbox_features(frame.bbox, obs.camera);
    for (int k = 0; k < 3; ++k) in.bboxf(l, k) = bf[k];

    int off = 0;
    auto put6 = [&](const Rot6& v) {
      for (int k = 0; k < 6; ++k) in.rot(l, off + k) = v[k];
      off += 6;
    };
    for (InputJoint j : joints) {
      switch (j) {
        case InputJoint::pelvis:
          if (static_cast<int>(rots.pelvis.size()) != L)
            throw LengthMismatch("pelvis rotation stream");
          put6(rots.pelvis[l]);
          break;
        case InputJoint::hip:
          if (static_cast<int>(rots.hip.size()) != L)
            throw LengthMismatch("hip rotation stream");
          put6(rots.hip[l][0]);
          put6(rots.hip[l][1]);
          break;
        case InputJoint::knee:
          if (static_cast<int>(rots.knee.size()) != L)
            throw LengthMismatch("knee rotation stream");
          put6(rots.knee[l][0]);
          put6(rots.knee[l][1]);
          break;
        case InputJoint::ankle:
          if (static_cast<int>(rots.ankle.size()) != L)
            throw LengthMismatch("ankle rotation stream");
          put6(rots.ankle[l][0]);
          put6(rots.ankle[l][1]);
          break;
      }
    }
  }
  return in;
}

}  // namespace footlift
