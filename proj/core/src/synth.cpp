#include "footlift/synth.hpp"

#include <cmath>

namespace footlift {

namespace {

// Base orientation mapping the body frame (x forward, y left, z up) onto the
// camera frame (x right, y down, z forward): the subject stands upright
// facing the camera.
Mat3 base_root_orientation() {
  Mat3 r;
  r.col(0) = Vec3(0, 0, -1);
  r.col(1) = Vec3(1, 0, 0);
  r.col(2) = Vec3(0, -1, 0);
  return r;
}

struct Sinusoid {
  double amp_deg, freq_hz, phase;
};

}  // namespace

void NoiseConfig::validate() const {
  if (drop_prob < 0.0 || drop_prob > 1.0)
    throw ConfigError("drop_prob must be in [0, 1]");
  if (kp_sigma_px < 0.0 || init_rot_sigma_deg < 0.0)
    throw ConfigError("noise sigmas must be >= 0");
}

MotionProfile MotionProfile::everyday() { return MotionProfile{}; }

MotionProfile MotionProfile::complex_foot() {
  MotionProfile p;
  p.name = "complex-foot";
  p.ankle_amp_deg = 70.0;
  p.body_amp_deg = 30.0;
  p.freq_min_hz = 0.2;
  p.freq_max_hz = 2.5;
  p.root_walk_sigma_deg = 1.2;
  p.root_init_spread_deg = 180.0;
  p.trans_amp_m = 0.2;
  return p;
}

MotionProfile MotionProfile::zero() {
  MotionProfile p;
  p.name = "zero";
  p.ankle_amp_deg = 0.0;
  p.body_amp_deg = 0.0;
  p.root_walk_sigma_deg = 0.0;
  p.root_init_spread_deg = 0.0;
  p.trans_amp_m = 0.0;
  return p;
}

MotionProfile profile_by_name(const std::string& name) {
  if (name == "everyday") return MotionProfile::everyday();
  if (name == "complex-foot" || name == "complex_foot")
    return MotionProfile::complex_foot();
  if (name == "zero") return MotionProfile::zero();
  throw ConfigError("unknown motion profile: " + name);
}

MotionSequence generate_sequence(const MotionProfile& profile, int length,
                                 double fps, Rng& rng) {
  if (length < 2) throw LengthMismatch("generate_sequence needs L >= 2");
  if (!(fps > 0.0)) throw ConfigError("fps must be positive");

  // Per-joint trajectory parameters (hips, knees, ankles); feet stay rigid.
  struct JointTraj {
    Vec3 axis = Vec3::UnitX();
    std::vector<Sinusoid> terms;
  };
  std::array<JointTraj, kNumJoints> traj;
  for (int j = kLeftHip; j <= kRightAnkle; ++j) {
    const bool is_ankle = j == kLeftAnkle || j == kRightAnkle;
    const double budget =
        rng.uniform(0.0, is_ankle ? profile.ankle_amp_deg : profile.body_amp_deg);
    JointTraj t;
    t.axis = sample_unit_vector(rng);
    std::vector<double> weights(profile.harmonics);
    double total = 0.0;
    for (double& w : weights) {
      w = rng.uniform(0.1, 1.0);
      total += w;
    }
    for (int k = 0; k < profile.harmonics; ++k) {
      Sinusoid s;
      s.amp_deg = budget * weights[k] / total;
      s.freq_hz = rng.uniform(profile.freq_min_hz, profile.freq_max_hz);
      s.phase = rng.uniform(0.0, 2.0 * M_PI);
      t.terms.push_back(s);
    }
    traj[j] = t;
  }

  // Root orientation: random initial offset from the base facing, then a
  // small random walk.
  const Vec3 spread_axis = sample_unit_vector(rng);
  const double spread =
      rng.uniform(0.0, profile.root_init_spread_deg) * M_PI / 180.0;
  Mat3 root = compose(base_root_orientation(), axis_angle(spread_axis, spread));

  // Translation: slow per-axis sinusoid around a base point in the frustum.
  const Vec3 base_trans(rng.uniform(-0.3, 0.3), rng.uniform(-0.2, 0.2),
                        rng.uniform(2.2, 4.5));
  std::array<Sinusoid, 3> tdrift;
  for (auto& s : tdrift) {
    s.amp_deg = rng.uniform(0.0, profile.trans_amp_m);  // meters here
    s.freq_hz = rng.uniform(0.1, 0.5);
    s.phase = rng.uniform(0.0, 2.0 * M_PI);
  }

  MotionSequence seq;
  seq.fps = fps;
  seq.frames.resize(length);
  const double walk_sigma = profile.root_walk_sigma_deg * M_PI / 180.0;
  for (int l = 0; l < length; ++l) {
    const double t = l / fps;
    MotionFrame& frame = seq.frames[l];
    if (l > 0) {
      const Vec3 w(rng.normal(0.0, walk_sigma), rng.normal(0.0, walk_sigma),
                   rng.normal(0.0, walk_sigma));
      const double wn = w.norm();
      root = wn > 0.0 ? compose(root, axis_angle(w / wn, wn)) : root;
    }
    frame.rel6[kPelvis] = rotmat_to_rot6d(root);
    for (int j = kLeftHip; j <= kRightAnkle; ++j) {
      double angle_deg = 0.0;
      for (const auto& s : traj[j].terms)
        angle_deg += s.amp_deg * std::sin(2.0 * M_PI * s.freq_hz * t + s.phase);
      frame.rel6[j] =
          rotmat_to_rot6d(axis_angle(traj[j].axis, angle_deg * M_PI / 180.0));
    }
    frame.rel6[kLeftFoot] = rotmat_to_rot6d(Mat3::Identity());
    frame.rel6[kRightFoot] = rotmat_to_rot6d(Mat3::Identity());
    for (int a = 0; a < 3; ++a)
      frame.trans[a] =
          base_trans[a] + tdrift[a].amp_deg *
                              std::sin(2.0 * M_PI * tdrift[a].freq_hz * t +
                                       tdrift[a].phase);
  }
  return seq;
}

ObservationSequence synthesize_observations(const MotionSequence& seq,
                                            const Skeleton& skeleton,
                                            const CameraIntrinsics& cam,
                                            const NoiseConfig& noise,
                                            Rng& rng) {
  noise.validate();
  ObservationSequence obs;
  obs.fps = seq.fps;
  obs.camera = cam;
  obs.frames.resize(seq.frames.size());
  for (int l = 0; l < seq.length(); ++l) {
    const PoseFK pose = forward_kinematics(skeleton, seq.frames[l]);
    const auto markers = foot_keypoints_3d(pose, skeleton);
    // Person box over every projected joint and marker, noise-free.
    std::vector<Vec2> all2d;
    all2d.reserve(kNumJoints + kNumMarkers);
    for (const auto& p : pose.joint_pos) all2d.push_back(project(p, cam));
    std::vector<Vec2> marker2d;
    marker2d.reserve(kNumMarkers);
    for (const auto& m : markers) {
      marker2d.push_back(project(m, cam));
      all2d.push_back(marker2d.back());
    }
    ObservationFrame& frame = obs.frames[l];
    frame.bbox = bbox_from_points(all2d, 0.2);
    for (int k = 0; k < kNumMarkers; ++k) {
      Keypoint2D kp;
      kp.uv = marker2d[k] + Vec2(rng.normal(0.0, noise.kp_sigma_px),
                                 rng.normal(0.0, noise.kp_sigma_px));
      kp.conf = rng.uniform() < noise.drop_prob ? 0.0 : 1.0;
      frame.keypoints[k] = kp;
    }
  }
  return obs;
}

std::vector<std::array<Rot6, 4>> simulate_initial_estimate(
    const MotionSequence& seq, const Skeleton& skeleton,
    const NoiseConfig& noise, Rng& rng) {
  noise.validate();
  const int joints[4] = {kLeftKnee, kRightKnee, kLeftAnkle, kRightAnkle};
  const int L = seq.length();
  std::vector<std::array<Rot6, 4>> out(L);

  // Ground-truth globals, one chain pass per frame.
  std::vector<std::array<Mat3, 4>> gt(L);
  for (int l = 0; l < L; ++l) {
    std::array<Mat3, kNumJoints> rel;
    for (int i = 0; i < kNumJoints; ++i)
      rel[i] = rot6d_to_rotmat(seq.frames[l].rel6[i]);
    const auto global = relative_to_global(skeleton, rel);
    for (int j = 0; j < 4; ++j) gt[l][j] = global[joints[j]];
  }

  const double sigma = noise.init_rot_sigma_deg;
  if (sigma <= 0.0) {
    for (int l = 0; l < L; ++l)
      for (int j = 0; j < 4; ++j) out[l][j] = rotmat_to_rot6d(gt[l][j]);
    return out;
  }

  for (int j = 0; j < 4; ++j) {
    // One systematic bias per sequence, plus small per-frame jitter.
    const Vec3 bias_axis = sample_unit_vector(rng);
    const double bias_deg = std::abs(rng.normal(0.0, sigma));
    const Mat3 bias = axis_angle(bias_axis, bias_deg * M_PI / 180.0);
    for (int l = 0; l < L; ++l) {
      const Vec3 jit_axis = sample_unit_vector(rng);
      const double jit_deg = std::abs(rng.normal(0.0, sigma / 4.0));
      const Mat3 jitter = axis_angle(jit_axis, jit_deg * M_PI / 180.0);
      out[l][j] = rotmat_to_rot6d(compose(compose(gt[l][j], bias), jitter));
    }
  }
  return out;
}

MotionSequence initial_estimate_motion(
    const MotionSequence& gt, const Skeleton& skeleton,
    const std::vector<std::array<Rot6, 4>>& sim_globals) {
  if (static_cast<int>(sim_globals.size()) != gt.length())
    throw LengthMismatch("initial estimate stream vs motion length");
  MotionSequence out = gt;
  for (int l = 0; l < gt.length(); ++l) {
    std::array<Mat3, kNumJoints> rel;
    for (int i = 0; i < kNumJoints; ++i)
      rel[i] = rot6d_to_rotmat(gt.frames[l].rel6[i]);
    const auto global = relative_to_global(skeleton, rel);
    for (int side = 0; side < 2; ++side) {
      const Mat3 knee = rot6d_to_rotmat(sim_globals[l][side]);
      const Mat3 ankle = rot6d_to_rotmat(sim_globals[l][2 + side]);
      const Mat3 hip_global = global[side == 0 ? kLeftHip : kRightHip];
      out.frames[l].rel6[side == 0 ? kLeftKnee : kRightKnee] =
          rotmat_to_rot6d(global_to_relative(knee, hip_global));
      out.frames[l].rel6[side == 0 ? kLeftAnkle : kRightAnkle] =
          rotmat_to_rot6d(global_to_relative(ankle, knee));
    }
  }
  return out;
}

TrainingExample make_training_example(const MotionSequence& seq,
                                      const Skeleton& skeleton,
                                      const CameraIntrinsics& cam,
                                      const NoiseConfig& noise, bool augment,
                                      Rng& rng,
                                      const std::vector<InputJoint>& input_joints) {
  TrainingExample ex;
  ex.camera = cam;
  ex.gt_sequence =
      augment ? apply_root_augmentation(seq, sample_uniform_rotation(rng)) : seq;

  ex.obs = synthesize_observations(ex.gt_sequence, skeleton, cam, noise, rng);
  const auto sim =
      simulate_initial_estimate(ex.gt_sequence, skeleton, noise, rng);

  const int L = ex.gt_sequence.length();
  ex.target_rel_ankle.resize(L);
  ex.target_global_ankle.resize(L);
  ex.init_global_ankle.resize(L);
  ex.knee_global.resize(L);
  JointRotationStreams rots;
  rots.pelvis.resize(L);
  rots.hip.resize(L);
  rots.knee.resize(L);
  rots.ankle.resize(L);
  for (int l = 0; l < L; ++l) {
    std::array<Mat3, kNumJoints> rel;
    for (int i = 0; i < kNumJoints; ++i)
      rel[i] = rot6d_to_rotmat(ex.gt_sequence.frames[l].rel6[i]);
    const auto global = relative_to_global(skeleton, rel);

    ex.target_rel_ankle[l] = {ex.gt_sequence.frames[l].rel6[kLeftAnkle],
                              ex.gt_sequence.frames[l].rel6[kRightAnkle]};
    ex.target_global_ankle[l] = {rotmat_to_rot6d(global[kLeftAnkle]),
                                 rotmat_to_rot6d(global[kRightAnkle])};
    ex.init_global_ankle[l] = {sim[l][2], sim[l][3]};
    ex.knee_global[l] = {global[kLeftKnee], global[kRightKnee]};

    // Context joints are ground truth; only the ankles come from the
    // simulated estimator.
    rots.pelvis[l] = rotmat_to_rot6d(global[kPelvis]);
    rots.hip[l] = {rotmat_to_rot6d(global[kLeftHip]),
                   rotmat_to_rot6d(global[kRightHip])};
    rots.knee[l] = {rotmat_to_rot6d(global[kLeftKnee]),
                    rotmat_to_rot6d(global[kRightKnee])};
    rots.ankle[l] = {sim[l][2], sim[l][3]};
  }
  ex.input = build_refine_input(ex.obs, rots, input_joints);
  return ex;
}

MotionSequence dataset_sequence(const DatasetSpec& spec, int index) {
  Rng rng = Rng::substream(spec.seed, 1, static_cast<std::uint64_t>(index));
  return generate_sequence(spec.profile, spec.length, spec.fps, rng);
}

TrainingExample dataset_example(const DatasetSpec& spec, const Skeleton& skel,
                                int index, int epoch_tag) {
  const MotionSequence seq = dataset_sequence(spec, index);
  Rng rng = Rng::substream(spec.seed, 2, static_cast<std::uint64_t>(index),
                           static_cast<std::uint64_t>(epoch_tag));
  return make_training_example(seq, skel, spec.camera, spec.noise, spec.augment,
                               rng, spec.input_joints);
}

}  // namespace footlift
