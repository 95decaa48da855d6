#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "footlift/camera.hpp"
#include "footlift/kinematics.hpp"
#include "footlift/refine_input.hpp"
#include "footlift/rng.hpp"

namespace footlift {

struct NoiseConfig {
  double kp_sigma_px = 3.0;        // Gaussian 2D keypoint noise
  double drop_prob = 0.05;         // per keypoint per frame
  double init_rot_sigma_deg = 20.0;  // initial-estimate perturbation
  std::uint64_t seed = 0;

  void validate() const;
};

// Smooth procedural motion: per-joint axis-angle trajectories built from a
// few random sinusoids, a random-walk root orientation and a slow drift of
// the translation inside the camera frustum.
struct MotionProfile {
  std::string name = "everyday";
  int harmonics = 3;
  double ankle_amp_deg = 15.0;  // total sinusoid amplitude budget per ankle
  double body_amp_deg = 25.0;   // hips and knees
  double freq_min_hz = 0.2;
  double freq_max_hz = 1.5;
  double root_walk_sigma_deg = 0.8;   // per frame
  double root_init_spread_deg = 30.0;
  double trans_amp_m = 0.15;

  static MotionProfile everyday();
  static MotionProfile complex_foot();
  static MotionProfile zero();  // static rest pose
};

MotionProfile profile_by_name(const std::string& name);

struct TrainingExample {
  RefineInput input;
  std::vector<std::array<Rot6, 2>> target_rel_ankle;     // [L][left, right]
  std::vector<std::array<Rot6, 2>> target_global_ankle;  // [L][left, right]
  MotionSequence gt_sequence;  // the (augmented) ground truth
  CameraIntrinsics camera;
  // Carried alongside for loss evaluation and metrics:
  ObservationSequence obs;
  std::vector<std::array<Rot6, 2>> init_global_ankle;  // simulated estimates
  std::vector<std::array<Mat3, 2>> knee_global;        // ground-truth knees

  int length() const { return gt_sequence.length(); }
};

MotionSequence generate_sequence(const MotionProfile& profile, int length,
                                 double fps, Rng& rng);

ObservationSequence synthesize_observations(const MotionSequence& seq,
                                            const Skeleton& skeleton,
                                            const CameraIntrinsics& cam,
                                            const NoiseConfig& noise, Rng& rng);

// Ground-truth global knee/ankle rotations perturbed by a per-sequence bias
// plus small per-frame jitter (sigma / 4). Order: l_knee, r_knee, l_ankle,
// r_ankle. sigma 0 returns the exact ground truth.
std::vector<std::array<Rot6, 4>> simulate_initial_estimate(
    const MotionSequence& seq, const Skeleton& skeleton,
    const NoiseConfig& noise, Rng& rng);

// A full motion sequence whose knee/ankle relative rotations reproduce the
// simulated global estimates through the chain; all other joints are the
// ground truth. This is what an upstream estimator would hand over.
MotionSequence initial_estimate_motion(
    const MotionSequence& gt, const Skeleton& skeleton,
    const std::vector<std::array<Rot6, 4>>& sim_globals);

TrainingExample make_training_example(
    const MotionSequence& seq, const Skeleton& skeleton,
    const CameraIntrinsics& cam, const NoiseConfig& noise, bool augment,
    Rng& rng,
    const std::vector<InputJoint>& input_joints = {InputJoint::knee,
                                                   InputJoint::ankle});

// Deterministic dataset addressing: every sequence and every epoch's example
// draws from its own substream, so generation order never matters.
struct DatasetSpec {
  int num_sequences = 512;
  int length = 120;
  double fps = 30.0;
  MotionProfile profile;
  NoiseConfig noise;
  CameraIntrinsics camera;
  bool augment = true;
  std::uint64_t seed = 0;
  std::vector<InputJoint> input_joints{InputJoint::knee, InputJoint::ankle};
};

MotionSequence dataset_sequence(const DatasetSpec& spec, int index);
// epoch_tag distinguishes the per-epoch noise/augmentation draw; the base
// motion depends only on (seed, index).
TrainingExample dataset_example(const DatasetSpec& spec, const Skeleton& skel,
                                int index, int epoch_tag);

}  // namespace footlift
