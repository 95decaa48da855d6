#pragma once

#include <string>
#include <vector>

#include "footlift/kinematics.hpp"
#include "footlift/metrics.hpp"
#include "footlift/synth.hpp"

namespace footlift::io {

// All schemas carry format_version = 1. Rotations are serialized as 6D
// row-major per joint, columns stacked column-first (see rotmath).

struct LoadedMotion {
  MotionSequence seq;
  Skeleton skeleton;
};

void save_skeleton(const std::string& path, const Skeleton& skel);
Skeleton load_skeleton(const std::string& path);

// skeleton_ref: empty -> inline skeleton object; otherwise a path string
// stored as-is and resolved against the motion file's directory on load.
void save_motion(const std::string& path, const MotionSequence& seq,
                 const Skeleton& skel, const std::string& skeleton_ref = "");
LoadedMotion load_motion(const std::string& path);

void save_observation(const std::string& path, const ObservationSequence& obs);
ObservationSequence load_observation(const std::string& path);

struct DatasetFiles {
  std::string motion, observation, initial;
};

struct Manifest {
  std::uint64_t seed = 0;
  int num_sequences = 0;
  int length = 0;
  double fps = 30.0;
  std::string profile;
  NoiseConfig noise;
  CameraIntrinsics camera;
  std::vector<DatasetFiles> files;
};

void save_manifest(const std::string& path, const Manifest& m);
Manifest load_manifest(const std::string& path);

std::string report_to_json(const EvalReport& report);
EvalReport report_from_json(const std::string& text);
std::string report_to_csv(const EvalReport& report);

}  // namespace footlift::io
