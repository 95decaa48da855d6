#pragma once

#include <string>

#include "footlift/footmr.hpp"
#include "footlift/train/trainer.hpp"

namespace footlift {

// Flat key=value configuration covering the model, training, noise and
// camera settings. Unknown keys are rejected.
struct AppConfig {
  ModelConfig model;
  TrainConfig train;
  CameraIntrinsics camera;
  std::string skeleton_path;  // empty = built-in default skeleton
  std::uint64_t seed = 0;
  double fps = 30.0;

  // Copies the shared fields (seed, fps) into the sub-configurations.
  void finalize();
};

// Struct defaults carry the published constants; the default CLI preset is
// the desk-scale "toy" schedule.
AppConfig default_config();
void apply_preset(AppConfig& cfg, const std::string& name);  // paper | toy

AppConfig parse_config_text(const std::string& text, AppConfig base,
                            const std::string& source_name = "<config>");
AppConfig parse_config_file(const std::string& path, AppConfig base);

// Canonical dump of every key with its current value.
std::string config_to_text(const AppConfig& cfg);

std::string input_joints_to_string(const std::vector<InputJoint>& joints);
std::vector<InputJoint> input_joints_from_string(const std::string& s);

}  // namespace footlift
