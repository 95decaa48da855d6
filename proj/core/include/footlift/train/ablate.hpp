#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "footlift/train/trainer.hpp"

namespace footlift {

// Variant grid runner: trains small models on the everyday profile and
// evaluates them on held-out everyday data and on the complex-foot profile
// with randomized root orientations.
struct AblateConfig {
  std::string axis = "output";  // "output" | "joints"
  std::vector<std::string> output_modes{"relative", "global",
                                        "residual_relative", "residual_global"};
  bool include_no_augment = true;  // adds residual_global without augmentation
  int seeds = 3;
  std::uint64_t base_seed = 7;
  ModelConfig model;      // base; output_mode/input_joints vary per run
  TrainConfig train;      // schedule for every run
  CameraIntrinsics camera;
  int eval_sequences = 12;
};

struct AblateRow {
  std::string axis;
  std::string variant;
  std::uint64_t seed = 0;
  std::string eval_profile;
  double ajae_deg = 0.0;
  double n_mpjpe_f_mm = 0.0;
  double pck_f = 0.0;
  double n_fke_2d = 0.0;
  double accel_f_ms2 = 0.0;
  double input_ajae_deg = 0.0;  // unrefined initial estimate on the same data
};

struct AblateResult {
  std::vector<AblateRow> rows;
  // Per-seed AJAE margin residual_relative - residual_global on the
  // complex-foot evaluation (positive favors residual_global).
  std::vector<std::pair<std::uint64_t, double>> margins;
};

AblateResult run_ablation(const AblateConfig& cfg, const Skeleton& skel,
                          std::ostream* progress = nullptr);

std::string ablate_csv(const AblateResult& result);

}  // namespace footlift
