#pragma once

#include <string>
#include <vector>

#include "footlift/io/config.hpp"
#include "footlift/train/ablate.hpp"

namespace footlift {

// Command implementations behind the CLI; they throw footlift::Error for
// everything the tool maps to an exit code.

// Writes num_sequences motion/observation/initial-estimate triplets plus a
// manifest into out_dir.
void cmd_synth(const AppConfig& cfg, const std::string& out_dir);

struct TrainArgs {
  std::string dataset_dir;   // empty: generate examples on the fly
  std::string out_checkpoint;
  std::string log_csv;       // empty: next to the checkpoint
  std::string resume_from;   // empty: fresh start
};
struct TrainOutcome {
  int epochs_completed = 0;
  long steps = 0;
  long degenerate_skipped = 0;
  double final_train_ajae = 0.0;
  double final_val_ajae = 0.0;
};
TrainOutcome cmd_train(const AppConfig& cfg, const TrainArgs& args);

void cmd_refine(const std::string& checkpoint_path,
                const std::string& observation_path,
                const std::string& initial_path, const std::string& out_path);

void cmd_eval(const std::string& pred_motion_path,
              const std::string& gt_motion_path,
              const std::string& observation_path,
              const std::string& out_json_path,
              const std::string& out_csv_path);

void cmd_plot(const std::string& input_path, const std::string& out_svg_path,
              const std::string& out_csv_path);

struct GradCheckEntry {
  std::string name;
  double max_rel_error = 0.0;
};
struct GradCheckReport {
  std::vector<GradCheckEntry> entries;
  double worst = 0.0;
};
// Finite-difference verification of every differentiable op and of the full
// model through the training loss (tiny configuration).
GradCheckReport run_gradcheck_suite(std::uint64_t seed);
int cmd_gradcheck(std::uint64_t seed, std::ostream& os);

void cmd_ablate(const AblateConfig& cfg, const Skeleton& skel,
                const std::string& out_csv, std::ostream& progress);

// Checkpoint metadata helpers shared by train/refine.
std::string model_meta_json(const ModelConfig& mc, int epoch);
void parse_model_meta(const std::string& meta, ModelConfig* mc, int* epoch);

Skeleton skeleton_for(const AppConfig& cfg);

}  // namespace footlift
