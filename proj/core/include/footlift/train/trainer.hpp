#pragma once

#include <functional>
#include <ostream>

#include "footlift/nn/adamw.hpp"
#include "footlift/train/loss.hpp"

namespace footlift {

struct TrainConfig {
  double lr = 2e-4;
  std::vector<int> lr_halving_epochs{200, 350};
  int batch_size = 256;
  int epochs = 500;
  int seq_len = 120;
  LossWeights weights;
  std::uint64_t seed = 0;
  NoiseConfig noise;
  bool augment = true;
  double weight_decay = 0.01;
  int num_sequences = 512;
  int val_sequences = 8;
  std::string profile = "everyday";
  int max_steps = 0;  // 0 = no cap
  double fps = 30.0;

  void validate() const;
};

// Base rate halved after every configured boundary epoch (1-based).
double lr_at_epoch(const TrainConfig& cfg, int epoch);

struct EpochLog {
  int epoch = 0;  // absolute, 1-based
  double lr = 0.0;
  LossBreakdown loss;  // means over examples
  double train_ajae_deg = 0.0;
  double val_ajae_deg = 0.0;
  long degenerate_skipped = 0;
  long steps_done = 0;  // cumulative optimizer steps
};

struct FitResult {
  std::vector<EpochLog> epochs;
  long total_steps = 0;
  long degenerate_skipped = 0;
  int last_epoch = 0;
};

using StopPredicate = std::function<bool(const EpochLog&)>;
// Produces the training example for (index, epoch_tag). Training indices run
// over [0, cfg.num_sequences); validation uses indices past that range with
// epoch_tag 0, so the two never share a draw.
using ExampleSource = std::function<TrainingExample(int index, int epoch_tag)>;

void write_train_csv_header(std::ostream& os);
void write_train_csv_row(std::ostream& os, const EpochLog& log);

// Minibatch AdamW over per-epoch fresh examples (new augmentation and noise
// draws every epoch). Deterministic for a fixed seed when run
// single-threaded. Examples that degenerate numerically are skipped and
// counted.
FitResult fit(FootMR& model, nn::AdamW& opt, const Skeleton& skel,
              const ExampleSource& source, const TrainConfig& cfg,
              int start_epoch = 0, std::ostream* csv = nullptr,
              const StopPredicate& stop = {});

// Source that procedurally generates every example from the spec's seed.
ExampleSource generated_example_source(const DatasetSpec& spec,
                                       const Skeleton& skel);

// Source backed by pre-generated ground-truth motions; observations, the
// augmentation and the initial estimates are still drawn fresh per epoch.
ExampleSource loaded_example_source(std::vector<MotionSequence> motions,
                                    const DatasetSpec& spec,
                                    const Skeleton& skel);

// DatasetSpec consistent with a training configuration.
DatasetSpec dataset_from_train(const TrainConfig& cfg,
                               const CameraIntrinsics& camera,
                               const std::vector<InputJoint>& input_joints);

}  // namespace footlift
