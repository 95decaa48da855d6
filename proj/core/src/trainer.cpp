#include "footlift/train/trainer.hpp"

#include <cmath>
#include <cstdio>
#include <memory>

namespace footlift {

void TrainConfig::validate() const {
  if (!(lr > 0.0)) throw ConfigError("lr must be positive");
  if (batch_size < 1) throw ConfigError("batch_size must be positive");
  if (epochs < 1) throw ConfigError("epochs must be positive");
  if (seq_len < 2) throw ConfigError("seq_len must be >= 2");
  if (num_sequences < 1) throw ConfigError("num_sequences must be positive");
  if (val_sequences < 0) throw ConfigError("val_sequences must be >= 0");
  if (weight_decay < 0.0) throw ConfigError("weight_decay must be >= 0");
  noise.validate();
  for (size_t i = 1; i < lr_halving_epochs.size(); ++i)
    if (lr_halving_epochs[i] <= lr_halving_epochs[i - 1])
      throw ConfigError("lr_halving_epochs must be strictly increasing");
}

double lr_at_epoch(const TrainConfig& cfg, int epoch) {
  int halvings = 0;
  for (int boundary : cfg.lr_halving_epochs)
    if (epoch > boundary) ++halvings;
  return cfg.lr * std::pow(0.5, halvings);
}

namespace {
std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}
}  // namespace

void write_train_csv_header(std::ostream& os) {
  os << "epoch,lr,loss_total,loss_theta,loss_j3d,loss_j2d,loss_v3d,loss_v2d,"
        "train_ajae_deg,val_ajae_deg\n";
}

void write_train_csv_row(std::ostream& os, const EpochLog& log) {
  os << log.epoch << ',' << fmt_double(log.lr) << ','
     << fmt_double(log.loss.total) << ',' << fmt_double(log.loss.theta) << ','
     << fmt_double(log.loss.j3d) << ',' << fmt_double(log.loss.j2d) << ','
     << fmt_double(log.loss.v3d) << ',' << fmt_double(log.loss.v2d) << ','
     << fmt_double(log.train_ajae_deg) << ',' << fmt_double(log.val_ajae_deg)
     << '\n';
}

DatasetSpec dataset_from_train(const TrainConfig& cfg,
                               const CameraIntrinsics& camera,
                               const std::vector<InputJoint>& input_joints) {
  DatasetSpec data;
  data.num_sequences = cfg.num_sequences;
  data.length = cfg.seq_len;
  data.fps = cfg.fps;
  data.profile = profile_by_name(cfg.profile);
  data.noise = cfg.noise;
  data.camera = camera;
  data.augment = cfg.augment;
  data.seed = cfg.seed;
  data.input_joints = input_joints;
  return data;
}

ExampleSource generated_example_source(const DatasetSpec& spec,
                                       const Skeleton& skel) {
  return [spec, skel](int index, int epoch_tag) {
    return dataset_example(spec, skel, index, epoch_tag);
  };
}

ExampleSource loaded_example_source(std::vector<MotionSequence> motions,
                                    const DatasetSpec& spec,
                                    const Skeleton& skel) {
  if (motions.empty()) throw EmptyInput("loaded_example_source: no motions");
  auto shared =
      std::make_shared<std::vector<MotionSequence>>(std::move(motions));
  return [shared, spec, skel](int index, int epoch_tag) {
    // Validation indices reuse the motions with an independent draw domain.
    const int n = static_cast<int>(shared->size());
    const bool val = index >= n;
    const int mi = val ? (index - n) % n : index;
    Rng rng = Rng::substream(spec.seed, val ? 4 : 2,
                             static_cast<std::uint64_t>(mi),
                             static_cast<std::uint64_t>(epoch_tag));
    return make_training_example((*shared)[mi], skel, spec.camera, spec.noise,
                                 spec.augment, rng, spec.input_joints);
  };
}

FitResult fit(FootMR& model, nn::AdamW& opt, const Skeleton& skel,
              const ExampleSource& source, const TrainConfig& cfg,
              int start_epoch, std::ostream* csv, const StopPredicate& stop) {
  cfg.validate();
  FitResult result;
  result.last_epoch = start_epoch;
  bool step_cap_hit = false;

  for (int epoch = start_epoch + 1; epoch <= cfg.epochs && !step_cap_hit;
       ++epoch) {
    const double lr = lr_at_epoch(cfg, epoch);
    EpochLog log;
    log.epoch = epoch;
    log.lr = lr;

    LossBreakdown sums;
    double ajae_sum = 0.0;
    long used = 0;
    int in_batch = 0;
    for (int idx = 0; idx < cfg.num_sequences; ++idx) {
      TrainingExample ex;
      try {
        ex = source(idx, epoch);
      } catch (const Error& e) {
        if (e.code() != ExitCode::numeric) throw;
        ++result.degenerate_skipped;
        continue;
      }
      try {
        nn::Graph g;
        TrainingGraph tg =
            build_training_graph(g, model, ex, cfg.weights, skel);
        g.backward(tg.total);
        sums.theta += tg.theta.value()(0, 0);
        sums.j3d += tg.j3d.value()(0, 0);
        sums.j2d += tg.j2d.value()(0, 0);
        sums.v3d += tg.v3d.value()(0, 0);
        sums.v2d += tg.v2d.value()(0, 0);
        sums.total += tg.total.value()(0, 0);
        double a = 0.0;
        for (int l = 0; l < ex.length(); ++l)
          for (int s = 0; s < 2; ++s)
            a += geodesic_angle_deg(
                unpack_mats9(tg.applied.global9[s].value())[l],
                rot6d_to_rotmat(ex.target_global_ankle[l][s]));
        ajae_sum += a / (2.0 * ex.length());
      } catch (const Error& e) {
        if (e.code() != ExitCode::numeric) throw;
        // Graphs that degenerate are abandoned before backward runs, so no
        // gradient from this example was accumulated.
        ++result.degenerate_skipped;
        continue;
      }
      ++used;
      ++in_batch;
      const bool last = idx == cfg.num_sequences - 1;
      if (in_batch == cfg.batch_size || (last && in_batch > 0)) {
        opt.step(lr, 1.0 / in_batch);
        model.params().zero_grads();
        in_batch = 0;
        ++result.total_steps;
        if (cfg.max_steps > 0 && result.total_steps >= cfg.max_steps) {
          step_cap_hit = true;
          break;
        }
      }
    }
    if (used > 0) {
      const double n = static_cast<double>(used);
      sums.theta /= n;
      sums.j3d /= n;
      sums.j2d /= n;
      sums.v3d /= n;
      sums.v2d /= n;
      sums.total /= n;
      ajae_sum /= n;
    }
    log.loss = sums;
    log.train_ajae_deg = ajae_sum;

    double val_sum = 0.0;
    if (cfg.val_sequences > 0) {
      for (int i = 0; i < cfg.val_sequences; ++i) {
        TrainingExample ex = source(cfg.num_sequences + i, 0);
        val_sum += example_ajae(model, ex);
      }
      val_sum /= cfg.val_sequences;
    } else {
      val_sum = std::nan("");
    }
    log.val_ajae_deg = val_sum;
    log.degenerate_skipped = result.degenerate_skipped;
    log.steps_done = result.total_steps;

    if (csv) {
      write_train_csv_row(*csv, log);
      csv->flush();
    }
    result.epochs.push_back(log);
    result.last_epoch = epoch;
    if (stop && stop(log)) break;
  }
  return result;
}

}  // namespace footlift
