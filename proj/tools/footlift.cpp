// footlift: synthetic foot-motion datasets, training, refinement, metrics.
//
// Exit codes: 0 success, 2 usage error, 3 data/format error, 4 numeric
// degeneration.

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

#include "footlift/commands.hpp"

namespace {

using footlift::AppConfig;

struct CommonOpts {
  std::string config_path;
  std::string preset;
  std::int64_t seed_flag = -1;
  bool seed_set = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("-c,--config", opts.config_path,
                  "key=value configuration file");
  cmd->add_option("--preset", opts.preset, "named preset: paper or toy")
      ->check(CLI::IsMember({"paper", "toy"}));
  cmd->add_option_function<std::int64_t>(
         "--seed",
         [&opts](const std::int64_t& v) {
           opts.seed_flag = v;
           opts.seed_set = true;
         },
         "override the seed");
}

AppConfig resolve_config(const CommonOpts& opts) {
  AppConfig cfg = footlift::default_config();
  if (!opts.preset.empty()) footlift::apply_preset(cfg, opts.preset);
  if (!opts.config_path.empty())
    cfg = footlift::parse_config_file(opts.config_path, cfg);
  if (const char* env = std::getenv("FOOTLIFT_SEED")) {
    try {
      cfg.seed = std::stoull(env);
    } catch (const std::exception&) {
      throw footlift::ConfigError("FOOTLIFT_SEED is not an unsigned integer");
    }
  }
  if (opts.seed_set) cfg.seed = static_cast<std::uint64_t>(opts.seed_flag);
  cfg.finalize();
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"foot motion refinement on synthetic data"};
  app.require_subcommand(1);

  CommonOpts synth_opts, train_opts, ablate_opts, gc_opts;

  auto* synth = app.add_subcommand("synth", "generate a synthetic dataset");
  std::string synth_out;
  int synth_count = -1;
  add_common(synth, synth_opts);
  synth->add_option("-o,--out", synth_out, "output directory")->required();
  synth->add_option("-n,--count", synth_count, "number of sequences");

  auto* train = app.add_subcommand("train", "train a refinement model");
  footlift::TrainArgs train_args;
  add_common(train, train_opts);
  train->add_option("--data", train_args.dataset_dir,
                    "dataset directory (default: generate on the fly)");
  train->add_option("-o,--out", train_args.out_checkpoint, "checkpoint path")
      ->required();
  train->add_option("--log", train_args.log_csv,
                    "metrics CSV path (default: <checkpoint>.log.csv)");
  train->add_option("--resume", train_args.resume_from,
                    "checkpoint to resume from");

  auto* refine = app.add_subcommand("refine", "refine initial ankle rotations");
  std::string rf_ckpt, rf_obs, rf_init, rf_out;
  refine->add_option("--checkpoint", rf_ckpt, "trained checkpoint")->required();
  refine->add_option("--observation", rf_obs, "observation JSON")->required();
  refine->add_option("--initial", rf_init, "initial-estimate motion JSON")
      ->required();
  refine->add_option("-o,--out", rf_out, "refined motion JSON")->required();

  auto* eval = app.add_subcommand("eval", "evaluate a predicted motion");
  std::string ev_pred, ev_gt, ev_obs, ev_json, ev_csv;
  eval->add_option("--pred", ev_pred, "predicted motion JSON")->required();
  eval->add_option("--gt", ev_gt, "ground-truth motion JSON")->required();
  eval->add_option("--observation", ev_obs, "observation JSON")->required();
  eval->add_option("--out-json", ev_json, "report JSON path")->required();
  eval->add_option("--out-csv", ev_csv, "report CSV path")->required();

  auto* plot = app.add_subcommand("plot", "render curves from a log or report");
  std::string pl_in, pl_svg, pl_csv;
  plot->add_option("-i,--input", pl_in, "training CSV or eval report JSON")
      ->required();
  plot->add_option("--out-svg", pl_svg, "SVG path")->required();
  plot->add_option("--out-csv", pl_csv, "tidy CSV path")->required();

  auto* gradcheck =
      app.add_subcommand("gradcheck", "finite-difference gradient checks");
  add_common(gradcheck, gc_opts);

  auto* ablate = app.add_subcommand(
      "ablate", "train and compare output / input-joint variants");
  std::string ab_out = "ablate.csv", ab_axis = "output";
  int ab_seeds = 3, ab_epochs = 12, ab_sequences = 48, ab_eval = 12;
  int ab_dh = -1, ab_layers = -1;
  add_common(ablate, ablate_opts);
  ablate->add_option("-o,--out", ab_out, "comparison CSV path");
  ablate->add_option("--axis", ab_axis, "output | joints")
      ->check(CLI::IsMember({"output", "joints"}));
  ablate->add_option("--seeds", ab_seeds, "number of seeds");
  ablate->add_option("--epochs", ab_epochs, "training epochs per run");
  ablate->add_option("--sequences", ab_sequences, "training sequences per run");
  ablate->add_option("--eval-sequences", ab_eval, "held-out sequences");
  ablate->add_option("--d-h", ab_dh, "override model width for the grid");
  ablate->add_option("--layers", ab_layers, "override model depth for the grid");

  try {
    app.parse(argc, argv);

    if (*synth) {
      AppConfig cfg = resolve_config(synth_opts);
      if (synth_count > 0) cfg.train.num_sequences = synth_count;
      footlift::cmd_synth(cfg, synth_out);
      std::cout << "wrote " << cfg.train.num_sequences
                << " sequence triplets to " << synth_out << "\n";
    } else if (*train) {
      AppConfig cfg = resolve_config(train_opts);
      const auto outcome = footlift::cmd_train(cfg, train_args);
      std::cout << "trained " << outcome.epochs_completed << " epochs, "
                << outcome.steps << " steps; final train AJAE "
                << outcome.final_train_ajae << " deg, val AJAE "
                << outcome.final_val_ajae << " deg";
      if (outcome.degenerate_skipped > 0)
        std::cout << " (" << outcome.degenerate_skipped
                  << " degenerate examples skipped)";
      std::cout << "\n";
    } else if (*refine) {
      footlift::cmd_refine(rf_ckpt, rf_obs, rf_init, rf_out);
      std::cout << "wrote " << rf_out << "\n";
    } else if (*eval) {
      footlift::cmd_eval(ev_pred, ev_gt, ev_obs, ev_json, ev_csv);
      std::cout << "wrote " << ev_json << " and " << ev_csv << "\n";
    } else if (*plot) {
      footlift::cmd_plot(pl_in, pl_svg, pl_csv);
      std::cout << "wrote " << pl_svg << " and " << pl_csv << "\n";
    } else if (*gradcheck) {
      AppConfig cfg = resolve_config(gc_opts);
      return footlift::cmd_gradcheck(cfg.seed, std::cout);
    } else if (*ablate) {
      AppConfig cfg = resolve_config(ablate_opts);
      footlift::AblateConfig ac;
      ac.axis = ab_axis;
      ac.seeds = ab_seeds;
      ac.base_seed = cfg.seed;
      ac.model = cfg.model;
      if (ab_dh > 0) ac.model.d_h = ab_dh;
      if (ab_layers > 0) ac.model.layers = ab_layers;
      ac.train = cfg.train;
      ac.train.epochs = ab_epochs;
      ac.train.num_sequences = ab_sequences;
      ac.train.batch_size = std::min(cfg.train.batch_size, 4);
      ac.train.val_sequences = 0;
      ac.camera = cfg.camera;
      ac.eval_sequences = ab_eval;
      footlift::cmd_ablate(ac, footlift::skeleton_for(cfg), ab_out, std::cout);
      std::cout << "wrote " << ab_out << "\n";
    }
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  } catch (const footlift::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
