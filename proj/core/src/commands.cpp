#include "footlift/commands.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <filesystem>
#include <memory>
#include <optional>
#include <fstream>
#include <sstream>

#include "footlift/io/file_io.hpp"
#include "footlift/io/formats.hpp"
#include "footlift/io/plot.hpp"
#include "footlift/nn/checkpoint.hpp"
#include "footlift/nn/gradcheck.hpp"

namespace footlift {

namespace fs = std::filesystem;
using nlohmann::json;

Skeleton skeleton_for(const AppConfig& cfg) {
  if (cfg.skeleton_path.empty()) return default_skeleton();
  return io::load_skeleton(cfg.skeleton_path);
}

std::string model_meta_json(const ModelConfig& mc, int epoch) {
  const json j = {
      {"model",
       {{"d_h", mc.d_h},
        {"layers", mc.layers},
        {"heads", mc.heads},
        {"window", mc.window},
        {"output_mode", to_string(mc.output_mode)},
        {"input_joints", input_joints_to_string(mc.input_joints)},
        {"rope_base", mc.rope_base}}},
      {"epoch", epoch}};
  return j.dump();
}

void parse_model_meta(const std::string& meta, ModelConfig* mc, int* epoch) {
  const json j = json::parse(meta, nullptr, false);
  if (j.is_discarded() || !j.contains("model"))
    throw FormatError("checkpoint metadata is missing the model description");
  const json& m = j.at("model");
  if (mc) {
    mc->d_h = m.at("d_h").get<int>();
    mc->layers = m.at("layers").get<int>();
    mc->heads = m.at("heads").get<int>();
    mc->window = m.at("window").get<int>();
    mc->output_mode = output_mode_from_string(m.at("output_mode").get<std::string>());
    mc->input_joints =
        input_joints_from_string(m.at("input_joints").get<std::string>());
    mc->rope_base = m.at("rope_base").get<double>();
  }
  if (epoch) *epoch = j.at("epoch").get<int>();
}

void cmd_synth(const AppConfig& cfg, const std::string& out_dir) {
  const Skeleton skel = skeleton_for(cfg);
  fs::create_directories(out_dir);
  DatasetSpec spec = dataset_from_train(cfg.train, cfg.camera,
                                        cfg.model.input_joints);
  spec.augment = false;  // files are raw, un-augmented triplets

  io::Manifest manifest;
  manifest.seed = cfg.seed;
  manifest.num_sequences = spec.num_sequences;
  manifest.length = spec.length;
  manifest.fps = spec.fps;
  manifest.profile = spec.profile.name;
  manifest.noise = spec.noise;
  manifest.camera = spec.camera;

  char name[64];
  for (int i = 0; i < spec.num_sequences; ++i) {
    const MotionSequence seq = dataset_sequence(spec, i);
    Rng rng = Rng::substream(spec.seed, 3, static_cast<std::uint64_t>(i));
    const ObservationSequence obs =
        synthesize_observations(seq, skel, spec.camera, spec.noise, rng);
    const auto sim = simulate_initial_estimate(seq, skel, spec.noise, rng);
    const MotionSequence init = initial_estimate_motion(seq, skel, sim);

    io::DatasetFiles files;
    std::snprintf(name, sizeof(name), "motion_%04d.json", i);
    files.motion = name;
    std::snprintf(name, sizeof(name), "obs_%04d.json", i);
    files.observation = name;
    std::snprintf(name, sizeof(name), "init_%04d.json", i);
    files.initial = name;
    io::save_motion((fs::path(out_dir) / files.motion).string(), seq, skel);
    io::save_observation((fs::path(out_dir) / files.observation).string(), obs);
    io::save_motion((fs::path(out_dir) / files.initial).string(), init, skel);
    manifest.files.push_back(files);
  }
  io::save_manifest((fs::path(out_dir) / "manifest.json").string(), manifest);
}

TrainOutcome cmd_train(const AppConfig& cfg, const TrainArgs& args) {
  const Skeleton skel = skeleton_for(cfg);
  ModelConfig mc = cfg.model;
  TrainConfig tc = cfg.train;

  ExampleSource source;
  if (args.dataset_dir.empty()) {
    source = generated_example_source(
        dataset_from_train(tc, cfg.camera, mc.input_joints), skel);
  } else {
    const io::Manifest manifest = io::load_manifest(
        (fs::path(args.dataset_dir) / "manifest.json").string());
    std::vector<MotionSequence> motions;
    motions.reserve(manifest.files.size());
    for (const auto& f : manifest.files)
      motions.push_back(
          io::load_motion((fs::path(args.dataset_dir) / f.motion).string()).seq);
    tc.num_sequences = static_cast<int>(motions.size());
    DatasetSpec spec = dataset_from_train(tc, cfg.camera, mc.input_joints);
    source = loaded_example_source(std::move(motions), spec, skel);
  }

  std::unique_ptr<FootMR> model;
  std::optional<nn::OptimizerState> opt_state;
  int start_epoch = 0;
  if (args.resume_from.empty()) {
    model = std::make_unique<FootMR>(mc, cfg.seed);
  } else {
    nn::Checkpoint ckpt = nn::load_checkpoint(args.resume_from);
    ModelConfig saved;
    parse_model_meta(ckpt.metadata_json, &saved, &start_epoch);
    model = std::make_unique<FootMR>(saved, std::move(ckpt.params));
    opt_state = std::move(ckpt.optimizer);
  }
  nn::AdamW opt(model->params(), {tc.lr, 0.9, 0.999, 1e-8, tc.weight_decay});
  if (opt_state)
    opt.restore(std::move(opt_state->m), std::move(opt_state->v),
                opt_state->t);

  const std::string log_path =
      args.log_csv.empty() ? args.out_checkpoint + ".log.csv" : args.log_csv;
  std::ostringstream csv;
  write_train_csv_header(csv);
  const FitResult result =
      fit(*model, opt, skel, source, tc, start_epoch, &csv);
  io::write_file_atomic(log_path, csv.str());
  nn::save_checkpoint(args.out_checkpoint, model->params(),
                      model_meta_json(model->config(), result.last_epoch),
                      &opt);

  TrainOutcome outcome;
  outcome.epochs_completed = result.last_epoch;
  outcome.steps = result.total_steps;
  outcome.degenerate_skipped = result.degenerate_skipped;
  if (!result.epochs.empty()) {
    outcome.final_train_ajae = result.epochs.back().train_ajae_deg;
    outcome.final_val_ajae = result.epochs.back().val_ajae_deg;
  }
  return outcome;
}

void cmd_refine(const std::string& checkpoint_path,
                const std::string& observation_path,
                const std::string& initial_path, const std::string& out_path) {
  nn::Checkpoint ckpt = nn::load_checkpoint(checkpoint_path);
  ModelConfig mc;
  int epoch = 0;
  parse_model_meta(ckpt.metadata_json, &mc, &epoch);
  FootMR model(mc, std::move(ckpt.params));

  const ObservationSequence obs = io::load_observation(observation_path);
  io::LoadedMotion init = io::load_motion(initial_path);
  const int L = init.seq.length();
  if (obs.length() != L)
    throw LengthMismatch("observation has " + std::to_string(obs.length()) +
                         " frames, initial estimate has " + std::to_string(L));

  JointRotationStreams rots;
  rots.pelvis.resize(L);
  rots.hip.resize(L);
  rots.knee.resize(L);
  rots.ankle.resize(L);
  std::vector<std::array<Rot6, 2>> init_ankle(L);
  std::vector<std::array<Mat3, 2>> knees(L);
  for (int l = 0; l < L; ++l) {
    std::array<Mat3, kNumJoints> rel;
    for (int i = 0; i < kNumJoints; ++i)
      rel[i] = rot6d_to_rotmat(init.seq.frames[l].rel6[i]);
    const auto global = relative_to_global(init.skeleton, rel);
    rots.pelvis[l] = rotmat_to_rot6d(global[kPelvis]);
    rots.hip[l] = {rotmat_to_rot6d(global[kLeftHip]),
                   rotmat_to_rot6d(global[kRightHip])};
    rots.knee[l] = {rotmat_to_rot6d(global[kLeftKnee]),
                    rotmat_to_rot6d(global[kRightKnee])};
    rots.ankle[l] = {rotmat_to_rot6d(global[kLeftAnkle]),
                     rotmat_to_rot6d(global[kRightAnkle])};
    init_ankle[l] = rots.ankle[l];
    knees[l] = {global[kLeftKnee], global[kRightKnee]};
  }
  const AnkleRotations refined =
      model.refine_streams(obs, rots, init_ankle, knees);

  MotionSequence out = init.seq;
  for (int l = 0; l < L; ++l) {
    out.frames[l].rel6[kLeftAnkle] = rotmat_to_rot6d(refined.relative[l][0]);
    out.frames[l].rel6[kRightAnkle] = rotmat_to_rot6d(refined.relative[l][1]);
  }
  io::save_motion(out_path, out, init.skeleton);
}

void cmd_eval(const std::string& pred_motion_path,
              const std::string& gt_motion_path,
              const std::string& observation_path,
              const std::string& out_json_path,
              const std::string& out_csv_path) {
  const io::LoadedMotion pred = io::load_motion(pred_motion_path);
  const io::LoadedMotion gt = io::load_motion(gt_motion_path);
  const ObservationSequence obs = io::load_observation(observation_path);
  const SequenceEval ev = evaluate_sequence(
      pred.seq, gt.seq, obs, gt.skeleton,
      fs::path(pred_motion_path).stem().string());
  const EvalReport report = make_report({ev});
  io::write_file_atomic(out_json_path, io::report_to_json(report));
  io::write_file_atomic(out_csv_path, io::report_to_csv(report));
}

void cmd_plot(const std::string& input_path, const std::string& out_svg_path,
              const std::string& out_csv_path) {
  const std::string text = io::read_file(input_path);
  std::vector<io::Series> series;
  std::string title, xlabel, ylabel;
  const auto not_space = text.find_first_not_of(" \t\r\n");
  if (not_space != std::string::npos && text[not_space] == '{') {
    series = io::series_from_eval_report(text);
    title = "per-frame ankle angle error";
    xlabel = "frame";
    ylabel = "AJAE [deg]";
  } else {
    series = io::series_from_training_csv(text, input_path);
    title = "training curves";
    xlabel = "epoch";
    ylabel = "value";
  }
  io::write_file_atomic(out_svg_path, io::render_svg(series, title, xlabel, ylabel));
  io::write_file_atomic(out_csv_path, io::tidy_csv(series));
}

namespace {

// A tiny deterministic example for the full-model gradient check.
TrainingExample tiny_example(const Skeleton& skel, int length,
                             std::uint64_t seed) {
  MotionProfile profile = MotionProfile::complex_foot();
  Rng rng = Rng::substream(seed, 77);
  const MotionSequence seq = generate_sequence(profile, length, 30.0, rng);
  NoiseConfig noise;
  noise.kp_sigma_px = 2.0;
  noise.drop_prob = 0.1;
  noise.init_rot_sigma_deg = 15.0;
  return make_training_example(seq, skel, CameraIntrinsics{}, noise, true, rng);
}

}  // namespace

GradCheckReport run_gradcheck_suite(std::uint64_t seed) {
  GradCheckReport report;
  Rng rng = Rng::substream(seed, 99);
  auto randomize = [&rng](nn::Tensor& t) {
    for (long i = 0; i < t.size(); ++i) t.at(i) = rng.normal(0.0, 0.7);
  };
  auto check_unary = [&](const std::string& name, int rows, int cols,
                         auto&& build) {
    nn::ParamStore store;
    nn::Param& p = store.create("x", rows, cols);
    randomize(p.value);
    auto eval = [&](bool grad) {
      nn::Graph g;
      nn::Var loss = build(g, g.param(p));
      if (grad) g.backward(loss);
      return loss.value()(0, 0);
    };
    const double err = nn::grad_check(
        store, [&] { return eval(false); }, [&] { return eval(true); });
    report.entries.push_back({name, err});
  };

  // Elementwise and reduction ops.
  check_unary("gelu", 4, 5, [](nn::Graph& g, nn::Var x) {
    return g.mean_all(g.gelu(x));
  });
  check_unary("rowwise_norm", 5, 3, [](nn::Graph& g, nn::Var x) {
    return g.mean_all(g.rowwise_norm(x));
  });
  check_unary("reciprocal", 3, 3, [](nn::Graph& g, nn::Var x) {
    // Shift away from zero so 1/x stays well-conditioned.
    return g.mean_all(g.reciprocal(g.add(g.mul(x, x),
                                         g.constant([] {
                                           nn::Tensor t(3, 3);
                                           t.fill(1.5);
                                           return t;
                                         }()))));
  });
  check_unary("rope", 6, 8, [](nn::Graph& g, nn::Var x) {
    return g.mean_all(g.rope(x, 10000.0));
  });
  check_unary("softmax_masked", 5, 5, [](nn::Graph& g, nn::Var x) {
    const nn::AttentionMask mask = nn::banded_mask(5, 2);
    nn::Tensor w(5, 5);
    for (long i = 0; i < w.size(); ++i) w.at(i) = 0.01 * (i % 7) + 0.1;
    return g.mean_all(g.mul(g.softmax_masked(x, mask), g.constant(w)));
  });
  check_unary("slice_concat", 4, 6, [](nn::Graph& g, nn::Var x) {
    return g.mean_all(
        g.concat_cols({g.slice_cols(x, 3, 3), g.slice_cols(x, 0, 3)}));
  });
  check_unary("gram_schmidt", 7, 6, [](nn::Graph& g, nn::Var x) {
    nn::Tensor anchor(7, 6);
    for (int r = 0; r < 7; ++r) {
      anchor(r, 0) = 2.0;
      anchor(r, 4) = 2.0;
    }
    return g.mean_all(gs_rot6_to_mat9(g, g.add(x, g.constant(anchor))));
  });

  // linear / mlp / layernorm / matmul with multiple parameters.
  {
    nn::ParamStore store;
    nn::Param& w = store.create("w", 3, 2);
    nn::Param& b = store.create("b", 1, 2);
    nn::Param& x = store.create("x", 4, 3);
    randomize(w.value);
    randomize(b.value);
    randomize(x.value);
    auto eval = [&](bool grad) {
      nn::Graph g;
      nn::Var loss = g.mean_all(nn::linear(g, g.param(x), w, b));
      if (grad) g.backward(loss);
      return loss.value()(0, 0);
    };
    report.entries.push_back(
        {"linear", nn::grad_check(store, [&] { return eval(false); },
                                  [&] { return eval(true); })});
  }
  {
    nn::ParamStore store;
    nn::Param& g1 = store.create("gain", 1, 6);
    nn::Param& b1 = store.create("bias", 1, 6);
    nn::Param& x = store.create("x", 5, 6);
    randomize(g1.value);
    randomize(b1.value);
    randomize(x.value);
    auto eval = [&](bool grad) {
      nn::Graph g;
      nn::Var loss =
          g.mean_all(g.layernorm(g.param(x), g.param(g1), g.param(b1)));
      if (grad) g.backward(loss);
      return loss.value()(0, 0);
    };
    report.entries.push_back(
        {"layernorm", nn::grad_check(store, [&] { return eval(false); },
                                     [&] { return eval(true); })});
  }
  {
    nn::ParamStore store;
    nn::Param& a = store.create("a", 4, 3);
    nn::Param& b = store.create("b", 5, 3);
    randomize(a.value);
    randomize(b.value);
    auto eval = [&](bool grad) {
      nn::Graph g;
      nn::Var loss = g.mean_all(g.matmul_nt(g.param(a), g.param(b)));
      if (grad) g.backward(loss);
      return loss.value()(0, 0);
    };
    report.entries.push_back(
        {"matmul_nt", nn::grad_check(store, [&] { return eval(false); },
                                     [&] { return eval(true); })});
  }

  // Full model through the training loss, tiny configuration.
  {
    ModelConfig mc;
    mc.d_h = 16;
    mc.layers = 2;
    mc.heads = 2;
    mc.window = 3;
    mc.output_mode = OutputMode::residual_global;
    FootMR model(mc, seed);
    // Zero-initialized head layers would hide upstream gradients.
    randomize(model.params().at("head.w2").value);
    randomize(model.params().at("head.b2").value);
    for (auto& p : model.params().items())
      p.value.map() *= 0.4;

    const Skeleton skel = default_skeleton();
    const TrainingExample ex = tiny_example(skel, 8, seed);
    LossWeights w;
    auto eval = [&](bool grad) {
      nn::Graph g;
      TrainingGraph tg = build_training_graph(g, model, ex, w, skel);
      if (grad) g.backward(tg.total);
      return tg.total.value()(0, 0);
    };
    report.entries.push_back(
        {"footmr_total_loss",
         nn::grad_check(model.params(), [&] { return eval(false); },
                        [&] { return eval(true); })});
  }

  for (const auto& e : report.entries)
    report.worst = std::max(report.worst, e.max_rel_error);
  return report;
}

int cmd_gradcheck(std::uint64_t seed, std::ostream& os) {
  const GradCheckReport report = run_gradcheck_suite(seed);
  for (const auto& e : report.entries) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%-20s max_rel_err: %.3e %s\n",
                  e.name.c_str(), e.max_rel_error,
                  e.max_rel_error < 1e-4 ? "ok" : "FAIL");
    os << buf;
  }
  os << "worst: " << report.worst << "\n";
  return report.worst < 1e-4 ? 0 : 4;
}

void cmd_ablate(const AblateConfig& cfg, const Skeleton& skel,
                const std::string& out_csv, std::ostream& progress) {
  const AblateResult result = run_ablation(cfg, skel, &progress);
  io::write_file_atomic(out_csv, ablate_csv(result));
  int favored = 0;
  for (const auto& [seed, margin] : result.margins)
    if (margin > 0.0) ++favored;
  if (!result.margins.empty())
    progress << "residual_global lower AJAE on complex-foot in " << favored
             << " of " << result.margins.size() << " seeds\n";
}

}  // namespace footlift
