#include <cstdio>

#include "footlift/commands.hpp"
#include "footlift/nn/gradcheck.hpp"
#include "footlift/train/loss.hpp"

using namespace footlift;

int main() {
  ModelConfig mc;
  mc.d_h = 16;
  mc.layers = 2;
  mc.heads = 2;
  mc.window = 3;
  mc.output_mode = OutputMode::residual_global;
  const std::uint64_t seed = 5;
  const Skeleton skel = default_skeleton();

  Rng r0 = Rng::substream(seed, 77);
  MotionProfile profile = MotionProfile::complex_foot();
  const MotionSequence seq = generate_sequence(profile, 8, 30.0, r0);
  NoiseConfig noise;
  noise.kp_sigma_px = 2.0;
  noise.drop_prob = 0.1;
  noise.init_rot_sigma_deg = 15.0;
  const TrainingExample ex =
      make_training_example(seq, skel, CameraIntrinsics{}, noise, true, r0);

  auto fresh_model = [&]() {
    FootMR m(mc, seed);
    Rng rr = Rng::substream(seed, 31337);
    for (auto& p : m.params().items())
      for (long i = 0; i < p.value.size(); ++i)
        p.value.at(i) = rr.normal(0.0, 0.28);
    return m;
  };

  {
    FootMR model = fresh_model();
    auto eval = [&](bool grad) {
      nn::Graph g;
      nn::Var loss = g.mean_all(model.forward(g, ex.input));
      if (grad) g.backward(loss);
      return loss.value()(0, 0);
    };
    std::printf("forward_only     %.3e\n",
                nn::grad_check(model.params(), [&] { return eval(false); },
                               [&] { return eval(true); }));
  }
  {
    FootMR model = fresh_model();
    auto eval = [&](bool grad) {
      nn::Graph g;
      nn::Var delta = model.forward(g, ex.input);
      std::vector<Rot6> l6(ex.length()), r6(ex.length());
      for (int l = 0; l < ex.length(); ++l) {
        l6[l] = ex.init_global_ankle[l][0];
        r6[l] = ex.init_global_ankle[l][1];
      }
      auto applied = model.apply_output_graph(g, delta, g.constant(pack_rot6(l6)),
                                              g.constant(pack_rot6(r6)),
                                              ex.knee_global);
      nn::Var loss = g.mean_all(
          g.add(applied.global9[0], applied.global9[1]));
      if (grad) g.backward(loss);
      return loss.value()(0, 0);
    };
    std::printf("fwd+apply        %.3e\n",
                nn::grad_check(model.params(), [&] { return eval(false); },
                               [&] { return eval(true); }));
  }
  const char* names[5] = {"theta", "j3d", "j2d", "v3d", "v2d"};
  for (int term = 0; term < 5; ++term) {
    FootMR model = fresh_model();
    LossWeights w;
    auto eval = [&](bool grad) {
      nn::Graph g;
      TrainingGraph tg = build_training_graph(g, model, ex, w, skel);
      nn::Var t = term == 0   ? tg.theta
                  : term == 1 ? tg.j3d
                  : term == 2 ? tg.j2d
                  : term == 3 ? tg.v3d
                              : tg.v2d;
      if (grad) g.backward(t);
      return t.value()(0, 0);
    };
    std::printf("term %-6s      %.3e\n", names[term],
                nn::grad_check(model.params(), [&] { return eval(false); },
                               [&] { return eval(true); }));
  }
  return 0;
}
