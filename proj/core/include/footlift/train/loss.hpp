#pragma once

#include <vector>

#include "footlift/footmr.hpp"
#include "footlift/synth.hpp"

namespace footlift {

struct LossWeights {
  double theta = 1.0;
  double j3d = 500.0;
  double j2d = 1000.0;
  double v3d = 500.0;
  double v2d = 1000.0;
};

struct LossBreakdown {
  double theta = 0.0, j3d = 0.0, j2d = 0.0, v3d = 0.0, v2d = 0.0;
  double total = 0.0;
};

// Mean over frames and joints of the per-joint Euclidean distance (meters).
double loss_j3d(const std::vector<PoseFK>& pred, const std::vector<PoseFK>& gt);

// Mean reprojection distance over visible joints, in bbox-normalized
// coordinates; 0 when nothing is visible. gt2d is in pixels.
double loss_j2d(const std::vector<PoseFK>& pred,
                const std::vector<std::array<Vec2, kNumJoints>>& gt2d_px,
                const CameraIntrinsics& cam, const std::vector<BBox>& bboxes,
                const std::vector<std::array<bool, kNumJoints>>* visibility =
                    nullptr);

// Foot-marker variants of the two losses above.
double loss_v3d(const std::vector<std::array<Vec3, kNumMarkers>>& pred,
                const std::vector<std::array<Vec3, kNumMarkers>>& gt);
double loss_v2d(const std::vector<std::array<Vec3, kNumMarkers>>& pred3d,
                const std::vector<std::array<Vec2, kNumMarkers>>& gt2d_px,
                const CameraIntrinsics& cam, const std::vector<BBox>& bboxes,
                const std::vector<std::array<bool, kNumMarkers>>* visibility =
                    nullptr);

// Half the summed rotation losses of the initial and the refined ankles
// against the ground truth, over 6D components per frame. The non-ankle
// joints cancel between the two terms and are omitted.
double loss_theta(const std::vector<std::array<Rot6, 2>>& init_rel,
                  const std::vector<std::array<Rot6, 2>>& refined_rel,
                  const std::vector<std::array<Rot6, 2>>& gt_rel);

// Ground-truth sequence with the ankle relative rotations replaced by the
// refined ones, run through forward kinematics.
std::vector<PoseFK> substituted_fk(const TrainingExample& ex,
                                   const AnkleRotations& refined,
                                   const Skeleton& skel);

// Weighted sum with per-term breakdown; 3D/2D terms use the refined ankles
// substituted into the kinematic chain.
LossBreakdown total_loss(const TrainingExample& ex,
                         const AnkleRotations& refined, const LossWeights& w,
                         const Skeleton& skel);

// Differentiable end-to-end training graph: input streams (with the initial
// ankle estimates detached), the network, output fusion and every loss term.
struct TrainingGraph {
  nn::Var delta;
  nn::Var theta, j3d, j2d, v3d, v2d;  // unweighted scalar terms
  nn::Var total;                      // weighted sum
  nn::Var init_leaf[2];               // [L, 6] leaves; grads must stay zero
  FootMR::AppliedOutput applied;
};

TrainingGraph build_training_graph(nn::Graph& g, FootMR& model,
                                   const TrainingExample& ex,
                                   const LossWeights& w, const Skeleton& skel);

// Mean geodesic angle between the model's refined global ankles and the
// example's targets; forward only.
double example_ajae(FootMR& model, const TrainingExample& ex);

}  // namespace footlift
