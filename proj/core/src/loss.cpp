#include "footlift/train/loss.hpp"

#include <cmath>

namespace footlift {

using nn::Graph;
using nn::Tensor;
using nn::Var;

double loss_j3d(const std::vector<PoseFK>& pred, const std::vector<PoseFK>& gt) {
  if (pred.size() != gt.size()) throw LengthMismatch("loss_j3d frames");
  if (pred.empty()) return 0.0;
  double sum = 0.0;
  for (size_t l = 0; l < pred.size(); ++l)
    for (int j = 0; j < kNumJoints; ++j)
      sum += (pred[l].joint_pos[j] - gt[l].joint_pos[j]).norm();
  return sum / (static_cast<double>(pred.size()) * kNumJoints);
}

double loss_j2d(const std::vector<PoseFK>& pred,
                const std::vector<std::array<Vec2, kNumJoints>>& gt2d_px,
                const CameraIntrinsics& cam, const std::vector<BBox>& bboxes,
                const std::vector<std::array<bool, kNumJoints>>* visibility) {
  if (pred.size() != gt2d_px.size() || pred.size() != bboxes.size())
    throw LengthMismatch("loss_j2d frames");
  double sum = 0.0;
  long count = 0;
  for (size_t l = 0; l < pred.size(); ++l) {
    for (int j = 0; j < kNumJoints; ++j) {
      if (visibility && !(*visibility)[l][j]) continue;
      const Vec2 p = normalize_keypoint(project(pred[l].joint_pos[j], cam),
                                        bboxes[l]);
      const Vec2 q = normalize_keypoint(gt2d_px[l][j], bboxes[l]);
      sum += (p - q).norm();
      ++count;
    }
  }
  return count == 0 ? 0.0 : sum / static_cast<double>(count);
}

double loss_v3d(const std::vector<std::array<Vec3, kNumMarkers>>& pred,
                const std::vector<std::array<Vec3, kNumMarkers>>& gt) {
  if (pred.size() != gt.size()) throw LengthMismatch("loss_v3d frames");
  if (pred.empty()) return 0.0;
  double sum = 0.0;
  for (size_t l = 0; l < pred.size(); ++l)
    for (int k = 0; k < kNumMarkers; ++k)
      sum += (pred[l][k] - gt[l][k]).norm();
  return sum / (static_cast<double>(pred.size()) * kNumMarkers);
}

double loss_v2d(const std::vector<std::array<Vec3, kNumMarkers>>& pred3d,
                const std::vector<std::array<Vec2, kNumMarkers>>& gt2d_px,
                const CameraIntrinsics& cam, const std::vector<BBox>& bboxes,
                const std::vector<std::array<bool, kNumMarkers>>* visibility) {
  if (pred3d.size() != gt2d_px.size() || pred3d.size() != bboxes.size())
    throw LengthMismatch("loss_v2d frames");
  double sum = 0.0;
  long count = 0;
  for (size_t l = 0; l < pred3d.size(); ++l) {
    for (int k = 0; k < kNumMarkers; ++k) {
      if (visibility && !(*visibility)[l][k]) continue;
      const Vec2 p =
          normalize_keypoint(project(pred3d[l][k], cam), bboxes[l]);
      const Vec2 q = normalize_keypoint(gt2d_px[l][k], bboxes[l]);
      sum += (p - q).norm();
      ++count;
    }
  }
  return count == 0 ? 0.0 : sum / static_cast<double>(count);
}

double loss_theta(const std::vector<std::array<Rot6, 2>>& init_rel,
                  const std::vector<std::array<Rot6, 2>>& refined_rel,
                  const std::vector<std::array<Rot6, 2>>& gt_rel) {
  if (init_rel.size() != gt_rel.size() || refined_rel.size() != gt_rel.size())
    throw ShapeMismatch("loss_theta stream lengths");
  if (gt_rel.empty()) return 0.0;
  double init_sum = 0.0, refined_sum = 0.0;
  for (size_t l = 0; l < gt_rel.size(); ++l) {
    for (int s = 0; s < 2; ++s) {
      init_sum += (init_rel[l][s] - gt_rel[l][s]).norm();
      refined_sum += (refined_rel[l][s] - gt_rel[l][s]).norm();
    }
  }
  const double n = static_cast<double>(gt_rel.size()) * 2.0;
  return 0.5 * (init_sum / n + refined_sum / n);
}

std::vector<PoseFK> substituted_fk(const TrainingExample& ex,
                                   const AnkleRotations& refined,
                                   const Skeleton& skel) {
  const int L = ex.length();
  if (static_cast<int>(refined.relative.size()) != L)
    throw LengthMismatch("refined rotations vs example length");
  std::vector<PoseFK> out;
  out.reserve(L);
  MotionFrame frame;
  for (int l = 0; l < L; ++l) {
    frame = ex.gt_sequence.frames[l];
    frame.rel6[kLeftAnkle] = rotmat_to_rot6d(refined.relative[l][0]);
    frame.rel6[kRightAnkle] = rotmat_to_rot6d(refined.relative[l][1]);
    out.push_back(forward_kinematics(skel, frame));
  }
  return out;
}

namespace {

struct GtQuantities {
  std::vector<PoseFK> poses;
  std::vector<std::array<Vec3, kNumMarkers>> markers;
  std::vector<std::array<Vec2, kNumJoints>> joints2d;
  std::vector<std::array<Vec2, kNumMarkers>> markers2d;
  std::vector<BBox> bboxes;
  std::vector<std::array<Rot6, 2>> init_rel;
};

GtQuantities gt_quantities(const TrainingExample& ex, const Skeleton& skel) {
  const int L = ex.length();
  GtQuantities q;
  q.poses.reserve(L);
  q.markers.resize(L);
  q.joints2d.resize(L);
  q.markers2d.resize(L);
  q.bboxes.reserve(L);
  q.init_rel.resize(L);
  for (int l = 0; l < L; ++l) {
    q.poses.push_back(forward_kinematics(skel, ex.gt_sequence.frames[l]));
    q.markers[l] = foot_keypoints_3d(q.poses[l], skel);
    for (int j = 0; j < kNumJoints; ++j)
      q.joints2d[l][j] = project(q.poses[l].joint_pos[j], ex.camera);
    for (int k = 0; k < kNumMarkers; ++k)
      q.markers2d[l][k] = project(q.markers[l][k], ex.camera);
    q.bboxes.push_back(ex.obs.frames[l].bbox);
    for (int s = 0; s < 2; ++s)
      q.init_rel[l][s] = rotmat_to_rot6d(global_to_relative(
          rot6d_to_rotmat(ex.init_global_ankle[l][s]), ex.knee_global[l][s]));
  }
  return q;
}

}  // namespace

LossBreakdown total_loss(const TrainingExample& ex,
                         const AnkleRotations& refined, const LossWeights& w,
                         const Skeleton& skel) {
  const GtQuantities q = gt_quantities(ex, skel);
  const auto pred_poses = substituted_fk(ex, refined, skel);
  std::vector<std::array<Vec3, kNumMarkers>> pred_markers(ex.length());
  for (int l = 0; l < ex.length(); ++l)
    pred_markers[l] = foot_keypoints_3d(pred_poses[l], skel);

  std::vector<std::array<Rot6, 2>> refined_rel(ex.length());
  for (int l = 0; l < ex.length(); ++l)
    for (int s = 0; s < 2; ++s)
      refined_rel[l][s] = rotmat_to_rot6d(refined.relative[l][s]);

  LossBreakdown b;
  b.theta = loss_theta(q.init_rel, refined_rel, ex.target_rel_ankle);
  b.j3d = loss_j3d(pred_poses, q.poses);
  b.j2d = loss_j2d(pred_poses, q.joints2d, ex.camera, q.bboxes);
  b.v3d = loss_v3d(pred_markers, q.markers);
  b.v2d = loss_v2d(pred_markers, q.markers2d, ex.camera, q.bboxes);
  b.total = w.theta * b.theta + w.j3d * b.j3d + w.j2d * b.j2d + w.v3d * b.v3d +
            w.v2d * b.v2d;
  return b;
}

namespace {

// Bbox-normalized pinhole projection of an in-graph point stream [L, 3].
Var project_normalized(Graph& g, Var pos3, const CameraIntrinsics& cam,
                       const std::vector<BBox>& boxes) {
  const int L = pos3.rows();
  Var x = g.slice_cols(pos3, 0, 1);
  Var y = g.slice_cols(pos3, 1, 1);
  Var z = g.slice_cols(pos3, 2, 1);
  for (int l = 0; l < L; ++l)
    if (z.value()(l, 0) <= 1e-6)
      throw BehindCamera("frame " + std::to_string(l));
  Var inv_z = g.reciprocal(z);
  Tensor cu(L, 1), cv(L, 1), inv_b(L, 1);
  for (int l = 0; l < L; ++l) {
    cu(l, 0) = cam.cx - boxes[l].center.x();
    cv(l, 0) = cam.cy - boxes[l].center.y();
    inv_b(l, 0) = 1.0 / boxes[l].size;
  }
  Var u = g.mul(g.add(g.scale(g.mul(x, inv_z), cam.f), g.constant(cu)),
                g.constant(inv_b));
  Var v = g.mul(g.add(g.scale(g.mul(y, inv_z), cam.f), g.constant(cv)),
                g.constant(inv_b));
  return g.concat_cols({u, v});
}

Tensor normalized_const_2d(const std::vector<Vec2>& px,
                           const std::vector<BBox>& boxes) {
  Tensor t(static_cast<int>(px.size()), 2);
  for (size_t l = 0; l < px.size(); ++l) {
    const Vec2 n = normalize_keypoint(px[l], boxes[l]);
    t(static_cast<int>(l), 0) = n.x();
    t(static_cast<int>(l), 1) = n.y();
  }
  return t;
}

}  // namespace

TrainingGraph build_training_graph(nn::Graph& g, FootMR& model,
                                   const TrainingExample& ex,
                                   const LossWeights& w, const Skeleton& skel) {
  const int L = ex.length();
  const GtQuantities q = gt_quantities(ex, skel);
  const auto& joints = model.config().input_joints;

  TrainingGraph tg;
  std::vector<Rot6> init6[2];
  for (int s = 0; s < 2; ++s) {
    init6[s].resize(L);
    for (int l = 0; l < L; ++l) init6[s][l] = ex.init_global_ankle[l][s];
    tg.init_leaf[s] = g.leaf(pack_rot6(init6[s]));
  }

  // Rotation stream: context blocks are constants; the ankle block is the
  // detached initial estimate (always the trailing block in chain order).
  Var rot_stream;
  const int ankle_off = ankle_block_offset(joints);
  if (ankle_off >= 0) {
    std::vector<Var> parts;
    if (ankle_off > 0)
      parts.push_back(
          g.slice_cols(g.constant(ex.input.rot), 0, ankle_off));
    parts.push_back(g.detach(tg.init_leaf[0]));
    parts.push_back(g.detach(tg.init_leaf[1]));
    rot_stream = g.concat_cols(parts);
  } else {
    rot_stream = g.constant(ex.input.rot);
  }

  tg.delta = model.forward(g, g.constant(ex.input.foot2d),
                           g.constant(ex.input.bboxf), rot_stream);
  tg.applied = model.apply_output_graph(g, tg.delta, tg.init_leaf[0],
                                        tg.init_leaf[1], ex.knee_global);

  // --- theta ---
  double init_term = 0.0;
  {
    double sum = 0.0;
    for (int l = 0; l < L; ++l)
      for (int s = 0; s < 2; ++s)
        sum += (q.init_rel[l][s] - ex.target_rel_ankle[l][s]).norm();
    init_term = sum / (2.0 * L);
  }
  Var refined_term;
  for (int s = 0; s < 2; ++s) {
    std::vector<Rot6> gt_rel(L);
    for (int l = 0; l < L; ++l) gt_rel[l] = ex.target_rel_ankle[l][s];
    Var rel6 = mat9_to_rot6(g, tg.applied.rel9[s]);
    Var n = g.rowwise_norm(g.sub(rel6, g.constant(pack_rot6(gt_rel))));
    Var m = g.mean_all(n);
    refined_term = s == 0 ? m : g.add(refined_term, m);
  }
  tg.theta = g.scale(g.add(g.constant(Tensor::scalar(init_term)),
                           g.scale(refined_term, 0.5)),
                     0.5);

  // --- j3d / j2d over the varying foot joints; the other joints match the
  // ground truth exactly and contribute zero ---
  Var j3d_sum, j2d_sum, v3d_sum, v2d_sum;
  for (int s = 0; s < 2; ++s) {
    const int ankle = s == 0 ? kLeftAnkle : kRightAnkle;
    const int foot = s == 0 ? kLeftFoot : kRightFoot;
    std::vector<Vec3> ankle_pos(L), gt_foot(L);
    std::vector<Vec2> gt_foot2d(L);
    for (int l = 0; l < L; ++l) {
      ankle_pos[l] = q.poses[l].joint_pos[ankle];
      gt_foot[l] = q.poses[l].joint_pos[foot];
      gt_foot2d[l] = q.joints2d[l][foot];
    }
    Var apos = g.constant(pack_vec3(ankle_pos));
    Var fpos = g.add(apos, matrow_apply(g, tg.applied.global9[s],
                                        skel.joints[foot].rest_offset));
    Var d3 = g.mean_all(g.rowwise_norm(g.sub(fpos, g.constant(pack_vec3(gt_foot)))));
    j3d_sum = s == 0 ? d3 : g.add(j3d_sum, d3);
    Var p2 = project_normalized(g, fpos, ex.camera, q.bboxes);
    Var d2 = g.mean_all(g.rowwise_norm(
        g.sub(p2, g.constant(normalized_const_2d(gt_foot2d, q.bboxes)))));
    j2d_sum = s == 0 ? d2 : g.add(j2d_sum, d2);

    // --- markers ---
    const auto& offsets = skel.markers(s == 0);
    for (int k = 0; k < kMarkersPerFoot; ++k) {
      std::vector<Vec3> gt_m(L);
      std::vector<Vec2> gt_m2(L);
      for (int l = 0; l < L; ++l) {
        gt_m[l] = q.markers[l][s * kMarkersPerFoot + k];
        gt_m2[l] = q.markers2d[l][s * kMarkersPerFoot + k];
      }
      Var mpos =
          g.add(apos, matrow_apply(g, tg.applied.global9[s], offsets[k]));
      Var md3 = g.mean_all(
          g.rowwise_norm(g.sub(mpos, g.constant(pack_vec3(gt_m)))));
      v3d_sum = (s == 0 && k == 0) ? md3 : g.add(v3d_sum, md3);
      Var mp2 = project_normalized(g, mpos, ex.camera, q.bboxes);
      Var md2 = g.mean_all(g.rowwise_norm(
          g.sub(mp2, g.constant(normalized_const_2d(gt_m2, q.bboxes)))));
      v2d_sum = (s == 0 && k == 0) ? md2 : g.add(v2d_sum, md2);
    }
  }
  tg.j3d = g.scale(j3d_sum, 1.0 / kNumJoints);
  tg.j2d = g.scale(j2d_sum, 1.0 / kNumJoints);
  tg.v3d = g.scale(v3d_sum, 1.0 / kNumMarkers);
  tg.v2d = g.scale(v2d_sum, 1.0 / kNumMarkers);

  tg.total = g.add(
      g.add(g.add(g.scale(tg.theta, w.theta), g.scale(tg.j3d, w.j3d)),
            g.add(g.scale(tg.j2d, w.j2d), g.scale(tg.v3d, w.v3d))),
      g.scale(tg.v2d, w.v2d));
  return tg;
}

double example_ajae(FootMR& model, const TrainingExample& ex) {
  const Tensor delta = model.forward_tensor(ex.input);
  const AnkleRotations refined = apply_output(
      delta, ex.init_global_ankle, ex.knee_global, model.config().output_mode);
  double sum = 0.0;
  for (int l = 0; l < ex.length(); ++l)
    for (int s = 0; s < 2; ++s)
      sum += geodesic_angle_deg(refined.global[l][s],
                                rot6d_to_rotmat(ex.target_global_ankle[l][s]));
  return sum / (2.0 * ex.length());
}

}  // namespace footlift
