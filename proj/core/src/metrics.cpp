#include "footlift/metrics.hpp"

#include <cmath>

namespace footlift {

namespace {
// Toe/heel marker indices within a foot's marker block (ankle excluded).
constexpr int kEvalMarkers[3] = {0, 1, 2};
}  // namespace

double ajae(const AnkleSeq& pred, const AnkleSeq& gt,
            std::vector<double>* per_frame) {
  if (pred.size() != gt.size()) throw LengthMismatch("ajae streams");
  if (pred.empty()) throw LengthMismatch("ajae needs at least one frame");
  if (per_frame) per_frame->clear();
  double sum = 0.0;
  for (size_t l = 0; l < pred.size(); ++l) {
    double frame_sum = 0.0;
    for (int s = 0; s < 2; ++s)
      frame_sum += geodesic_angle_deg(pred[l][s], gt[l][s]);
    if (per_frame) per_frame->push_back(frame_sum / 2.0);
    sum += frame_sum;
  }
  return sum / (2.0 * static_cast<double>(pred.size()));
}

double n_mpjpe_f(const Markers3dSeq& pred, const Markers3dSeq& gt) {
  if (pred.size() != gt.size()) throw LengthMismatch("n_mpjpe_f streams");
  if (pred.empty()) throw LengthMismatch("n_mpjpe_f needs frames");
  double sum = 0.0;
  long count = 0;
  for (size_t l = 0; l < pred.size(); ++l) {
    for (int side = 0; side < 2; ++side) {
      Vec3 pc = Vec3::Zero(), gc = Vec3::Zero();
      for (int k : kEvalMarkers) {
        pc += pred[l][side * kMarkersPerFoot + k];
        gc += gt[l][side * kMarkersPerFoot + k];
      }
      pc /= 3.0;
      gc /= 3.0;
      double dot_pg = 0.0, dot_pp = 0.0;
      Vec3 p[3], q[3];
      for (int i = 0; i < 3; ++i) {
        p[i] = pred[l][side * kMarkersPerFoot + kEvalMarkers[i]] - pc;
        q[i] = gt[l][side * kMarkersPerFoot + kEvalMarkers[i]] - gc;
        dot_pg += p[i].dot(q[i]);
        dot_pp += p[i].dot(p[i]);
      }
      if (dot_pp < 1e-12)
        throw DegenerateInput("collapsed predicted foot markers");
      const double s = dot_pg / dot_pp;
      double err = 0.0;
      for (int i = 0; i < 3; ++i) err += (s * p[i] - q[i]).norm();
      sum += err / 3.0;
      ++count;
    }
  }
  return 1000.0 * sum / static_cast<double>(count);
}

double pck_f(const Markers2dSeq& pred, const Markers2dSeq& gt,
             const std::vector<BBox>& bboxes, double threshold,
             const VisibilitySeq& visibility, MetricCounts* counts) {
  if (pred.size() != gt.size() || pred.size() != bboxes.size() ||
      pred.size() != visibility.size())
    throw LengthMismatch("pck_f streams");
  long correct = 0, visible = 0;
  for (size_t l = 0; l < pred.size(); ++l) {
    for (int side = 0; side < 2; ++side) {
      for (int k : kEvalMarkers) {
        const int idx = side * kMarkersPerFoot + k;
        if (!visibility[l][idx]) continue;
        ++visible;
        const double d = (pred[l][idx] - gt[l][idx]).norm();
        if (d <= threshold * bboxes[l].size) ++correct;
      }
    }
  }
  if (visible == 0) throw NoVisibleKeypoints("pck_f");
  if (counts) {
    counts->frames += static_cast<long>(pred.size());
    counts->keypoints_evaluated += visible;
  }
  return static_cast<double>(correct) / static_cast<double>(visible);
}

double n_fke_2d(const Markers2dSeq& pred, const Markers2dSeq& gt,
                const std::vector<BBox>& bboxes,
                const VisibilitySeq& visibility, MetricCounts* counts) {
  if (pred.size() != gt.size() || pred.size() != bboxes.size() ||
      pred.size() != visibility.size())
    throw LengthMismatch("n_fke_2d streams");
  double sum = 0.0;
  long feet = 0, skipped = 0;
  for (size_t l = 0; l < pred.size(); ++l) {
    for (int side = 0; side < 2; ++side) {
      std::vector<Vec2> p, q;
      for (int k : kEvalMarkers) {
        const int idx = side * kMarkersPerFoot + k;
        if (!visibility[l][idx]) continue;
        p.push_back(normalize_keypoint(pred[l][idx], bboxes[l]));
        q.push_back(normalize_keypoint(gt[l][idx], bboxes[l]));
      }
      if (p.size() < 2) {
        ++skipped;
        continue;
      }
      Vec2 pc = Vec2::Zero(), qc = Vec2::Zero();
      for (size_t i = 0; i < p.size(); ++i) {
        pc += p[i];
        qc += q[i];
      }
      pc /= static_cast<double>(p.size());
      qc /= static_cast<double>(p.size());
      double dot_pg = 0.0, dot_pp = 0.0;
      for (size_t i = 0; i < p.size(); ++i) {
        dot_pg += (p[i] - pc).dot(q[i] - qc);
        dot_pp += (p[i] - pc).squaredNorm();
      }
      if (dot_pp < 1e-18) {
        ++skipped;
        continue;
      }
      const double s = dot_pg / dot_pp;
      double err = 0.0;
      for (size_t i = 0; i < p.size(); ++i)
        err += (s * (p[i] - pc) - (q[i] - qc)).norm();
      sum += err / static_cast<double>(p.size());
      ++feet;
    }
  }
  if (counts) counts->feet_skipped += skipped;
  if (feet == 0) throw InsufficientKeypoints("n_fke_2d: no evaluable feet");
  return sum / static_cast<double>(feet);
}

double accel_f(const Markers3dSeq& pred, const Markers3dSeq& gt, double fps) {
  if (pred.size() != gt.size()) throw LengthMismatch("accel_f streams");
  if (pred.size() < 3) throw SequenceTooShort("accel_f needs L >= 3");
  const double fps2 = fps * fps;
  double sum = 0.0;
  long count = 0;
  for (size_t l = 1; l + 1 < pred.size(); ++l) {
    for (int side = 0; side < 2; ++side) {
      for (int k : kEvalMarkers) {
        const int idx = side * kMarkersPerFoot + k;
        const Vec3 ap =
            (pred[l + 1][idx] - 2.0 * pred[l][idx] + pred[l - 1][idx]) * fps2;
        const Vec3 ag =
            (gt[l + 1][idx] - 2.0 * gt[l][idx] + gt[l - 1][idx]) * fps2;
        sum += (ap - ag).norm();
        ++count;
      }
    }
  }
  return sum / static_cast<double>(count);
}

SequenceEval evaluate_sequence(const MotionSequence& pred,
                               const MotionSequence& gt,
                               const ObservationSequence& obs,
                               const Skeleton& skel, const std::string& name) {
  const int L = gt.length();
  if (pred.length() != L || obs.length() != L)
    throw LengthMismatch("evaluate_sequence stream lengths");
  if (pred.fps != gt.fps) throw FormatError("fps mismatch between motions");

  AnkleSeq pred_ankles(L), gt_ankles(L);
  Markers3dSeq pred_m3(L), gt_m3(L);
  Markers2dSeq pred_m2(L), gt_m2(L);
  VisibilitySeq vis(L);
  std::vector<BBox> boxes(L);
  for (int l = 0; l < L; ++l) {
    const PoseFK pp = forward_kinematics(skel, pred.frames[l]);
    const PoseFK gp = forward_kinematics(skel, gt.frames[l]);
    pred_ankles[l] = {pp.global_rot[kLeftAnkle], pp.global_rot[kRightAnkle]};
    gt_ankles[l] = {gp.global_rot[kLeftAnkle], gp.global_rot[kRightAnkle]};
    pred_m3[l] = foot_keypoints_3d(pp, skel);
    gt_m3[l] = foot_keypoints_3d(gp, skel);
    for (int k = 0; k < kNumMarkers; ++k) {
      pred_m2[l][k] = project(pred_m3[l][k], obs.camera);
      // 2D ground truth comes from the annotated observations.
      gt_m2[l][k] = obs.frames[l].keypoints[k].uv;
      vis[l][k] = obs.frames[l].keypoints[k].visible();
    }
    boxes[l] = obs.frames[l].bbox;
  }

  SequenceEval ev;
  ev.name = name;
  ev.frames = L;
  MetricCounts counts;
  ev.ajae_deg = ajae(pred_ankles, gt_ankles, &ev.per_frame_ajae);
  ev.n_mpjpe_f_mm = n_mpjpe_f(pred_m3, gt_m3);
  ev.pck_f = pck_f(pred_m2, gt_m2, boxes, kPckThreshold, vis, &counts);
  ev.n_fke_2d = n_fke_2d(pred_m2, gt_m2, boxes, vis, &counts);
  ev.accel_f_ms2 = accel_f(pred_m3, gt_m3, gt.fps);
  ev.keypoints_evaluated = counts.keypoints_evaluated;
  ev.feet_skipped = counts.feet_skipped;
  return ev;
}

EvalReport make_report(std::vector<SequenceEval> sequences) {
  EvalReport report;
  SequenceEval& agg = report.aggregate;
  agg.name = "aggregate";
  double ajae_sum = 0.0, mpjpe_sum = 0.0, pck_sum = 0.0, fke_sum = 0.0,
         accel_sum = 0.0;
  long frames = 0, kps = 0, feet = 0, interior = 0;
  for (const auto& s : sequences) {
    frames += s.frames;
    kps += s.keypoints_evaluated;
    const long seq_feet = 2 * s.frames - s.feet_skipped;
    feet += seq_feet;
    const long seq_interior = s.frames - 2;
    interior += seq_interior;
    ajae_sum += s.ajae_deg * static_cast<double>(s.frames);
    mpjpe_sum += s.n_mpjpe_f_mm * static_cast<double>(s.frames);
    pck_sum += s.pck_f * static_cast<double>(s.keypoints_evaluated);
    fke_sum += s.n_fke_2d * static_cast<double>(seq_feet);
    accel_sum += s.accel_f_ms2 * static_cast<double>(seq_interior);
    agg.feet_skipped += s.feet_skipped;
  }
  agg.frames = frames;
  agg.keypoints_evaluated = kps;
  if (frames > 0) {
    agg.ajae_deg = ajae_sum / frames;
    agg.n_mpjpe_f_mm = mpjpe_sum / frames;
  }
  if (kps > 0) agg.pck_f = pck_sum / kps;
  if (feet > 0) agg.n_fke_2d = fke_sum / feet;
  if (interior > 0) agg.accel_f_ms2 = accel_sum / interior;
  report.sequences = std::move(sequences);
  return report;
}

}  // namespace footlift
