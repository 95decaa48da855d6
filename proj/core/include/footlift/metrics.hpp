#pragma once

#include <array>
#include <string>
#include <vector>

#include "footlift/camera.hpp"
#include "footlift/kinematics.hpp"

namespace footlift {

constexpr double kPckThreshold = 0.05;

// Marker streams follow the foot_keypoints_3d order; the 2D metrics and the
// acceleration metric evaluate the big toe / small toe / heel triplet per
// foot and exclude the ankle entry.
using AnkleSeq = std::vector<std::array<Mat3, 2>>;
using Markers3dSeq = std::vector<std::array<Vec3, kNumMarkers>>;
using Markers2dSeq = std::vector<std::array<Vec2, kNumMarkers>>;
using VisibilitySeq = std::vector<std::array<bool, kNumMarkers>>;

struct MetricCounts {
  long frames = 0;
  long keypoints_evaluated = 0;
  long feet_skipped = 0;
};

// Mean geodesic angle (degrees) over frames and both ankles.
double ajae(const AnkleSeq& pred, const AnkleSeq& gt,
            std::vector<double>* per_frame = nullptr);

// Per-frame, per-foot mean-centered and least-squares scale-normalized mean
// Euclidean distance of the toe/heel markers, in millimeters.
double n_mpjpe_f(const Markers3dSeq& pred, const Markers3dSeq& gt);

// Fraction of visible toe/heel keypoints within threshold * bbox size.
double pck_f(const Markers2dSeq& pred, const Markers2dSeq& gt,
             const std::vector<BBox>& bboxes, double threshold,
             const VisibilitySeq& visibility, MetricCounts* counts = nullptr);

// Bbox-normalized, per-foot centered and scale-aligned 2D error. Feet with
// fewer than two visible markers in a frame are skipped and counted.
double n_fke_2d(const Markers2dSeq& pred, const Markers2dSeq& gt,
                const std::vector<BBox>& bboxes,
                const VisibilitySeq& visibility,
                MetricCounts* counts = nullptr);

// Mean acceleration error (m/s^2) of the toe/heel markers over interior
// frames, via second central differences.
double accel_f(const Markers3dSeq& pred, const Markers3dSeq& gt, double fps);

struct SequenceEval {
  std::string name;
  long frames = 0;
  double ajae_deg = 0.0;
  double n_mpjpe_f_mm = 0.0;
  double pck_f = 0.0;
  double n_fke_2d = 0.0;
  double accel_f_ms2 = 0.0;
  long keypoints_evaluated = 0;
  long feet_skipped = 0;
  std::vector<double> per_frame_ajae;
};

struct EvalReport {
  std::vector<SequenceEval> sequences;
  SequenceEval aggregate;  // unit-count weighted across sequences
};

// Full metric suite for one predicted sequence against ground truth, with
// 2D annotations and the person box taken from the observations.
SequenceEval evaluate_sequence(const MotionSequence& pred,
                               const MotionSequence& gt,
                               const ObservationSequence& obs,
                               const Skeleton& skel,
                               const std::string& name = "");

EvalReport make_report(std::vector<SequenceEval> sequences);

}  // namespace footlift
