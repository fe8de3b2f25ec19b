#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "track6d/geometry/rotation_rep.hpp"
#include "track6d/metrics/pose_metrics.hpp"

namespace track6d {

// Area under the accuracy-vs-threshold curve on [0, threshold_max],
// normalized to [0, 1]. accuracy(tau) = fraction of values <= tau is a step
// function; its exact integral is sum_i max(0, tmax - v_i) / (n * tmax),
// so the trivial cases come out exact instead of discretized.
inline double auc(const std::vector<double>& values, double threshold_max) {
  if (values.empty()) throw DomainError("auc: empty value list");
  check(threshold_max > 0, "auc: threshold_max must be positive");
  double area = 0;
  for (const double v : values) {
    check(v >= 0, "auc: negative value");
    area += std::max(0.0, threshold_max - v);
  }
  return area / (double(values.size()) * threshold_max);
}

// One fixed-length chunk of a trajectory. Errors are measured at the chunk's
// last frame; the gt_* fields hold the ground-truth motion magnitude over
// the same chunk, which is exactly the error a zero-motion predictor makes
// when the pose was reset to ground truth at the chunk start.
struct SegmentError {
  int start = 0;
  int last = 0;
  double rot_deg = 0;
  double trans_mm = 0;
  double gt_rot_deg = 0;
  double gt_trans_mm = 0;
};

// Splits [0, n) into consecutive complete segments of segment_len frames.
// Meant for trajectories re-initialized at each segment start (every
// segment_len frames); partial tails are dropped.
inline std::vector<SegmentError> segment_errors(const std::vector<Pose>& pred,
                                                const std::vector<Pose>& gt,
                                                int segment_len = 15) {
  check(segment_len >= 2, "segment_errors: segment_len must be >= 2");
  if (pred.size() != gt.size())
    throw DomainError("segment_errors: trajectory/ground-truth length mismatch");
  const int n = int(pred.size());
  std::vector<SegmentError> out;
  for (int start = 0; start + segment_len <= n; start += segment_len) {
    const int last = start + segment_len - 1;
    SegmentError e;
    e.start = start;
    e.last = last;
    e.rot_deg = rotation_error_deg(pred[std::size_t(last)],
                                   gt[std::size_t(last)]);
    e.trans_mm = translation_error_mm(pred[std::size_t(last)],
                                      gt[std::size_t(last)]);
    e.gt_rot_deg = rad2deg(geodesic_angle(gt[std::size_t(last)].R,
                                          gt[std::size_t(start)].R));
    e.gt_trans_mm =
        (gt[std::size_t(last)].T - gt[std::size_t(start)].T).norm();
    out.push_back(e);
  }
  return out;
}

// Aggregate over segments, possibly pooled from many sequences. The base_*
// means are the "average motion" baseline a predictor has to beat.
struct SegmentSummary {
  int segments = 0;
  double mean_rot_deg = 0;
  double mean_trans_mm = 0;
  double base_rot_deg = 0;
  double base_trans_mm = 0;
};

inline SegmentSummary summarize_segments(
    const std::vector<SegmentError>& segs) {
  SegmentSummary s;
  s.segments = int(segs.size());
  if (segs.empty()) return s;
  for (const SegmentError& e : segs) {
    s.mean_rot_deg += e.rot_deg;
    s.mean_trans_mm += e.trans_mm;
    s.base_rot_deg += e.gt_rot_deg;
    s.base_trans_mm += e.gt_trans_mm;
  }
  s.mean_rot_deg /= s.segments;
  s.mean_trans_mm /= s.segments;
  s.base_rot_deg /= s.segments;
  s.base_trans_mm /= s.segments;
  return s;
}

struct MetricConfig {
  double k_deg = 5;
  double k_cm = 5;
  double add_frac = 0.1;    // of the model diameter
  double proj2d_px = 5;
  double auc_max_mm = 100;  // ADD/ADD-S AUC integration ceiling
  int segment_len = 15;

  void validate() const {
    check(k_deg > 0 && k_cm > 0 && add_frac > 0 && proj2d_px > 0 &&
              auc_max_mm > 0 && segment_len >= 2,
          "MetricConfig: all thresholds must be positive");
  }
};

struct FrameMetrics {
  double rot_deg = 0;
  double trans_mm = 0;
  double add_mm = 0;
  double add_s_mm = 0;
  double proj2d_px = 0;
  // error rotation decomposed per axis for drift plots; at gimbal lock one
  // valid decomposition is picked
  std::array<double, 3> rot_axis_deg{0, 0, 0};
  std::array<double, 3> trans_axis_mm{0, 0, 0};
  bool correct_pose = false;   // (k deg, k cm)
  bool correct_add = false;    // ADD <= frac * diameter
  bool correct_proj2d = false; // Proj2D <= px threshold
};

struct MetricReport {
  MetricConfig config;
  double diameter_mm = 0;
  std::vector<FrameMetrics> frames;
  double mean_rot_deg = 0;
  double mean_trans_mm = 0;
  double mean_add_mm = 0;
  double mean_add_s_mm = 0;
  double mean_proj2d_px = 0;
  double frac_correct_pose = 0;
  double frac_correct_add = 0;
  double frac_correct_proj2d = 0;
  double auc_add = 0;
  double auc_add_s = 0;
  std::vector<SegmentError> segments;
  SegmentSummary segment_summary;
};

inline MetricReport evaluate_trajectory(const std::vector<Pose>& pred,
                                        const std::vector<Pose>& gt,
                                        const PointSet& points,
                                        const CameraIntrinsics& k,
                                        const MetricConfig& cfg = {}) {
  cfg.validate();
  if (pred.size() != gt.size())
    throw DomainError(
        "evaluate_trajectory: trajectory/ground-truth length mismatch");
  check(!pred.empty(), "evaluate_trajectory: empty trajectory");
  check_points(points, "evaluate_trajectory");

  MetricReport r;
  r.config = cfg;
  r.diameter_mm = diameter(points);
  r.frames.reserve(pred.size());
  std::vector<double> adds, add_ss;
  adds.reserve(pred.size());
  add_ss.reserve(pred.size());
  for (std::size_t i = 0; i < pred.size(); ++i) {
    FrameMetrics f;
    f.rot_deg = rotation_error_deg(pred[i], gt[i]);
    f.trans_mm = translation_error_mm(pred[i], gt[i]);
    f.add_mm = add(pred[i], gt[i], points);
    f.add_s_mm = add_s(pred[i], gt[i], points);
    f.proj2d_px = proj2d(pred[i], gt[i], points, k);
    const Eigen::Vector3d e =
        matrix_to_euler_xyz_any(pred[i].R * gt[i].R.transpose());
    for (int a = 0; a < 3; ++a) {
      f.rot_axis_deg[std::size_t(a)] = rad2deg(e[a]);
      f.trans_axis_mm[std::size_t(a)] = pred[i].T[a] - gt[i].T[a];
    }
    f.correct_pose = pose_correct_k_deg_k_cm(pred[i], gt[i], cfg.k_deg,
                                             cfg.k_cm);
    f.correct_add = f.add_mm <= cfg.add_frac * r.diameter_mm;
    f.correct_proj2d = f.proj2d_px <= cfg.proj2d_px;

    r.mean_rot_deg += f.rot_deg;
    r.mean_trans_mm += f.trans_mm;
    r.mean_add_mm += f.add_mm;
    r.mean_add_s_mm += f.add_s_mm;
    r.mean_proj2d_px += f.proj2d_px;
    r.frac_correct_pose += f.correct_pose ? 1 : 0;
    r.frac_correct_add += f.correct_add ? 1 : 0;
    r.frac_correct_proj2d += f.correct_proj2d ? 1 : 0;
    adds.push_back(f.add_mm);
    add_ss.push_back(f.add_s_mm);
    r.frames.push_back(f);
  }
  const double n = double(pred.size());
  r.mean_rot_deg /= n;
  r.mean_trans_mm /= n;
  r.mean_add_mm /= n;
  r.mean_add_s_mm /= n;
  r.mean_proj2d_px /= n;
  r.frac_correct_pose /= n;
  r.frac_correct_add /= n;
  r.frac_correct_proj2d /= n;
  r.auc_add = auc(adds, cfg.auc_max_mm);
  r.auc_add_s = auc(add_ss, cfg.auc_max_mm);
  if (int(pred.size()) >= cfg.segment_len)
    r.segments = segment_errors(pred, gt, cfg.segment_len);
  r.segment_summary = summarize_segments(r.segments);
  return r;
}

}  // namespace track6d
