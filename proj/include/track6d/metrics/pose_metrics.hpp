#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "track6d/geometry/camera.hpp"
#include "track6d/geometry/pose.hpp"
#include "track6d/geometry/rotation.hpp"

namespace track6d {

// Object-frame sample points (mm) all distance metrics average over. For
// synthetic objects this is SceneObject.points.
using PointSet = std::vector<Eigen::Vector3d>;

inline void check_points(const PointSet& points, const char* where) {
  if (points.size() < 2)
    throw DomainError(std::string(where) + ": need at least 2 model points");
}

// Largest pairwise distance; the "d" of the relative ADD threshold.
inline double diameter(const PointSet& points) {
  check_points(points, "diameter");
  double best = 0;
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j)
      best = std::max(best, (points[i] - points[j]).norm());
  return best;
}

inline double rotation_error_deg(const Pose& pred, const Pose& gt) {
  return rad2deg(geodesic_angle(pred.R, gt.R));
}

inline double translation_error_mm(const Pose& pred, const Pose& gt) {
  return (pred.T - gt.T).norm();
}

// Correct iff the geodesic rotation error is within k_deg degrees AND the
// translation error is within k_cm centimeters.
inline bool pose_correct_k_deg_k_cm(const Pose& pred, const Pose& gt,
                                    double k_deg, double k_cm) {
  check(k_deg > 0 && k_cm > 0, "pose_correct: thresholds must be positive");
  return rotation_error_deg(pred, gt) <= k_deg &&
         translation_error_mm(pred, gt) <= 10.0 * k_cm;
}

// Mean distance between paired transformed model points.
inline double add(const Pose& pred, const Pose& gt, const PointSet& points) {
  check_points(points, "add");
  double sum = 0;
  for (const Eigen::Vector3d& p : points)
    sum += (pred.apply(p) - gt.apply(p)).norm();
  return sum / double(points.size());
}

// Symmetric variant: each ground-truth-transformed point matches its nearest
// predicted-transformed point. Exact nearest neighbor by brute force; model
// point sets stay small here.
inline double add_s(const Pose& pred, const Pose& gt, const PointSet& points) {
  check_points(points, "add_s");
  std::vector<Eigen::Vector3d> tp;
  tp.reserve(points.size());
  for (const Eigen::Vector3d& p : points) tp.push_back(pred.apply(p));
  double sum = 0;
  for (const Eigen::Vector3d& p : points) {
    const Eigen::Vector3d g = gt.apply(p);
    double best = std::numeric_limits<double>::infinity();
    for (const Eigen::Vector3d& q : tp) best = std::min(best, (g - q).norm());
    sum += best;
  }
  return sum / double(points.size());
}

// Mean pixel distance between the projections of paired transformed model
// points. Points behind either camera-frame pose are a domain error (the
// projection itself throws).
inline double proj2d(const Pose& pred, const Pose& gt, const PointSet& points,
                     const CameraIntrinsics& k) {
  check_points(points, "proj2d");
  double sum = 0;
  for (const Eigen::Vector3d& p : points) {
    const Projection a = project(k, pred.apply(p));
    const Projection b = project(k, gt.apply(p));
    sum += std::hypot(a.u - b.u, a.v - b.v);
  }
  return sum / double(points.size());
}

// Relative-threshold ADD correctness: ADD within frac of the model diameter.
inline bool add_correct_rel(const Pose& pred, const Pose& gt,
                            const PointSet& points, double frac = 0.1) {
  check(frac > 0, "add_correct_rel: threshold fraction must be positive");
  return add(pred, gt, points) <= frac * diameter(points);
}

}  // namespace track6d
