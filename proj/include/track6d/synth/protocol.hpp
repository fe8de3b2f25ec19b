#pragma once

#include <utility>
#include <vector>

#include "track6d/geometry/pose.hpp"
#include "track6d/geometry/rotation.hpp"
#include "track6d/rng.hpp"

namespace track6d {

// Per-axis rotation perturbation applied in camera frame, composed as
// R_new = Rx(bx) Ry(by) Rz(bz) R_old.
inline Eigen::Matrix3d perturbation_matrix(double bx, double by, double bz) {
  return rot_x(bx) * rot_y(by) * rot_z(bz);
}

// Model-pair protocol: reference pose at T = (0,0,500) mm with uniform
// rotation; second pose perturbed per axis by beta ~ N(0, 15deg^2) and
// translated by (N(0,10^2), N(0,10^2), N(0,50^2)) mm. The rotation is
// rejection-resampled until the composed perturbation angle is below 45 deg.
inline std::pair<Pose, Pose> sample_modelnet_pair(Rng& rng) {
  constexpr double kBetaSigma = 15.0;  // deg
  constexpr double kMaxAngle = 45.0;   // deg
  Pose first(random_rotation(rng), Eigen::Vector3d(0, 0, 500));

  Eigen::Matrix3d pert;
  int tries = 0;
  do {
    if (++tries > 1000)
      throw Error("sample_modelnet_pair: rotation rejection cap exceeded");
    pert = perturbation_matrix(rng.normal(0, deg2rad(kBetaSigma)),
                               rng.normal(0, deg2rad(kBetaSigma)),
                               rng.normal(0, deg2rad(kBetaSigma)));
  } while (rotation_angle(pert) >= deg2rad(kMaxAngle));

  Eigen::Vector3d delta;
  int z_tries = 0;
  do {
    if (++z_tries > 1000)
      throw Error("sample_modelnet_pair: depth resample cap exceeded");
    delta = {rng.normal(0, 10.0), rng.normal(0, 10.0), rng.normal(0, 50.0)};
  } while (first.T.z() + delta.z() <= 0);

  Pose second(pert * first.R, first.T + delta);
  return {first, second};
}

// Video protocol: first pose at T = (0,0,Z), Z ~ U[400, 2000] mm, uniform
// rotation; each subsequent frame perturbs the previous pose by
// beta ~ N(0, 20deg^2) per axis and delta ~ N(0, 20^2) mm per axis.
// Steps that would put the object behind the camera are re-sampled.
inline std::vector<Pose> sample_shapenet_video(Rng& rng, int length) {
  check(length >= 2, "sample_shapenet_video: length must be >= 2");
  constexpr double kBetaSigma = 20.0;   // deg
  constexpr double kTransSigma = 20.0;  // mm
  std::vector<Pose> poses;
  poses.reserve(length);
  poses.emplace_back(random_rotation(rng),
                     Eigen::Vector3d(0, 0, rng.uniform(400.0, 2000.0)));
  for (int t = 1; t < length; ++t) {
    const Eigen::Matrix3d pert =
        perturbation_matrix(rng.normal(0, deg2rad(kBetaSigma)),
                            rng.normal(0, deg2rad(kBetaSigma)),
                            rng.normal(0, deg2rad(kBetaSigma)));
    Eigen::Vector3d delta;
    int tries = 0;
    do {
      if (++tries > 1000)
        throw Error("sample_shapenet_video: depth resample cap exceeded");
      delta = {rng.normal(0, kTransSigma), rng.normal(0, kTransSigma),
               rng.normal(0, kTransSigma)};
    } while (poses.back().T.z() + delta.z() <= 0);
    poses.emplace_back(pert * poses.back().R, poses.back().T + delta);
  }
  return poses;
}

}  // namespace track6d
