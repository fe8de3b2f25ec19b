#pragma once

#include <Eigen/Core>

#include "track6d/geometry/rotation.hpp"

namespace track6d {

// Rigid transform of the object in the camera frame: x_cam = R x_obj + T.
// T is in millimeters.
struct Pose {
  Eigen::Matrix3d R = Eigen::Matrix3d::Identity();
  Eigen::Vector3d T = Eigen::Vector3d::Zero();

  Pose() = default;
  Pose(const Eigen::Matrix3d& r, const Eigen::Vector3d& t) : R(r), T(t) {}

  void validate(double tol = 1e-6) const { check_rotation(R, "Pose", tol); }

  Eigen::Vector3d apply(const Eigen::Vector3d& p) const { return R * p + T; }
};

}  // namespace track6d
