#pragma once

#include <Eigen/Core>

#include "track6d/common.hpp"

namespace track6d {

// Pinhole intrinsics. Pixel coordinates are continuous; (cx, cy) is where the
// optical axis meets the image plane.
struct CameraIntrinsics {
  double fx = 0, fy = 0, cx = 0, cy = 0;

  CameraIntrinsics() = default;
  CameraIntrinsics(double fx, double fy, double cx, double cy)
      : fx(fx), fy(fy), cx(cx), cy(cy) {}

  void validate() const {
    check(fx > 0 && fy > 0, "CameraIntrinsics: focal lengths must be > 0");
  }

  Eigen::Matrix3d matrix() const {
    Eigen::Matrix3d k;
    k << fx, 0, cx, 0, fy, cy, 0, 0, 1;
    return k;
  }
};

// Pixel position and camera-frame depth of a projected point.
struct Projection {
  double u = 0, v = 0, z = 0;
};

// Projects a camera-frame point. The point must be strictly in front of the
// camera; depth is preserved, not renormalized.
inline Projection project(const CameraIntrinsics& k, const Eigen::Vector3d& p) {
  k.validate();
  check(p.z() > 0, "project: point must have z > 0");
  return {k.fx * p.x() / p.z() + k.cx, k.fy * p.y() / p.z() + k.cy, p.z()};
}

// Inverse of project: pixel (u, v) at depth z back to the camera frame,
// p = z * K^-1 (u, v, 1)^T.
inline Eigen::Vector3d backproject(const CameraIntrinsics& k, double u,
                                   double v, double z) {
  k.validate();
  check(z > 0, "backproject: depth must be > 0");
  return {z * (u - k.cx) / k.fx, z * (v - k.cy) / k.fy, z};
}

}  // namespace track6d
