#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <algorithm>
#include <cmath>

#include "track6d/common.hpp"
#include "track6d/rng.hpp"

namespace track6d {

// Orthonormality + determinant check, default tolerance 1e-6.
inline bool is_rotation(const Eigen::Matrix3d& r, double tol = 1e-6) {
  const double ortho = (r * r.transpose() - Eigen::Matrix3d::Identity())
                           .cwiseAbs()
                           .maxCoeff();
  return ortho <= tol && std::abs(r.determinant() - 1.0) <= tol;
}

inline void check_rotation(const Eigen::Matrix3d& r, const char* where,
                           double tol = 1e-6) {
  if (!is_rotation(r, tol))
    throw DomainError(std::string(where) + ": matrix is not a rotation");
}

// Rodrigues' formula. The axis-angle domain is the open ball |omega| < pi,
// which keeps the representation unique and the inverse well defined.
inline Eigen::Matrix3d axis_angle_to_matrix(const Eigen::Vector3d& omega) {
  const double theta = omega.norm();
  check(theta < kPi, "axis_angle_to_matrix: |omega| must be < pi");
  Eigen::Matrix3d k;
  k << 0, -omega.z(), omega.y(), omega.z(), 0, -omega.x(), -omega.y(),
      omega.x(), 0;
  // sin(t)/t and (1-cos(t))/t^2 via series below sqrt(eps) to avoid 0/0
  double a, b;
  if (theta < 1e-8) {
    const double t2 = theta * theta;
    a = 1.0 - t2 / 6.0;
    b = 0.5 - t2 / 24.0;
  } else {
    a = std::sin(theta) / theta;
    b = (1.0 - std::cos(theta)) / (theta * theta);
  }
  return Eigen::Matrix3d::Identity() + a * k + b * (k * k);
}

// Log map back to the open ball. Near the identity the angle comes from the
// trace and the axis from the antisymmetric part; within ambiguity_tol of pi
// the sign of the axis is numerically unrecoverable and we refuse.
inline Eigen::Vector3d matrix_to_axis_angle(const Eigen::Matrix3d& r,
                                            double ambiguity_tol = 1e-6) {
  check_rotation(r, "matrix_to_axis_angle");
  const double tr = std::clamp((r.trace() - 1.0) / 2.0, -1.0, 1.0);
  const double theta = std::acos(tr);
  if (theta >= kPi - ambiguity_tol)
    throw AmbiguityError("matrix_to_axis_angle: angle within tolerance of pi");
  Eigen::Vector3d w(r(2, 1) - r(1, 2), r(0, 2) - r(2, 0), r(1, 0) - r(0, 1));
  if (theta < 1e-8) {
    // w = 2 sin(theta) * axis; sin(theta)/theta ~ 1 - theta^2/6
    return 0.5 * (1.0 + theta * theta / 6.0) * w;
  }
  return (theta / (2.0 * std::sin(theta))) * w;
}

// Relative rotation taking frame t-1 to frame t: dR = R_t * R_{t-1}^T.
inline Eigen::Matrix3d relative_rotation(const Eigen::Matrix3d& r_prev,
                                         const Eigen::Matrix3d& r_cur) {
  check_rotation(r_prev, "relative_rotation");
  check_rotation(r_cur, "relative_rotation");
  return r_cur * r_prev.transpose();
}

// Geodesic distance on SO(3) in radians; the trace argument is clamped so
// rounding cannot push acos out of domain.
inline double geodesic_angle(const Eigen::Matrix3d& ra,
                             const Eigen::Matrix3d& rb) {
  const Eigen::Matrix3d d = ra * rb.transpose();
  return std::acos(std::clamp((d.trace() - 1.0) / 2.0, -1.0, 1.0));
}

inline double rotation_angle(const Eigen::Matrix3d& r) {
  return std::acos(std::clamp((r.trace() - 1.0) / 2.0, -1.0, 1.0));
}

// Haar-uniform rotation from four iid normals normalized to a unit quaternion.
inline Eigen::Matrix3d random_rotation(Rng& rng) {
  Eigen::Quaterniond q(rng.normal(), rng.normal(), rng.normal(), rng.normal());
  while (q.norm() < 1e-12)
    q = Eigen::Quaterniond(rng.normal(), rng.normal(), rng.normal(),
                           rng.normal());
  q.normalize();
  return q.toRotationMatrix();
}

inline Eigen::Matrix3d rot_x(double a) {
  Eigen::Matrix3d r;
  const double c = std::cos(a), s = std::sin(a);
  r << 1, 0, 0, 0, c, -s, 0, s, c;
  return r;
}

inline Eigen::Matrix3d rot_y(double a) {
  Eigen::Matrix3d r;
  const double c = std::cos(a), s = std::sin(a);
  r << c, 0, s, 0, 1, 0, -s, 0, c;
  return r;
}

inline Eigen::Matrix3d rot_z(double a) {
  Eigen::Matrix3d r;
  const double c = std::cos(a), s = std::sin(a);
  r << c, -s, 0, s, c, 0, 0, 0, 1;
  return r;
}

}  // namespace track6d
