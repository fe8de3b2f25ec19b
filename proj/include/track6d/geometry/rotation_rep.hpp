#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <cmath>

#include "track6d/geometry/rotation.hpp"

namespace track6d {

enum class RotationTag { axis_angle, quaternion, euler_xyz, sixd };

inline const char* to_string(RotationTag t) {
  switch (t) {
    case RotationTag::axis_angle: return "axis_angle";
    case RotationTag::quaternion: return "quaternion";
    case RotationTag::euler_xyz: return "euler_xyz";
    case RotationTag::sixd: return "sixd";
  }
  return "?";
}

// Tagged rotation parameters. Sizes: axis_angle 3, quaternion 4 (w, x, y, z),
// euler_xyz 3, sixd 6 (first two matrix columns, column-major).
struct RotationRep {
  RotationTag tag = RotationTag::axis_angle;
  Eigen::Matrix<double, 6, 1> v = Eigen::Matrix<double, 6, 1>::Zero();
  int dim = 3;

  static int dim_of(RotationTag t) {
    switch (t) {
      case RotationTag::quaternion: return 4;
      case RotationTag::sixd: return 6;
      default: return 3;
    }
  }

  static RotationRep make(RotationTag t, const Eigen::VectorXd& values) {
    check(values.size() == dim_of(t), "RotationRep: wrong parameter count");
    RotationRep r;
    r.tag = t;
    r.dim = int(values.size());
    r.v.head(r.dim) = values;
    return r;
  }
};

namespace detail {

// Quaternion canonical form: w >= 0; if w == 0 the first nonzero component
// is made positive, so q and -q collapse to one representative.
inline Eigen::Vector4d canonical_quaternion(double w, double x, double y,
                                            double z) {
  Eigen::Vector4d q(w, x, y, z);
  const double n = q.norm();
  check(n > 1e-12, "quaternion: zero norm");
  q /= n;
  for (int i = 0; i < 4; ++i) {
    if (q[i] > 0) break;
    if (q[i] < 0) {
      q = -q;
      break;
    }
  }
  return q;
}

}  // namespace detail

// Euler convention used everywhere in this library: R = Rx(a) Ry(b) Rz(c),
// the same order the synthetic-pose perturbations compose in.
inline Eigen::Matrix3d euler_xyz_to_matrix(double a, double b, double c) {
  return rot_x(a) * rot_y(b) * rot_z(c);
}

// Inverse of euler_xyz_to_matrix with b in [-pi/2, pi/2]. Throws
// GimbalLockError when |cos b| < lock_tol and the (a, c) split is undefined.
inline Eigen::Vector3d matrix_to_euler_xyz(const Eigen::Matrix3d& r,
                                           double lock_tol = 1e-3) {
  check_rotation(r, "matrix_to_euler_xyz");
  const double sb = std::clamp(r(0, 2), -1.0, 1.0);
  const double cb = std::sqrt(std::max(0.0, 1.0 - sb * sb));
  if (cb < lock_tol)
    throw GimbalLockError("matrix_to_euler_xyz: pitch at gimbal lock");
  const double b = std::asin(sb);
  const double a = std::atan2(-r(1, 2), r(2, 2));
  const double c = std::atan2(-r(0, 1), r(0, 0));
  return {a, b, c};
}

// Non-throwing variant for error reporting; at lock it pins a = 0 and returns
// one member of the solution family.
inline Eigen::Vector3d matrix_to_euler_xyz_any(const Eigen::Matrix3d& r) {
  const double sb = std::clamp(r(0, 2), -1.0, 1.0);
  const double cb = std::sqrt(std::max(0.0, 1.0 - sb * sb));
  if (cb < 1e-9) {
    const double b = sb > 0 ? kPi / 2 : -kPi / 2;
    return {0.0, b, std::atan2(r(1, 0), r(1, 1))};
  }
  return {std::atan2(-r(1, 2), r(2, 2)), std::asin(sb),
          std::atan2(-r(0, 1), r(0, 0))};
}

inline Eigen::Matrix3d rep_to_matrix(const RotationRep& rep) {
  switch (rep.tag) {
    case RotationTag::axis_angle:
      return axis_angle_to_matrix(rep.v.head<3>());
    case RotationTag::quaternion: {
      const Eigen::Vector4d q =
          detail::canonical_quaternion(rep.v[0], rep.v[1], rep.v[2], rep.v[3]);
      return Eigen::Quaterniond(q[0], q[1], q[2], q[3]).toRotationMatrix();
    }
    case RotationTag::euler_xyz:
      return euler_xyz_to_matrix(rep.v[0], rep.v[1], rep.v[2]);
    case RotationTag::sixd: {
      const Eigen::Vector3d v1 = rep.v.head<3>();
      const Eigen::Vector3d v2 = rep.v.segment<3>(3);
      check(v1.norm() > 1e-9, "sixd: first column has near-zero norm");
      const Eigen::Vector3d b1 = v1.normalized();
      Eigen::Vector3d u2 = v2 - b1.dot(v2) * b1;
      check(u2.norm() > 1e-9, "sixd: columns are near collinear");
      const Eigen::Vector3d b2 = u2.normalized();
      Eigen::Matrix3d r;
      r.col(0) = b1;
      r.col(1) = b2;
      r.col(2) = b1.cross(b2);
      return r;
    }
  }
  throw DomainError("rep_to_matrix: unknown tag");
}

inline RotationRep matrix_to_rep(const Eigen::Matrix3d& r, RotationTag tag) {
  check_rotation(r, "matrix_to_rep");
  RotationRep rep;
  rep.tag = tag;
  rep.dim = RotationRep::dim_of(tag);
  switch (tag) {
    case RotationTag::axis_angle:
      rep.v.head<3>() = matrix_to_axis_angle(r);
      break;
    case RotationTag::quaternion: {
      const Eigen::Quaterniond q(r);
      rep.v.head<4>() = detail::canonical_quaternion(q.w(), q.x(), q.y(), q.z());
      break;
    }
    case RotationTag::euler_xyz:
      rep.v.head<3>() = matrix_to_euler_xyz(r);
      break;
    case RotationTag::sixd:
      rep.v.head<3>() = r.col(0);
      rep.v.segment<3>(3) = r.col(1);
      break;
  }
  return rep;
}

inline RotationRep rotation_convert(const RotationRep& rep, RotationTag to) {
  return matrix_to_rep(rep_to_matrix(rep), to);
}

}  // namespace track6d
