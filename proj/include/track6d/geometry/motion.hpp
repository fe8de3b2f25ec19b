#pragma once

#include <Eigen/Core>

#include "track6d/geometry/camera.hpp"
#include "track6d/geometry/crop.hpp"
#include "track6d/geometry/pose.hpp"
#include "track6d/geometry/rotation.hpp"

namespace track6d {

// Image-plane motion of the projected object center between two frames, in
// original-image pixels, plus the normalized depth offset S = Z_t/Z_{t-1} - 1.
// S > -1 iff the new depth is positive.
struct PixelMotion {
  double dU = 0, dV = 0, S = 0;
};

// Crop-normalized translation code: du = dU / (alpha_u * input_w),
// dv = dV / (alpha_v * input_h), s = 2 S / (alpha_u + alpha_v).
struct TranslationCode {
  double du = 0, dv = 0, s = 0;
};

// Full relative-motion code regressed by the networks: translation code plus
// the relative rotation as an axis-angle vector with |omega| < pi.
struct MotionCode {
  double du = 0, dv = 0, s = 0;
  Eigen::Vector3d omega = Eigen::Vector3d::Zero();

  TranslationCode translation() const { return {du, dv, s}; }
};

inline PixelMotion pixel_motion(const CameraIntrinsics& k, const Pose& prev,
                                const Pose& cur) {
  const Projection a = project(k, prev.T);
  const Projection b = project(k, cur.T);
  return {b.u - a.u, b.v - a.v, b.z / a.z - 1.0};
}

inline TranslationCode encode_translation(const CameraIntrinsics& k,
                                          const Pose& prev, const Pose& cur,
                                          const CropSpec& crop) {
  check(crop.box.valid() && crop.input_w >= 1 && crop.input_h >= 1,
        "encode_translation: degenerate crop");
  const PixelMotion m = pixel_motion(k, prev, cur);
  return {m.dU / (crop.alpha_u * crop.input_w),
          m.dV / (crop.alpha_v * crop.input_h),
          2.0 * m.S / (crop.alpha_u + crop.alpha_v)};
}

// Decoded center/depth update plus the camera-frame translation delta.
struct DecodedTranslation {
  Eigen::Vector3d delta_t = Eigen::Vector3d::Zero();
  double u = 0, v = 0, z = 0;
};

// Exact inverse of encode_translation given the previous center and depth.
// The object-center track (U, V, Z) is the tracker's state; delta_t comes
// from backprojecting both centers.
inline DecodedTranslation decode_translation(const CameraIntrinsics& k,
                                             double u_prev, double v_prev,
                                             double z_prev,
                                             const TranslationCode& code,
                                             const CropSpec& crop) {
  check(z_prev > 0, "decode_translation: non-positive previous depth");
  check(crop.box.valid() && crop.input_w >= 1 && crop.input_h >= 1,
        "decode_translation: degenerate crop");
  const double u = u_prev + code.du * crop.alpha_u * crop.input_w;
  const double v = v_prev + code.dv * crop.alpha_v * crop.input_h;
  const double s_big = code.s * (crop.alpha_u + crop.alpha_v) / 2.0;
  const double z = z_prev * (1.0 + s_big);
  check(z > 0, "decode_translation: decoded depth is non-positive");
  const Eigen::Vector3d t_prev = backproject(k, u_prev, v_prev, z_prev);
  const Eigen::Vector3d t_cur = backproject(k, u, v, z);
  return {t_cur - t_prev, u, v, z};
}

// Ground-truth code for a consecutive pose pair under a given crop; what the
// networks are trained to predict.
inline MotionCode encode_motion(const CameraIntrinsics& k, const Pose& prev,
                                const Pose& cur, const CropSpec& crop) {
  const TranslationCode t = encode_translation(k, prev, cur, crop);
  MotionCode code;
  code.du = t.du;
  code.dv = t.dv;
  code.s = t.s;
  code.omega = matrix_to_axis_angle(relative_rotation(prev.R, cur.R));
  return code;
}

}  // namespace track6d
