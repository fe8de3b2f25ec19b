#pragma once

#include <Eigen/Core>
#include <cmath>
#include <vector>

#include "track6d/common.hpp"
#include "track6d/geometry/motion.hpp"
#include "track6d/nn/param.hpp"

namespace track6d {

// smooth-L1: quadratic inside the unit interval, linear outside.
inline double smooth_l1(double x) {
  const double a = std::abs(x);
  return a < 1.0 ? 0.5 * x * x : a - 0.5;
}

inline double smooth_l1_grad(double x) {
  return x < -1.0 ? -1.0 : (x > 1.0 ? 1.0 : x);
}

// l1s(du) + l1s(dv) + lambda * l1s(s)
inline double loss_translation(const TranslationCode& pred,
                               const TranslationCode& target, double lambda) {
  check(lambda > 0, "loss_translation: lambda must be positive");
  return smooth_l1(pred.du - target.du) + smooth_l1(pred.dv - target.dv) +
         lambda * smooth_l1(pred.s - target.s);
}

inline Eigen::Vector3d loss_translation_grad(const TranslationCode& pred,
                                             const TranslationCode& target,
                                             double lambda) {
  return {smooth_l1_grad(pred.du - target.du),
          smooth_l1_grad(pred.dv - target.dv),
          lambda * smooth_l1_grad(pred.s - target.s)};
}

// squared Euclidean distance between axis-angle vectors
inline double loss_rotation(const Eigen::Vector3d& omega,
                            const Eigen::Vector3d& omega_star) {
  return (omega - omega_star).squaredNorm();
}

inline Eigen::Vector3d loss_rotation_grad(const Eigen::Vector3d& omega,
                                          const Eigen::Vector3d& omega_star) {
  return 2.0 * (omega - omega_star);
}

// Mean combined loss over a batch plus the gradients the model backward
// consumes. rot/trans are (B,3); trans columns are (du, dv, s).
template <typename S>
struct BatchLoss {
  double value = 0;
  Mat<S> g_rot;
  Mat<S> g_trans;
};

template <typename S>
inline BatchLoss<S> batch_loss(const Mat<S>& rot, const Mat<S>& trans,
                               const std::vector<MotionCode>& targets,
                               double lambda) {
  const Eigen::Index b = rot.rows();
  check(b > 0 && trans.rows() == b && rot.cols() == 3 && trans.cols() == 3,
        "batch_loss: bad prediction shape");
  check(Eigen::Index(targets.size()) == b, "batch_loss: target count mismatch");
  BatchLoss<S> out;
  out.g_rot = Mat<S>::Zero(b, 3);
  out.g_trans = Mat<S>::Zero(b, 3);
  const double inv_b = 1.0 / double(b);
  for (Eigen::Index i = 0; i < b; ++i) {
    const MotionCode& t = targets[std::size_t(i)];
    const TranslationCode pred_t{double(trans(i, 0)), double(trans(i, 1)),
                                 double(trans(i, 2))};
    const Eigen::Vector3d pred_r(double(rot(i, 0)), double(rot(i, 1)),
                                 double(rot(i, 2)));
    out.value += inv_b * (loss_translation(pred_t, t.translation(), lambda) +
                          loss_rotation(pred_r, t.omega));
    const Eigen::Vector3d gt =
        inv_b * loss_translation_grad(pred_t, t.translation(), lambda);
    const Eigen::Vector3d gr = inv_b * loss_rotation_grad(pred_r, t.omega);
    for (int c = 0; c < 3; ++c) {
      out.g_trans(i, c) = S(gt[c]);
      out.g_rot(i, c) = S(gr[c]);
    }
  }
  return out;
}

}  // namespace track6d
