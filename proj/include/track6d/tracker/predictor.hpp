#pragma once

#include <memory>
#include <utility>
#include <vector>

#include "track6d/geometry/motion.hpp"
#include "track6d/image.hpp"
#include "track6d/rng.hpp"

namespace track6d {

// Relative-motion source for one window of prepared crops. frame_index is
// the sequence index of the window's last frame; oracles use it to look up
// ground truth, learned predictors ignore it.
class Predictor {
 public:
  virtual ~Predictor() = default;
  virtual int window() const = 0;
  virtual MotionCode predict(const std::vector<ImageF32>& crops,
                             const CropSpec& crop, int frame_index) = 0;
};

// Ground-truth codes straight from a pose list, encoded in the caller's crop
// parameterization. Closes the loop with the decoder exactly.
class OraclePredictor : public Predictor {
 public:
  OraclePredictor(const CameraIntrinsics& k, std::vector<Pose> gt_poses,
                  int window = 2)
      : k_(k), gt_(std::move(gt_poses)), window_(window) {
    check(window_ >= 2, "OraclePredictor: window must be >= 2");
    check(gt_.size() >= 2, "OraclePredictor: need at least 2 poses");
  }

  int window() const override { return window_; }

  MotionCode predict(const std::vector<ImageF32>&, const CropSpec& crop,
                     int frame_index) override {
    check(frame_index >= 1 && frame_index < int(gt_.size()),
          "OraclePredictor: frame index out of range");
    return encode_motion(k_, gt_[std::size_t(frame_index) - 1],
                         gt_[std::size_t(frame_index)], crop);
  }

 private:
  CameraIntrinsics k_;
  std::vector<Pose> gt_;
  int window_;
};

// Predicts zero motion; the chained pose never moves.
class ZeroPredictor : public Predictor {
 public:
  explicit ZeroPredictor(int window = 2) : window_(window) {
    check(window_ >= 2, "ZeroPredictor: window must be >= 2");
  }
  int window() const override { return window_; }
  MotionCode predict(const std::vector<ImageF32>&, const CropSpec&,
                     int) override {
    return {};
  }

 private:
  int window_;
};

// Adds iid Gaussian noise to another predictor's codes. The per-call rng is
// derived from (seed, frame_index) so results do not depend on call order.
class NoisyPredictor : public Predictor {
 public:
  NoisyPredictor(std::shared_ptr<Predictor> inner, double sigma_code,
                 double sigma_omega, std::uint64_t seed)
      : inner_(std::move(inner)),
        sigma_code_(sigma_code),
        sigma_omega_(sigma_omega),
        seed_(seed) {
    check(sigma_code_ >= 0 && sigma_omega_ >= 0,
          "NoisyPredictor: negative sigma");
  }

  int window() const override { return inner_->window(); }

  MotionCode predict(const std::vector<ImageF32>& crops, const CropSpec& crop,
                     int frame_index) override {
    MotionCode c = inner_->predict(crops, crop, frame_index);
    Rng rng = Rng::child(seed_, std::uint64_t(frame_index));
    c.du += rng.normal(0.0, sigma_code_);
    c.dv += rng.normal(0.0, sigma_code_);
    c.s += rng.normal(0.0, sigma_code_);
    c.omega.x() += rng.normal(0.0, sigma_omega_);
    c.omega.y() += rng.normal(0.0, sigma_omega_);
    c.omega.z() += rng.normal(0.0, sigma_omega_);
    return c;
  }

 private:
  std::shared_ptr<Predictor> inner_;
  double sigma_code_, sigma_omega_;
  std::uint64_t seed_;
};

}  // namespace track6d
