#pragma once

#include <utility>
#include <vector>

#include "track6d/geometry/motion.hpp"
#include "track6d/segmask/pipeline.hpp"
#include "track6d/tracker/predictor.hpp"

namespace track6d {

// Everything the tracker is told about frame 0: the object's projected
// center (U1, V1), a 2D box seeding the segmentation, and the gauge choices.
// Z0 is an arbitrary positive value and R0 an arbitrary rotation; the
// recovered trajectory is defined up to exactly these two choices.
struct TrackerInit {
  double u0 = 0, v0 = 0;
  BBox box0;
  Eigen::Matrix3d R0 = Eigen::Matrix3d::Identity();
  double z0 = 1000.0;

  void validate() const {
    check(z0 > 0, "TrackerInit: Z0 must be positive");
    check(box0.valid(), "TrackerInit: degenerate initial box");
    check_rotation(R0, "TrackerInit");
    check(std::isfinite(u0) && std::isfinite(v0),
          "TrackerInit: non-finite center");
  }
};

// One trajectory entry. code is zero on frame 0 and on ground-truth reset
// frames; crop is the window crop the code was expressed in (frame 0 uses
// the initial box alone).
struct TrackedFrame {
  Pose pose;
  double u = 0, v = 0, z = 0;
  MotionCode code;
  CropSpec crop;
};

struct Trajectory {
  std::vector<TrackedFrame> frames;

  std::vector<Pose> poses() const {
    std::vector<Pose> out;
    out.reserve(frames.size());
    for (const TrackedFrame& f : frames) out.push_back(f.pose);
    return out;
  }

  void validate() const {
    for (const TrackedFrame& f : frames) {
      check(f.z > 0, "Trajectory: non-positive depth");
      check_rotation(f.pose.R, "Trajectory");
    }
  }
};

// Ground truth handed back to the tracker on periodic resets: camera-frame
// poses plus matching 2D boxes (typically from ground-truth masks).
struct ReinitSource {
  std::vector<Pose> poses;
  std::vector<BBox> boxes;
};

struct TrackerConfig {
  CameraIntrinsics intrinsics;
  int input_size = 96;
  SegmaskConfig segmask;
  int reinit_every = 0;  // 0 = never; 15 matches the fixed-interval protocol

  void validate() const {
    intrinsics.validate();
    segmask.validate();
    check(input_size >= 8, "TrackerConfig: input_size too small");
    check(reinit_every >= 0, "TrackerConfig: negative reinit interval");
  }
};

// Chains predicted relative motions into a 6-DoF trajectory. The state holds
// the raw frames of the current window (not embeddings) so masks, boxes, and
// crops are recomputed per window with a shared crop box. Single-threaded;
// run one instance per sequence.
class Tracker {
 public:
  Tracker(const TrackerConfig& cfg, const TrackerInit& init,
          const ImageU8& frame0, Predictor& predictor, FlowProvider& flow,
          MaskRefiner& refiner)
      : cfg_(cfg), pred_(&predictor), flow_(&flow), refiner_(&refiner) {
    cfg_.validate();
    init.validate();
    Mask m0 = refiner.refine(frame0, init.box0, 0);
    if (m0.count() < cfg_.segmask.min_mask_px)
      throw TrackingLostError(0, "initial mask below minimum size");
    frames_ = {frame0};
    masks_.push_back(std::move(m0));
    boxes_ = {init.box0};
    cur_.u = init.u0;
    cur_.v = init.v0;
    cur_.z = init.z0;
    cur_.pose = Pose(init.R0,
                     backproject(cfg_.intrinsics, init.u0, init.v0, init.z0));
    cur_.crop = CropSpec::make(init.box0, cfg_.input_size, cfg_.input_size);
  }

  const TrackedFrame& current() const { return cur_; }
  int frame_index() const { return index_; }

  // One chaining step t -> t+1: 2D propagation, window crop, predict,
  // decode, compose. Decode failures surface as TrackingLostError carrying
  // the frame index.
  TrackedFrame step(const ImageU8& frame) {
    auto [box, mask] = propagate_step(boxes_.back(), frames_.back(), frame,
                                      index_, *flow_, *refiner_, cfg_.segmask);
    push(frame, std::move(mask), box);
    ++index_;
    const NetworkInputs net = window_inputs();
    const MotionCode code = pred_->predict(net.crops, net.crop, index_);
    apply(code, net.crop);
    return cur_;
  }

  // Ground-truth reset at the next frame: pose, center, depth, and the
  // segmentation box change together, and the frame window restarts so no
  // pre-reset crop leaks into later predictions.
  TrackedFrame reinit(const ImageU8& frame, const Pose& pose,
                      const BBox& box) {
    ++index_;
    check(box.valid(), "Tracker: degenerate reinit box");
    Mask m = refiner_->refine(frame, box, index_);
    if (m.count() < cfg_.segmask.min_mask_px)
      throw TrackingLostError(index_, "reinit mask below minimum size");
    frames_ = {frame};
    masks_.clear();
    masks_.push_back(std::move(m));
    boxes_ = {box};
    const Projection p = project(cfg_.intrinsics, pose.T);
    cur_.pose = pose;
    cur_.u = p.u;
    cur_.v = p.v;
    cur_.z = p.z;
    cur_.code = MotionCode{};
    cur_.crop = CropSpec::make(box, cfg_.input_size, cfg_.input_size);
    return cur_;
  }

 private:
  void push(const ImageU8& frame, Mask mask, const BBox& box) {
    frames_.push_back(frame);
    masks_.push_back(std::move(mask));
    boxes_.push_back(box);
    if (int(frames_.size()) > pred_->window()) {
      frames_.erase(frames_.begin());
      masks_.erase(masks_.begin());
      boxes_.erase(boxes_.begin());
    }
  }

  // Window of the last K frames; repeats the first held frame while fewer
  // than K exist, keeping the input length fixed near the sequence start.
  NetworkInputs window_inputs() const {
    const int k = pred_->window();
    const int have = int(frames_.size());
    std::vector<ImageU8> wf;
    std::vector<Mask> wm;
    std::vector<BBox> wb;
    wf.reserve(std::size_t(k));
    for (int j = have - k; j < have; ++j) {
      const std::size_t idx = std::size_t(j < 0 ? 0 : j);
      wf.push_back(frames_[idx]);
      wm.push_back(masks_[idx]);
      wb.push_back(boxes_[idx]);
    }
    return prepare_network_inputs(wf, wm, wb, cfg_.input_size,
                                  cfg_.input_size, cfg_.segmask.margin);
  }

  void apply(const MotionCode& code, const CropSpec& crop) {
    try {
      const DecodedTranslation d = decode_translation(
          cfg_.intrinsics, cur_.u, cur_.v, cur_.z, code.translation(), crop);
      const Eigen::Matrix3d dr = axis_angle_to_matrix(code.omega);
      cur_.pose.R = dr * cur_.pose.R;
      cur_.pose.T += d.delta_t;
      cur_.u = d.u;
      cur_.v = d.v;
      cur_.z = d.z;
      cur_.code = code;
      cur_.crop = crop;
    } catch (const DomainError& e) {
      throw TrackingLostError(index_,
                              std::string("decode failed: ") + e.what());
    }
  }

  TrackerConfig cfg_;
  Predictor* pred_;
  FlowProvider* flow_;
  MaskRefiner* refiner_;
  std::vector<ImageU8> frames_;
  std::vector<Mask> masks_;
  std::vector<BBox> boxes_;
  TrackedFrame cur_;
  int index_ = 0;
};

// Full-sequence driver. With reinit_every = N > 0, frames at indices that
// are multiples of N are reset from the provided ground truth instead of
// predicted, mirroring evaluation protocols that hand out the true pose at
// a fixed interval.
inline Trajectory track_sequence(const std::vector<ImageU8>& frames,
                                 const TrackerInit& init, Predictor& predictor,
                                 FlowProvider& flow, MaskRefiner& refiner,
                                 const TrackerConfig& cfg,
                                 const ReinitSource* reinit = nullptr) {
  cfg.validate();
  check(frames.size() >= 2, "track_sequence: need at least 2 frames");
  if (cfg.reinit_every > 0)
    check(reinit != nullptr && reinit->poses.size() >= frames.size() &&
              reinit->boxes.size() >= frames.size(),
          "track_sequence: reinit source missing or shorter than the video");
  Tracker tracker(cfg, init, frames[0], predictor, flow, refiner);
  Trajectory out;
  out.frames.reserve(frames.size());
  out.frames.push_back(tracker.current());
  for (std::size_t t = 1; t < frames.size(); ++t) {
    const bool reset =
        cfg.reinit_every > 0 && t % std::size_t(cfg.reinit_every) == 0;
    out.frames.push_back(
        reset ? tracker.reinit(frames[t], reinit->poses[t], reinit->boxes[t])
              : tracker.step(frames[t]));
  }
  out.validate();
  return out;
}

}  // namespace track6d
