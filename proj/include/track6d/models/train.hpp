#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "track6d/common.hpp"
#include "track6d/geometry/motion.hpp"
#include "track6d/models/losses.hpp"
#include "track6d/models/motion_model.hpp"
#include "track6d/nn/adam.hpp"
#include "track6d/segmask/pipeline.hpp"

namespace track6d {

// One training window: K masked crops plus the ground-truth motion between
// the last two frames, encoded in the window's own crop parameterization.
struct TrainSample {
  std::vector<ImageF32> crops;
  MotionCode target;
};

struct TrainConfig {
  int window = 2;
  int batch = 32;
  double lr = 1e-4;
  int steps = 1000;
  std::uint64_t seed = 0;
  double lambda = 1.0;

  void validate() const {
    check(window >= 2, "TrainConfig: window must be >= 2");
    check(batch >= 2, "TrainConfig: batch must be >= 2 (batch norm)");
    check(lr > 0, "TrainConfig: lr must be positive");
    check(steps >= 1, "TrainConfig: steps must be >= 1");
    check(lambda > 0, "TrainConfig: lambda must be positive");
  }
};

// Builds the windows ending at frames 1..N-1 of one sequence. The window
// reaching before the sequence start repeats frame 0, keeping the input
// length fixed. Crops, boxes, and the target MotionCode all derive from the
// same CropSpec, so training and tracking see identical parameterizations.
inline std::vector<TrainSample> build_training_windows(
    const std::vector<ImageU8>& images, const std::vector<Mask>& masks,
    const std::vector<Pose>& poses, const CameraIntrinsics& intrinsics,
    int window, int input_size, const SegmaskConfig& cfg = {}) {
  cfg.validate();
  check(window >= 2, "build_training_windows: window must be >= 2");
  check(images.size() >= 2, "build_training_windows: need >= 2 frames");
  check(images.size() == masks.size() && images.size() == poses.size(),
        "build_training_windows: length mismatch");
  const int n = int(images.size());
  std::vector<TrainSample> out;
  out.reserve(std::size_t(n) - 1);
  for (int t = 1; t < n; ++t) {
    std::vector<ImageU8> frames;
    std::vector<Mask> window_masks;
    std::vector<BBox> boxes;
    for (int j = t - window + 1; j <= t; ++j) {
      const int idx = j < 0 ? 0 : j;
      frames.push_back(images[std::size_t(idx)]);
      window_masks.push_back(masks[std::size_t(idx)]);
      boxes.push_back(mask_to_bbox_frac(masks[std::size_t(idx)], cfg.pad_frac));
    }
    NetworkInputs net = prepare_network_inputs(frames, window_masks, boxes,
                                               input_size, input_size,
                                               cfg.margin);
    TrainSample s;
    s.crops = std::move(net.crops);
    s.target = encode_motion(intrinsics, poses[std::size_t(t - 1)],
                             poses[std::size_t(t)], net.crop);
    out.push_back(std::move(s));
  }
  return out;
}

struct TrainResult {
  std::vector<double> losses;  // one entry per step
};

// Deterministic minibatch gradient descent: epoch-shuffled sample order from
// the config seed, Adam updates, non-finite loss aborts with the step index.
template <typename S>
inline TrainResult train(MotionModel<S>& model,
                         const std::vector<TrainSample>& data,
                         const TrainConfig& cfg) {
  cfg.validate();
  check(cfg.window == model.window(),
        "train: config window does not match the model");
  check(!data.empty(), "train: empty dataset");
  for (const TrainSample& s : data)
    check(int(s.crops.size()) == cfg.window,
          "train: sample crop count does not match the window");

  Rng rng(cfg.seed);
  ParamList<S> params = model.params();
  Adam<S> opt(params, cfg.lr);

  std::vector<int> order(data.size());
  std::size_t cursor = order.size();  // forces a shuffle on first use
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = int(i);

  const int in = model.config().encoder.input_size;
  TrainResult result;
  result.losses.reserve(std::size_t(cfg.steps));
  for (int step = 0; step < cfg.steps; ++step) {
    std::vector<const TrainSample*> batch;
    std::vector<MotionCode> targets;
    batch.reserve(std::size_t(cfg.batch));
    for (int b = 0; b < cfg.batch; ++b) {
      if (cursor == order.size()) {
        for (std::size_t i = order.size() - 1; i > 0; --i)
          std::swap(order[i], order[rng.uniform_int(0, std::int64_t(i))]);
        cursor = 0;
      }
      batch.push_back(&data[std::size_t(order[cursor++])]);
      targets.push_back(batch.back()->target);
    }

    Tensor4<S> imgs(cfg.batch * cfg.window, 3, in, in);
    for (int b = 0; b < cfg.batch; ++b)
      for (int k = 0; k < cfg.window; ++k) {
        const ImageF32& im = batch[std::size_t(b)]->crops[std::size_t(k)];
        check(im.height == in && im.width == in && im.channels == 3,
              "train: crop size does not match the encoder input");
        for (int y = 0; y < in; ++y)
          for (int x = 0; x < in; ++x)
            for (int c = 0; c < 3; ++c)
              imgs.at(b * cfg.window + k, c, y, x) = S(im.at(y, x, c));
      }

    zero_grads(params);
    auto out = model.forward(imgs, true);
    BatchLoss<S> bl = batch_loss(out.rot, out.trans, targets, cfg.lambda);
    if (!std::isfinite(bl.value))
      throw TrainDivergedError(step, "training loss became non-finite");
    model.backward(bl.g_rot, bl.g_trans);
    opt.step();
    result.losses.push_back(bl.value);
  }
  return result;
}

}  // namespace track6d
