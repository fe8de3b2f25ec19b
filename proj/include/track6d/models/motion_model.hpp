#pragma once

#include <string>
#include <vector>

#include "track6d/common.hpp"
#include "track6d/geometry/motion.hpp"
#include "track6d/models/encoder.hpp"
#include "track6d/models/regressor.hpp"
#include "track6d/models/temporal.hpp"

namespace track6d {

enum class ModelKind { two_frame, multi_frame };

inline std::string to_string(ModelKind k) {
  return k == ModelKind::two_frame ? "two_frame" : "multi_frame";
}

inline ModelKind model_kind_from_string(const std::string& s) {
  if (s == "two_frame") return ModelKind::two_frame;
  if (s == "multi_frame") return ModelKind::multi_frame;
  throw ValidationError("unknown model kind: " + s);
}

// Everything needed to rebuild a predictor: which architecture, and the
// hyperparameters of its three modules. window is K, the number of frames
// the model looks at; the two-frame baseline fixes it at 2 and skips the
// temporal encoder entirely.
struct ModelConfig {
  ModelKind kind = ModelKind::multi_frame;
  int window = 4;
  EncoderConfig encoder;
  TransformerConfig transformer;
  RegressorConfig regressor;

  void validate() const {
    encoder.validate();
    regressor.validate();
    if (kind == ModelKind::two_frame) {
      check(window == 2, "ModelConfig: two_frame requires window == 2");
    } else {
      transformer.validate(encoder.embed_dim);
      check(window >= 2 && window <= transformer.max_window,
            "ModelConfig: window must be in [2, max_window]");
    }
  }

  // CPU-trainable shrunken setting used by the scaled-down experiments.
  static ModelConfig desk(ModelKind kind, int window = 4) {
    ModelConfig c;
    c.kind = kind;
    c.window = kind == ModelKind::two_frame ? 2 : window;
    c.encoder = {48, 96, 0.1875, 1};
    c.transformer = {1, 12, 192, 16};
    c.validate();
    return c;
  }

  // Smallest architecture the invariants allow (16x16 input, 8-dim
  // embedding). Trains in seconds; for smoke tests, not for accuracy.
  static ModelConfig tiny(ModelKind kind, int window = 4) {
    ModelConfig c;
    c.kind = kind;
    c.window = kind == ModelKind::two_frame ? 2 : window;
    c.encoder = {16, 8, 0.0625, 1};
    c.transformer = {1, 2, 16, 8};
    c.regressor = {{16, 8}};
    c.validate();
    return c;
  }

  // Full-scale setting: 224x224 input, 256-dim embedding, 18 weight
  // layers. Heads drop from 12 to 8 because 256 is not divisible by 12; the
  // divisibility invariant wins.
  static ModelConfig full(ModelKind kind, int window = 4) {
    ModelConfig c;
    c.kind = kind;
    c.window = kind == ModelKind::two_frame ? 2 : window;
    c.encoder = {224, 256, 1.0, 2};
    c.transformer = {1, 8, 512, 16};
    c.validate();
    return c;
  }
};

// Full predictor: Phi embeds each crop, T (multi-frame only) mixes the
// window, Psi regresses one MotionCode from the last two features.
template <typename S>
class MotionModel {
 public:
  explicit MotionModel(const ModelConfig& cfg)
      : cfg_(cfg), phi_(cfg.encoder), psi_(cfg.regressor, cfg.encoder.embed_dim) {
    cfg.validate();
    if (cfg.kind == ModelKind::multi_frame)
      tau_.emplace_back(cfg.transformer, cfg.encoder.embed_dim);
  }

  void init(Rng& rng) {
    phi_.init(rng);
    if (!tau_.empty()) tau_[0].init(rng);
    psi_.init(rng);
  }

  int window() const { return cfg_.window; }
  const ModelConfig& config() const { return cfg_; }

  struct Output {
    Mat<S> rot;    // (B, 3)
    Mat<S> trans;  // (B, 3)
  };

  // imgs stacks B windows of K frames each: (B*K, 3, in, in).
  Output forward(const Tensor4<S>& imgs, bool train) {
    const int k = cfg_.window;
    check(imgs.n % k == 0, "MotionModel: batch not a multiple of the window");
    batches_ = imgs.n / k;
    Mat<S> feats = phi_.forward(imgs, train);
    if (!tau_.empty()) feats = tau_[0].forward(feats, k, train);
    Mat<S> f_prev(batches_, feats.cols()), f_cur(batches_, feats.cols());
    for (int b = 0; b < batches_; ++b) {
      f_prev.row(b) = feats.row(b * k + k - 2);
      f_cur.row(b) = feats.row(b * k + k - 1);
    }
    feat_rows_ = int(feats.rows());
    auto out = psi_.forward(f_prev, f_cur, train);
    return {std::move(out.rot), std::move(out.trans)};
  }

  void backward(const Mat<S>& g_rot, const Mat<S>& g_trans) {
    const int k = cfg_.window;
    auto [g_prev, g_cur] = psi_.backward(g_rot, g_trans);
    Mat<S> g_feats = Mat<S>::Zero(feat_rows_, g_prev.cols());
    for (int b = 0; b < batches_; ++b) {
      g_feats.row(b * k + k - 2) += g_prev.row(b);
      g_feats.row(b * k + k - 1) += g_cur.row(b);
    }
    if (!tau_.empty()) g_feats = tau_[0].backward(g_feats);
    phi_.backward(g_feats);
  }

  // Per-image embeddings in evaluation mode, one row per crop.
  Mat<S> embed_frames(const std::vector<ImageF32>& crops) {
    return phi_.forward(images_to_tensor<S>(crops), false);
  }

  // One window of K crops -> one MotionCode, evaluation mode.
  MotionCode predict(const std::vector<ImageF32>& crops) {
    check(int(crops.size()) == cfg_.window,
          "MotionModel: expected " + std::to_string(cfg_.window) + " crops");
    auto out = forward(images_to_tensor<S>(crops), false);
    MotionCode code;
    code.du = double(out.trans(0, 0));
    code.dv = double(out.trans(0, 1));
    code.s = double(out.trans(0, 2));
    code.omega = {double(out.rot(0, 0)), double(out.rot(0, 1)),
                  double(out.rot(0, 2))};
    return code;
  }

  ParamList<S> params() {
    ParamList<S> out;
    phi_.collect(out);
    if (!tau_.empty()) tau_[0].collect(out);
    psi_.collect(out);
    return out;
  }

  FrameEncoder<S>& encoder() { return phi_; }
  PoseRegressor<S>& regressor() { return psi_; }
  TemporalEncoder<S>* temporal() { return tau_.empty() ? nullptr : &tau_[0]; }

 private:
  ModelConfig cfg_;
  FrameEncoder<S> phi_;
  std::vector<TemporalEncoder<S>> tau_;
  PoseRegressor<S> psi_;
  int batches_ = 0;
  int feat_rows_ = 0;
};

}  // namespace track6d
