#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "track6d/common.hpp"
#include "track6d/image.hpp"
#include "track6d/nn/adam.hpp"
#include "track6d/nn/layers.hpp"

namespace track6d {

// Residual convolutional image embedder. The full preset mirrors an
// 18-weight-layer residual net producing a 256-dim embedding from 224x224
// input; width_scale and blocks_per_stage shrink it to desk scale without
// changing the contract.
struct EncoderConfig {
  int input_size = 224;
  int embed_dim = 256;
  double width_scale = 1.0;
  int blocks_per_stage = 2;

  void validate() const {
    check(embed_dim >= 8, "EncoderConfig: embed_dim must be >= 8");
    check(input_size >= 16 && input_size % 16 == 0,
          "EncoderConfig: input_size must be a positive multiple of 16");
    check(width_scale > 0, "EncoderConfig: width_scale must be positive");
    check(blocks_per_stage >= 1, "EncoderConfig: blocks_per_stage >= 1");
  }

  int stage_width(int stage) const {
    static constexpr int base[4] = {64, 128, 256, 512};
    const int w = int(std::lround(base[stage] * width_scale));
    return w < 4 ? 4 : w;
  }
};

namespace detail {

template <typename S>
class ResBlock {
 public:
  ResBlock(const std::string& name, int in_c, int out_c, int stride)
      : conv1_(name + ".conv1", in_c, out_c, 3, stride, 1),
        bn1_(name + ".bn1", out_c),
        conv2_(name + ".conv2", out_c, out_c, 3, 1, 1),
        bn2_(name + ".bn2", out_c),
        projected_(stride != 1 || in_c != out_c) {
    if (projected_) {
      skip_conv_.emplace_back(name + ".skip", in_c, out_c, 1, stride, 0);
      skip_bn_.emplace_back(name + ".skip_bn", out_c);
    }
  }

  void init(Rng& rng) {
    conv1_.init(rng);
    conv2_.init(rng);
    if (projected_) skip_conv_[0].init(rng);
  }

  Tensor4<S> forward(const Tensor4<S>& x, bool train) {
    Tensor4<S> main = relu1_.forward(bn1_.forward(conv1_.forward(x, train), train), train);
    main = bn2_.forward(conv2_.forward(main, train), train);
    Tensor4<S> skip = projected_
                          ? skip_bn_[0].forward(skip_conv_[0].forward(x, train), train)
                          : x;
    check(main.same_shape(skip), "ResBlock: branch shape mismatch");
    for (std::size_t i = 0; i < main.size(); ++i) main.data[i] += skip.data[i];
    return relu2_.forward(main, train);
  }

  Tensor4<S> backward(const Tensor4<S>& gout) {
    Tensor4<S> g = relu2_.backward(gout);
    Tensor4<S> gmain = conv1_.backward(
        bn1_.backward(relu1_.backward(conv2_.backward(bn2_.backward(g)))));
    Tensor4<S> gskip =
        projected_ ? skip_conv_[0].backward(skip_bn_[0].backward(g)) : g;
    for (std::size_t i = 0; i < gmain.size(); ++i)
      gmain.data[i] += gskip.data[i];
    return gmain;
  }

  void collect(ParamList<S>& out) {
    conv1_.collect(out);
    bn1_.collect(out);
    conv2_.collect(out);
    bn2_.collect(out);
    if (projected_) {
      skip_conv_[0].collect(out);
      skip_bn_[0].collect(out);
    }
  }

 private:
  Conv2d<S> conv1_;
  BatchNorm2d<S> bn1_;
  Conv2d<S> conv2_;
  BatchNorm2d<S> bn2_;
  ReLU4<S> relu1_, relu2_;
  // single-element vectors stand in for optional members
  std::vector<Conv2d<S>> skip_conv_;
  std::vector<BatchNorm2d<S>> skip_bn_;
  bool projected_;
};

}  // namespace detail

// Phi: images -> one embedding per image. Pools spatially, then projects to
// embed_dim.
template <typename S>
class FrameEncoder {
 public:
  explicit FrameEncoder(const EncoderConfig& cfg)
      : cfg_(cfg),
        stem_(Conv2d<S>("phi.stem.conv", 3, cfg.stage_width(0), 3, 2, 1)),
        stem_bn_("phi.stem.bn", cfg.stage_width(0)),
        proj_("phi.proj", cfg.stage_width(3), cfg.embed_dim) {
    cfg.validate();
    int in_c = cfg.stage_width(0);
    blocks_.reserve(std::size_t(4) * cfg.blocks_per_stage);
    for (int stage = 0; stage < 4; ++stage) {
      const int out_c = cfg.stage_width(stage);
      for (int b = 0; b < cfg.blocks_per_stage; ++b) {
        const int stride = (stage > 0 && b == 0) ? 2 : 1;
        blocks_.emplace_back("phi.s" + std::to_string(stage) + ".b" +
                                 std::to_string(b),
                             in_c, out_c, stride);
        in_c = out_c;
      }
    }
  }

  void init(Rng& rng) {
    stem_.init(rng);
    for (auto& b : blocks_) b.init(rng);
    proj_.init(rng);
  }

  // x: (N, 3, input_size, input_size) -> (N, embed_dim)
  Mat<S> forward(const Tensor4<S>& x, bool train) {
    check(x.c == 3 && x.h == cfg_.input_size && x.w == cfg_.input_size,
          "FrameEncoder: input must be 3x" + std::to_string(cfg_.input_size) +
              "x" + std::to_string(cfg_.input_size));
    Tensor4<S> t = stem_relu_.forward(
        stem_bn_.forward(stem_.forward(x, train), train), train);
    for (auto& b : blocks_) t = b.forward(t, train);
    return proj_.forward(pool_.forward(t, train), train);
  }

  Tensor4<S> backward(const Mat<S>& gout) {
    Tensor4<S> g = pool_.backward(proj_.backward(gout));
    for (auto it = blocks_.rbegin(); it != blocks_.rend(); ++it)
      g = it->backward(g);
    return stem_.backward(stem_bn_.backward(stem_relu_.backward(g)));
  }

  void collect(ParamList<S>& out) {
    stem_.collect(out);
    stem_bn_.collect(out);
    for (auto& b : blocks_) b.collect(out);
    proj_.collect(out);
  }

  const EncoderConfig& config() const { return cfg_; }

 private:
  EncoderConfig cfg_;
  Conv2d<S> stem_;
  BatchNorm2d<S> stem_bn_;
  ReLU4<S> stem_relu_;
  std::vector<detail::ResBlock<S>> blocks_;
  GlobalAvgPool<S> pool_;
  Linear<S> proj_;
};

// Stacks H x W x 3 float images (range [0,1]) into an NCHW batch.
template <typename S>
inline Tensor4<S> images_to_tensor(const std::vector<ImageF32>& imgs) {
  check(!imgs.empty(), "images_to_tensor: empty batch");
  const int h = imgs[0].height, w = imgs[0].width;
  check(imgs[0].channels == 3, "images_to_tensor: need 3 channels");
  Tensor4<S> t(int(imgs.size()), 3, h, w);
  for (std::size_t n = 0; n < imgs.size(); ++n) {
    check(imgs[n].height == h && imgs[n].width == w && imgs[n].channels == 3,
          "images_to_tensor: mixed shapes");
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x)
        for (int c = 0; c < 3; ++c)
          t.at(int(n), c, y, x) = S(imgs[n].at(y, x, c));
  }
  return t;
}

}  // namespace track6d
