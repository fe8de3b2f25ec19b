#pragma once

#include <string>
#include <vector>

#include "track6d/common.hpp"
#include "track6d/nn/layers.hpp"

namespace track6d {

struct TransformerConfig {
  int layers = 1;
  int heads = 12;
  int ff_width = 512;
  // dropout is fixed at zero by contract; no field for it
  int max_window = 16;

  void validate(int embed_dim) const {
    check(layers >= 1, "TransformerConfig: layers must be >= 1");
    check(heads >= 1 && embed_dim % heads == 0,
          "TransformerConfig: embed dim must be divisible by heads");
    check(ff_width >= 1, "TransformerConfig: ff_width must be >= 1");
    check(max_window >= 2, "TransformerConfig: max_window must be >= 2");
  }
};

namespace detail {

// Pre-norm encoder layer: x + Att(LN(x)), then x + FFN(LN(x)). The residual
// path stays untouched, so zero attention and MLP weights give the exact
// identity map; tests rely on that.
template <typename S>
class TransformerLayer {
 public:
  TransformerLayer(const std::string& name, int dim, int heads, int ff)
      : ln1_(name + ".ln1", dim),
        att_(name + ".att", dim, heads),
        ln2_(name + ".ln2", dim),
        ff1_(name + ".ff1", dim, ff),
        ff2_(name + ".ff2", ff, dim) {}

  void init(Rng& rng) {
    att_.init(rng);
    ff1_.init(rng);
    ff2_.init(rng);
  }

  Mat<S> forward(const Mat<S>& x, int window, bool train) {
    Mat<S> h = x + att_.forward(ln1_.forward(x, train), window, train);
    return h + ff2_.forward(
                   relu_.forward(ff1_.forward(ln2_.forward(h, train), train),
                                 train),
                   train);
  }

  Mat<S> backward(const Mat<S>& gout) {
    Mat<S> gh =
        gout + ln2_.backward(ff1_.backward(relu_.backward(ff2_.backward(gout))));
    return gh + ln1_.backward(att_.backward(gh));
  }

  void collect(ParamList<S>& out) {
    ln1_.collect(out);
    att_.collect(out);
    ln2_.collect(out);
    ff1_.collect(out);
    ff2_.collect(out);
  }

 private:
  LayerNorm<S> ln1_;
  MultiHeadAttention<S> att_;
  LayerNorm<S> ln2_;
  Linear<S> ff1_;
  ReLU<S> relu_;
  Linear<S> ff2_;
};

}  // namespace detail

// T: enhances per-frame features with self-attention across the window.
// Learned positional embeddings (one per window slot) are added first; they
// are what makes frame order visible to the permutation-equivariant
// attention stack.
template <typename S>
class TemporalEncoder {
 public:
  TemporalEncoder(const TransformerConfig& cfg, int embed_dim)
      : cfg_(cfg), dim_(embed_dim), pos_("tau.pos", cfg.max_window, embed_dim) {
    cfg.validate(embed_dim);
    layers_.reserve(cfg.layers);
    for (int i = 0; i < cfg.layers; ++i)
      layers_.emplace_back("tau.l" + std::to_string(i), embed_dim, cfg.heads,
                           cfg.ff_width);
  }

  void init(Rng& rng) {
    for (Eigen::Index i = 0; i < pos_.w.size(); ++i)
      pos_.w.data()[i] = S(rng.normal()) * S(0.02);
    for (auto& l : layers_) l.init(rng);
  }

  // x stacks B windows of `window` rows each.
  Mat<S> forward(const Mat<S>& x, int window, bool train) {
    check(window >= 2, "TemporalEncoder: window must be >= 2");
    check(window <= cfg_.max_window,
          "TemporalEncoder: window exceeds positional capacity");
    check(x.rows() % window == 0,
          "TemporalEncoder: rows must be a multiple of the window");
    check(x.cols() == dim_, "TemporalEncoder: width mismatch");
    window_ = window;
    Mat<S> h = x;
    const int batches = int(x.rows()) / window;
    for (int b = 0; b < batches; ++b)
      h.middleRows(b * window, window) += pos_.w.topRows(window);
    for (auto& l : layers_) h = l.forward(h, window, train);
    return h;
  }

  Mat<S> backward(const Mat<S>& gout) {
    Mat<S> g = gout;
    for (auto it = layers_.rbegin(); it != layers_.rend(); ++it)
      g = it->backward(g);
    const int batches = int(g.rows()) / window_;
    for (int b = 0; b < batches; ++b)
      pos_.g.topRows(window_) += g.middleRows(b * window_, window_);
    return g;
  }

  void collect(ParamList<S>& out) {
    out.push_back(&pos_);
    for (auto& l : layers_) l.collect(out);
  }

  const TransformerConfig& config() const { return cfg_; }

 private:
  TransformerConfig cfg_;
  int dim_;
  Param<S> pos_;
  std::vector<detail::TransformerLayer<S>> layers_;
  int window_ = 2;
};

}  // namespace track6d
