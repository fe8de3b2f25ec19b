#pragma once

#include <string>
#include <utility>
#include <vector>

#include "track6d/common.hpp"
#include "track6d/geometry/motion.hpp"
#include "track6d/nn/layers.hpp"

namespace track6d {

struct RegressorConfig {
  std::vector<int> hidden = {800, 400, 200};

  void validate() const {
    check(!hidden.empty(), "RegressorConfig: need >= 1 hidden layer");
    for (int h : hidden) check(h >= 1, "RegressorConfig: bad hidden size");
  }
};

namespace detail {

// Linear -> BatchNorm -> ReLU stack with a 3-wide linear output.
template <typename S>
class MlpHead {
 public:
  MlpHead(const std::string& name, int in_dim, const std::vector<int>& hidden)
      : out_(name + ".out", hidden.back(), 3) {
    int d = in_dim;
    linears_.reserve(hidden.size());
    bns_.reserve(hidden.size());
    relus_.resize(hidden.size());
    for (std::size_t i = 0; i < hidden.size(); ++i) {
      const std::string li = name + ".l" + std::to_string(i);
      linears_.emplace_back(li, d, hidden[i]);
      bns_.emplace_back(li + ".bn", hidden[i]);
      d = hidden[i];
    }
  }

  void init(Rng& rng) {
    for (auto& l : linears_) l.init(rng);
    out_.init(rng);
  }

  Mat<S> forward(const Mat<S>& x, bool train) {
    Mat<S> h = x;
    for (std::size_t i = 0; i < linears_.size(); ++i)
      h = relus_[i].forward(bns_[i].forward(linears_[i].forward(h, train), train),
                            train);
    return out_.forward(h, train);
  }

  Mat<S> backward(const Mat<S>& gout) {
    Mat<S> g = out_.backward(gout);
    for (std::size_t i = linears_.size(); i-- > 0;)
      g = linears_[i].backward(bns_[i].backward(relus_[i].backward(g)));
    return g;
  }

  void collect(ParamList<S>& out) {
    for (std::size_t i = 0; i < linears_.size(); ++i) {
      linears_[i].collect(out);
      bns_[i].collect(out);
    }
    out_.collect(out);
  }

 private:
  std::vector<Linear<S>> linears_;
  std::vector<BatchNorm1d<S>> bns_;
  std::vector<ReLU<S>> relus_;
  Linear<S> out_;
};

}  // namespace detail

// Psi: concatenates the last two frame features and regresses rotation
// (axis-angle omega) and translation (du, dv, s) through separate heads.
template <typename S>
class PoseRegressor {
 public:
  PoseRegressor(const RegressorConfig& cfg, int embed_dim)
      : cfg_(cfg),
        dim_(embed_dim),
        rot_head_("psi_r", 2 * embed_dim, cfg.hidden),
        trans_head_("psi_t", 2 * embed_dim, cfg.hidden) {
    cfg.validate();
  }

  void init(Rng& rng) {
    rot_head_.init(rng);
    trans_head_.init(rng);
  }

  struct Output {
    Mat<S> rot;    // (B, 3) omega
    Mat<S> trans;  // (B, 3) du, dv, s
  };

  Output forward(const Mat<S>& f_prev, const Mat<S>& f_cur, bool train) {
    check(f_prev.rows() == f_cur.rows() && f_prev.cols() == dim_ &&
              f_cur.cols() == dim_,
          "PoseRegressor: feature shape mismatch");
    Mat<S> cat(f_prev.rows(), 2 * dim_);
    cat << f_prev, f_cur;
    return {rot_head_.forward(cat, train), trans_head_.forward(cat, train)};
  }

  // Returns gradients for (f_prev, f_cur).
  std::pair<Mat<S>, Mat<S>> backward(const Mat<S>& g_rot,
                                     const Mat<S>& g_trans) {
    Mat<S> gcat = rot_head_.backward(g_rot) + trans_head_.backward(g_trans);
    return {gcat.leftCols(dim_), gcat.rightCols(dim_)};
  }

  void collect(ParamList<S>& out) {
    rot_head_.collect(out);
    trans_head_.collect(out);
  }

  const RegressorConfig& config() const { return cfg_; }

 private:
  RegressorConfig cfg_;
  int dim_;
  detail::MlpHead<S> rot_head_, trans_head_;
};

}  // namespace track6d
