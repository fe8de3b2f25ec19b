#pragma once

#include <cmath>
#include <vector>

#include "track6d/nn/param.hpp"

namespace track6d {

// Adaptive-moment gradient descent with bias correction. Moment buffers are
// keyed by position in the parameter list, so the list must be stable across
// steps.
template <typename S>
class Adam {
 public:
  explicit Adam(const ParamList<S>& params, double lr = 1e-4,
                double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8)
      : lr_(S(lr)), b1_(S(beta1)), b2_(S(beta2)), eps_(S(eps)) {
    for (Param<S>* p : params)
      if (p->trainable) params_.push_back(p);
    for (Param<S>* p : params_) {
      m_.push_back(Mat<S>::Zero(p->w.rows(), p->w.cols()));
      v_.push_back(Mat<S>::Zero(p->w.rows(), p->w.cols()));
    }
  }

  void step() {
    ++t_;
    const S c1 = S(1) - S(std::pow(double(b1_), double(t_)));
    const S c2 = S(1) - S(std::pow(double(b2_), double(t_)));
    for (std::size_t i = 0; i < params_.size(); ++i) {
      Param<S>& p = *params_[i];
      m_[i] = b1_ * m_[i] + (S(1) - b1_) * p.g;
      v_[i] = b2_ * v_[i] + (S(1) - b2_) * p.g.cwiseProduct(p.g);
      p.w.array() -= lr_ * (m_[i].array() / c1) /
                     ((v_[i].array() / c2).sqrt() + eps_);
    }
  }

  long step_count() const { return t_; }

 private:
  ParamList<S> params_;
  std::vector<Mat<S>> m_, v_;
  S lr_, b1_, b2_, eps_;
  long t_ = 0;
};

}  // namespace track6d
