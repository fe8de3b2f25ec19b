#pragma once

#include <Eigen/Core>
#include <cmath>
#include <string>
#include <vector>

#include "track6d/common.hpp"
#include "track6d/nn/param.hpp"
#include "track6d/nn/tensor4.hpp"
#include "track6d/rng.hpp"

namespace track6d {

// All layers follow the same protocol: forward(x, train) caches whatever
// backward needs, backward(gout) accumulates parameter gradients (+=) and
// returns the input gradient. collect() exposes parameters in a fixed order;
// that order is the checkpoint layout.

template <typename S>
class Linear {
 public:
  Linear(const std::string& name, int in, int out)
      : w_(name + ".w", out, in), b_(name + ".b", out, 1) {}

  void init(Rng& rng) {
    const S std = S(std::sqrt(2.0 / double(w_.w.cols())));
    for (Eigen::Index i = 0; i < w_.w.size(); ++i)
      w_.w.data()[i] = S(rng.normal()) * std;
    b_.w.setZero();
  }

  Mat<S> forward(const Mat<S>& x, bool /*train*/) {
    check(x.cols() == w_.w.cols(), "Linear: input width mismatch");
    x_ = x;
    return (x * w_.w.transpose()).rowwise() + b_.w.col(0).transpose();
  }

  Mat<S> backward(const Mat<S>& gout) {
    w_.g.noalias() += gout.transpose() * x_;
    b_.g.col(0).noalias() += gout.colwise().sum().transpose();
    return gout * w_.w;
  }

  void collect(ParamList<S>& out) {
    out.push_back(&w_);
    out.push_back(&b_);
  }

  int in_dim() const { return int(w_.w.cols()); }
  int out_dim() const { return int(w_.w.rows()); }

 private:
  Param<S> w_, b_;
  Mat<S> x_;
};

template <typename S>
class ReLU {
 public:
  Mat<S> forward(const Mat<S>& x, bool /*train*/) {
    mask_ = (x.array() > S(0)).template cast<S>();
    return x.cwiseProduct(mask_);
  }
  Mat<S> backward(const Mat<S>& gout) { return gout.cwiseProduct(mask_); }

 private:
  Mat<S> mask_;
};

template <typename S>
class ReLU4 {
 public:
  Tensor4<S> forward(const Tensor4<S>& x, bool /*train*/) {
    mask_.assign(x.size(), S(0));
    Tensor4<S> y = x;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x.data[i] > S(0))
        mask_[i] = S(1);
      else
        y.data[i] = S(0);
    }
    return y;
  }
  Tensor4<S> backward(const Tensor4<S>& gout) {
    Tensor4<S> gin = gout;
    for (std::size_t i = 0; i < gin.size(); ++i) gin.data[i] *= mask_[i];
    return gin;
  }

 private:
  std::vector<S> mask_;
};

// Normalizes each feature over the batch. Training requires batch >= 2;
// single-sample statistics are degenerate by contract. Running statistics
// use the unbiased variance, normalization the biased one.
template <typename S>
class BatchNorm1d {
 public:
  BatchNorm1d(const std::string& name, int dim, double momentum = 0.1,
              double eps = 1e-5)
      : gamma_(name + ".gamma", dim, 1),
        beta_(name + ".beta", dim, 1),
        run_mean_(name + ".running_mean", dim, 1, false),
        run_var_(name + ".running_var", dim, 1, false),
        momentum_(S(momentum)),
        eps_(S(eps)) {
    gamma_.w.setOnes();
    run_var_.w.setOnes();
  }

  void init(Rng&) {}

  Mat<S> forward(const Mat<S>& x, bool train) {
    check(x.cols() == gamma_.w.rows(), "BatchNorm1d: width mismatch");
    const Eigen::Index n = x.rows();
    Mat<S> mean, var;
    if (train) {
      check(n >= 2, "BatchNorm1d: training batch must be >= 2");
      mean = x.colwise().mean().transpose();
      Mat<S> centered = x.rowwise() - mean.col(0).transpose();
      var = (centered.array().square().colwise().sum() / S(n))
                .transpose()
                .matrix();
      run_mean_.w = (S(1) - momentum_) * run_mean_.w + momentum_ * mean;
      run_var_.w = (S(1) - momentum_) * run_var_.w +
                   momentum_ * var * S(n) / S(n - 1);
    } else {
      mean = run_mean_.w;
      var = run_var_.w;
    }
    inv_std_ = (var.array() + eps_).rsqrt().matrix();
    xhat_ = (x.rowwise() - mean.col(0).transpose()).array().rowwise() *
            inv_std_.col(0).transpose().array();
    train_ = train;
    return (xhat_.array().rowwise() * gamma_.w.col(0).transpose().array())
               .matrix()
               .rowwise() +
           beta_.w.col(0).transpose();
  }

  Mat<S> backward(const Mat<S>& gout) {
    gamma_.g.col(0).noalias() +=
        gout.cwiseProduct(xhat_).colwise().sum().transpose();
    beta_.g.col(0).noalias() += gout.colwise().sum().transpose();
    Mat<S> gxhat = gout.array().rowwise() *
                   gamma_.w.col(0).transpose().array();
    if (!train_)
      return (gxhat.array().rowwise() * inv_std_.col(0).transpose().array())
          .matrix();
    // d/dx of batch standardization: remove the per-feature mean of gxhat
    // and the xhat-projected component.
    Mat<S> mean_g = gxhat.colwise().mean();
    Mat<S> mean_gx = gxhat.cwiseProduct(xhat_).colwise().mean();
    Mat<S> gin =
        gxhat.rowwise() - mean_g.row(0) -
        (xhat_.array().rowwise() * mean_gx.row(0).array()).matrix();
    return (gin.array().rowwise() * inv_std_.col(0).transpose().array())
        .matrix();
  }

  void collect(ParamList<S>& out) {
    out.push_back(&gamma_);
    out.push_back(&beta_);
    out.push_back(&run_mean_);
    out.push_back(&run_var_);
  }

 private:
  Param<S> gamma_, beta_, run_mean_, run_var_;
  Mat<S> xhat_, inv_std_;
  S momentum_, eps_;
  bool train_ = false;
};

// 3x3-style convolution via im2col + GEMM. Weight is stored flattened as
// (out_c, in_c*kh*kw) so forward is one matrix product per sample.
template <typename S>
class Conv2d {
 public:
  Conv2d(const std::string& name, int in_c, int out_c, int k, int stride,
         int pad)
      : w_(name + ".w", out_c, in_c * k * k),
        b_(name + ".b", out_c, 1),
        in_c_(in_c),
        out_c_(out_c),
        k_(k),
        stride_(stride),
        pad_(pad) {
    check(k >= 1 && stride >= 1 && pad >= 0, "Conv2d: bad geometry");
  }

  void init(Rng& rng) {
    const S std = S(std::sqrt(2.0 / double(w_.w.cols())));
    for (Eigen::Index i = 0; i < w_.w.size(); ++i)
      w_.w.data()[i] = S(rng.normal()) * std;
    b_.w.setZero();
  }

  int out_size(int in) const { return (in + 2 * pad_ - k_) / stride_ + 1; }

  Tensor4<S> forward(const Tensor4<S>& x, bool /*train*/) {
    check(x.c == in_c_, "Conv2d: channel mismatch");
    x_ = x;
    const int oh = out_size(x.h), ow = out_size(x.w);
    check(oh > 0 && ow > 0, "Conv2d: output collapsed to zero");
    Tensor4<S> y(x.n, out_c_, oh, ow);
    Mat<S> cols(in_c_ * k_ * k_, oh * ow);
    for (int n = 0; n < x.n; ++n) {
      im2col(x, n, oh, ow, cols);
      Mat<S> out = w_.w * cols;
      out.colwise() += b_.w.col(0);
      for (int c = 0; c < out_c_; ++c)
        for (int i = 0; i < oh * ow; ++i)
          y.data[((std::size_t(n) * out_c_ + c) * oh + i / ow) * ow + i % ow] =
              out(c, i);
    }
    return y;
  }

  Tensor4<S> backward(const Tensor4<S>& gout) {
    const int oh = gout.h, ow = gout.w;
    Tensor4<S> gin(x_.n, x_.c, x_.h, x_.w);
    Mat<S> cols(in_c_ * k_ * k_, oh * ow);
    Mat<S> gmat(out_c_, oh * ow);
    for (int n = 0; n < x_.n; ++n) {
      for (int c = 0; c < out_c_; ++c)
        for (int i = 0; i < oh * ow; ++i)
          gmat(c, i) =
              gout.data[((std::size_t(n) * out_c_ + c) * oh + i / ow) * ow +
                        i % ow];
      im2col(x_, n, oh, ow, cols);
      w_.g.noalias() += gmat * cols.transpose();
      b_.g.col(0).noalias() += gmat.rowwise().sum();
      Mat<S> gcols = w_.w.transpose() * gmat;
      col2im(gcols, n, oh, ow, gin);
    }
    return gin;
  }

  void collect(ParamList<S>& out) {
    out.push_back(&w_);
    out.push_back(&b_);
  }

 private:
  void im2col(const Tensor4<S>& x, int n, int oh, int ow, Mat<S>& cols) const {
    cols.setZero();
    for (int c = 0; c < in_c_; ++c)
      for (int ky = 0; ky < k_; ++ky)
        for (int kx = 0; kx < k_; ++kx) {
          const int row = (c * k_ + ky) * k_ + kx;
          for (int oy = 0; oy < oh; ++oy) {
            const int iy = oy * stride_ + ky - pad_;
            if (iy < 0 || iy >= x.h) continue;
            for (int ox = 0; ox < ow; ++ox) {
              const int ix = ox * stride_ + kx - pad_;
              if (ix < 0 || ix >= x.w) continue;
              cols(row, oy * ow + ox) = x.at(n, c, iy, ix);
            }
          }
        }
  }

  void col2im(const Mat<S>& gcols, int n, int oh, int ow,
              Tensor4<S>& gin) const {
    for (int c = 0; c < in_c_; ++c)
      for (int ky = 0; ky < k_; ++ky)
        for (int kx = 0; kx < k_; ++kx) {
          const int row = (c * k_ + ky) * k_ + kx;
          for (int oy = 0; oy < oh; ++oy) {
            const int iy = oy * stride_ + ky - pad_;
            if (iy < 0 || iy >= gin.h) continue;
            for (int ox = 0; ox < ow; ++ox) {
              const int ix = ox * stride_ + kx - pad_;
              if (ix < 0 || ix >= gin.w) continue;
              gin.at(n, c, iy, ix) += gcols(row, oy * ow + ox);
            }
          }
        }
  }

  Param<S> w_, b_;
  Tensor4<S> x_;
  int in_c_, out_c_, k_, stride_, pad_;
};

// Per-channel normalization over batch and spatial dims.
template <typename S>
class BatchNorm2d {
 public:
  BatchNorm2d(const std::string& name, int channels, double momentum = 0.1,
              double eps = 1e-5)
      : gamma_(name + ".gamma", channels, 1),
        beta_(name + ".beta", channels, 1),
        run_mean_(name + ".running_mean", channels, 1, false),
        run_var_(name + ".running_var", channels, 1, false),
        momentum_(S(momentum)),
        eps_(S(eps)) {
    gamma_.w.setOnes();
    run_var_.w.setOnes();
  }

  void init(Rng&) {}

  Tensor4<S> forward(const Tensor4<S>& x, bool train) {
    check(x.c == gamma_.w.rows(), "BatchNorm2d: channel mismatch");
    const std::size_t per = std::size_t(x.n) * x.h * x.w;
    mean_.resize(x.c);
    inv_std_.resize(x.c);
    if (train) {
      check(x.n >= 2, "BatchNorm2d: training batch must be >= 2");
      for (int c = 0; c < x.c; ++c) {
        double sum = 0, sq = 0;
        for (int n = 0; n < x.n; ++n)
          for (int y = 0; y < x.h; ++y)
            for (int xx = 0; xx < x.w; ++xx) {
              const double v = double(x.at(n, c, y, xx));
              sum += v;
              sq += v * v;
            }
        const double m = sum / double(per);
        const double var = sq / double(per) - m * m;
        mean_[c] = S(m);
        inv_std_[c] = S(1.0 / std::sqrt(var + double(eps_)));
        run_mean_.w(c, 0) =
            (S(1) - momentum_) * run_mean_.w(c, 0) + momentum_ * S(m);
        run_var_.w(c, 0) =
            (S(1) - momentum_) * run_var_.w(c, 0) +
            momentum_ * S(var * double(per) / double(per - 1));
      }
    } else {
      for (int c = 0; c < x.c; ++c) {
        mean_[c] = run_mean_.w(c, 0);
        inv_std_[c] = S(1) / std::sqrt(run_var_.w(c, 0) + eps_);
      }
    }
    xhat_ = x;
    for (int n = 0; n < x.n; ++n)
      for (int c = 0; c < x.c; ++c)
        for (int y = 0; y < x.h; ++y)
          for (int xx = 0; xx < x.w; ++xx)
            xhat_.at(n, c, y, xx) =
                (x.at(n, c, y, xx) - mean_[c]) * inv_std_[c];
    train_ = train;
    Tensor4<S> out = xhat_;
    for (int n = 0; n < x.n; ++n)
      for (int c = 0; c < x.c; ++c)
        for (int y = 0; y < x.h; ++y)
          for (int xx = 0; xx < x.w; ++xx)
            out.at(n, c, y, xx) =
                out.at(n, c, y, xx) * gamma_.w(c, 0) + beta_.w(c, 0);
    return out;
  }

  Tensor4<S> backward(const Tensor4<S>& gout) {
    const std::size_t per = std::size_t(gout.n) * gout.h * gout.w;
    Tensor4<S> gin(gout.n, gout.c, gout.h, gout.w);
    for (int c = 0; c < gout.c; ++c) {
      double gsum = 0, gxsum = 0;
      for (int n = 0; n < gout.n; ++n)
        for (int y = 0; y < gout.h; ++y)
          for (int xx = 0; xx < gout.w; ++xx) {
            const double g = double(gout.at(n, c, y, xx));
            gsum += g;
            gxsum += g * double(xhat_.at(n, c, y, xx));
          }
      gamma_.g(c, 0) += S(gxsum);
      beta_.g(c, 0) += S(gsum);
      const S mg = S(gsum / double(per));
      const S mgx = S(gxsum / double(per));
      for (int n = 0; n < gout.n; ++n)
        for (int y = 0; y < gout.h; ++y)
          for (int xx = 0; xx < gout.w; ++xx) {
            const S g = gout.at(n, c, y, xx) * gamma_.w(c, 0);
            if (train_) {
              const S corr = gamma_.w(c, 0) *
                             (mg + xhat_.at(n, c, y, xx) * mgx);
              gin.at(n, c, y, xx) = (g - corr) * inv_std_[c];
            } else {
              gin.at(n, c, y, xx) = g * inv_std_[c];
            }
          }
    }
    return gin;
  }

  void collect(ParamList<S>& out) {
    out.push_back(&gamma_);
    out.push_back(&beta_);
    out.push_back(&run_mean_);
    out.push_back(&run_var_);
  }

 private:
  Param<S> gamma_, beta_, run_mean_, run_var_;
  Tensor4<S> xhat_;
  std::vector<S> mean_, inv_std_;
  S momentum_, eps_;
  bool train_ = false;
};

// Per-row normalization over features.
template <typename S>
class LayerNorm {
 public:
  LayerNorm(const std::string& name, int dim, double eps = 1e-5)
      : gamma_(name + ".gamma", dim, 1),
        beta_(name + ".beta", dim, 1),
        eps_(S(eps)) {
    gamma_.w.setOnes();
  }

  void init(Rng&) {}

  Mat<S> forward(const Mat<S>& x, bool /*train*/) {
    check(x.cols() == gamma_.w.rows(), "LayerNorm: width mismatch");
    const S d = S(x.cols());
    Mat<S> mean = x.rowwise().mean();
    Mat<S> centered = x.colwise() - mean.col(0);
    Mat<S> var = centered.array().square().rowwise().sum().matrix() / d;
    inv_std_ = (var.array() + eps_).rsqrt().matrix();
    xhat_ = centered.array().colwise() * inv_std_.col(0).array();
    return (xhat_.array().rowwise() * gamma_.w.col(0).transpose().array())
               .matrix()
               .rowwise() +
           beta_.w.col(0).transpose();
  }

  Mat<S> backward(const Mat<S>& gout) {
    const S d = S(gout.cols());
    gamma_.g.col(0).noalias() +=
        gout.cwiseProduct(xhat_).colwise().sum().transpose();
    beta_.g.col(0).noalias() += gout.colwise().sum().transpose();
    Mat<S> gxhat = gout.array().rowwise() *
                   gamma_.w.col(0).transpose().array();
    Mat<S> mean_g = gxhat.rowwise().mean();
    Mat<S> mean_gx = gxhat.cwiseProduct(xhat_).rowwise().sum() / d;
    Mat<S> gin = gxhat.colwise() - mean_g.col(0);
    gin -= (xhat_.array().colwise() * mean_gx.col(0).array()).matrix();
    return (gin.array().colwise() * inv_std_.col(0).array()).matrix();
  }

  void collect(ParamList<S>& out) {
    out.push_back(&gamma_);
    out.push_back(&beta_);
  }

 private:
  Param<S> gamma_, beta_;
  Mat<S> xhat_, inv_std_;
  S eps_;
};

// Self-attention over fixed-length windows. The input stacks B windows of K
// rows each; attention mixes rows only within a window.
template <typename S>
class MultiHeadAttention {
 public:
  MultiHeadAttention(const std::string& name, int dim, int heads)
      : wq_(name + ".wq", dim, dim),
        wk_(name + ".wk", dim, dim),
        wv_(name + ".wv", dim, dim),
        wo_(name + ".wo", dim, dim),
        bq_(name + ".bq", dim, 1),
        bk_(name + ".bk", dim, 1),
        bv_(name + ".bv", dim, 1),
        bo_(name + ".bo", dim, 1),
        dim_(dim),
        heads_(heads) {
    check(heads >= 1 && dim % heads == 0,
          "MultiHeadAttention: dim must be divisible by heads");
  }

  void init(Rng& rng) {
    const S std = S(std::sqrt(1.0 / double(dim_)));
    for (Param<S>* p : {&wq_, &wk_, &wv_, &wo_})
      for (Eigen::Index i = 0; i < p->w.size(); ++i)
        p->w.data()[i] = S(rng.normal()) * std;
    for (Param<S>* p : {&bq_, &bk_, &bv_, &bo_}) p->w.setZero();
  }

  Mat<S> forward(const Mat<S>& x, int window, bool /*train*/) {
    check(window >= 1 && x.rows() % window == 0,
          "MultiHeadAttention: rows must be a multiple of the window");
    check(x.cols() == dim_, "MultiHeadAttention: width mismatch");
    x_ = x;
    window_ = window;
    const int batches = int(x.rows()) / window;
    const int dh = dim_ / heads_;
    const S scale = S(1.0 / std::sqrt(double(dh)));
    q_ = (x * wq_.w.transpose()).rowwise() + bq_.w.col(0).transpose();
    k_ = (x * wk_.w.transpose()).rowwise() + bk_.w.col(0).transpose();
    v_ = (x * wv_.w.transpose()).rowwise() + bv_.w.col(0).transpose();
    att_.assign(std::size_t(batches) * heads_, Mat<S>());
    hcat_ = Mat<S>::Zero(x.rows(), dim_);
    for (int b = 0; b < batches; ++b)
      for (int h = 0; h < heads_; ++h) {
        const auto qb = q_.block(b * window, h * dh, window, dh);
        const auto kb = k_.block(b * window, h * dh, window, dh);
        const auto vb = v_.block(b * window, h * dh, window, dh);
        Mat<S> scores = qb * kb.transpose() * scale;
        Mat<S>& a = att_[std::size_t(b) * heads_ + h];
        a = softmax_rows(scores);
        hcat_.block(b * window, h * dh, window, dh) = a * vb;
      }
    return (hcat_ * wo_.w.transpose()).rowwise() + bo_.w.col(0).transpose();
  }

  Mat<S> backward(const Mat<S>& gout) {
    const int batches = int(x_.rows()) / window_;
    const int dh = dim_ / heads_;
    const S scale = S(1.0 / std::sqrt(double(dh)));
    wo_.g.noalias() += gout.transpose() * hcat_;
    bo_.g.col(0).noalias() += gout.colwise().sum().transpose();
    Mat<S> ghcat = gout * wo_.w;
    Mat<S> gq = Mat<S>::Zero(x_.rows(), dim_);
    Mat<S> gk = Mat<S>::Zero(x_.rows(), dim_);
    Mat<S> gv = Mat<S>::Zero(x_.rows(), dim_);
    for (int b = 0; b < batches; ++b)
      for (int h = 0; h < heads_; ++h) {
        const Mat<S>& a = att_[std::size_t(b) * heads_ + h];
        const auto qb = q_.block(b * window_, h * dh, window_, dh);
        const auto kb = k_.block(b * window_, h * dh, window_, dh);
        const auto vb = v_.block(b * window_, h * dh, window_, dh);
        const auto gh = ghcat.block(b * window_, h * dh, window_, dh);
        Mat<S> ga = gh * vb.transpose();
        gv.block(b * window_, h * dh, window_, dh).noalias() =
            a.transpose() * gh;
        // softmax rows: gS = A .* (gA - rowsum(gA .* A))
        Mat<S> rowdot = ga.cwiseProduct(a).rowwise().sum();
        Mat<S> gs = a.cwiseProduct(ga.colwise() - rowdot.col(0));
        gq.block(b * window_, h * dh, window_, dh).noalias() =
            gs * kb * scale;
        gk.block(b * window_, h * dh, window_, dh).noalias() =
            gs.transpose() * qb * scale;
      }
    wq_.g.noalias() += gq.transpose() * x_;
    bq_.g.col(0).noalias() += gq.colwise().sum().transpose();
    wk_.g.noalias() += gk.transpose() * x_;
    bk_.g.col(0).noalias() += gk.colwise().sum().transpose();
    wv_.g.noalias() += gv.transpose() * x_;
    bv_.g.col(0).noalias() += gv.colwise().sum().transpose();
    return gq * wq_.w + gk * wk_.w + gv * wv_.w;
  }

  void collect(ParamList<S>& out) {
    for (Param<S>* p : {&wq_, &bq_, &wk_, &bk_, &wv_, &bv_, &wo_, &bo_})
      out.push_back(p);
  }

 private:
  static Mat<S> softmax_rows(const Mat<S>& x) {
    Mat<S> y(x.rows(), x.cols());
    for (Eigen::Index r = 0; r < x.rows(); ++r) {
      const S m = x.row(r).maxCoeff();
      Eigen::Array<S, 1, Eigen::Dynamic> e = (x.row(r).array() - m).exp();
      y.row(r) = (e / e.sum()).matrix();
    }
    return y;
  }

  Param<S> wq_, wk_, wv_, wo_, bq_, bk_, bv_, bo_;
  Mat<S> x_, q_, k_, v_, hcat_;
  std::vector<Mat<S>> att_;
  int dim_, heads_, window_ = 1;
};

// Mean over spatial positions: (N,C,H,W) -> (N,C).
template <typename S>
class GlobalAvgPool {
 public:
  Mat<S> forward(const Tensor4<S>& x, bool /*train*/) {
    n_ = x.n;
    c_ = x.c;
    h_ = x.h;
    w_ = x.w;
    Mat<S> y = Mat<S>::Zero(x.n, x.c);
    for (int n = 0; n < x.n; ++n)
      for (int c = 0; c < x.c; ++c) {
        S sum = 0;
        for (int yy = 0; yy < x.h; ++yy)
          for (int xx = 0; xx < x.w; ++xx) sum += x.at(n, c, yy, xx);
        y(n, c) = sum / S(x.h * x.w);
      }
    return y;
  }

  Tensor4<S> backward(const Mat<S>& gout) {
    Tensor4<S> gin(n_, c_, h_, w_);
    const S inv = S(1) / S(h_ * w_);
    for (int n = 0; n < n_; ++n)
      for (int c = 0; c < c_; ++c) {
        const S g = gout(n, c) * inv;
        for (int yy = 0; yy < h_; ++yy)
          for (int xx = 0; xx < w_; ++xx) gin.at(n, c, yy, xx) = g;
      }
    return gin;
  }

 private:
  int n_ = 0, c_ = 0, h_ = 0, w_ = 0;
};

}  // namespace track6d
