#pragma once

#include <vector>

#include "track6d/common.hpp"

namespace track6d {

// Dense NCHW activation tensor. Plain storage, no views; layers copy what
// they need for backward.
template <typename S>
struct Tensor4 {
  int n = 0, c = 0, h = 0, w = 0;
  std::vector<S> data;

  Tensor4() = default;
  Tensor4(int n_, int c_, int h_, int w_)
      : n(n_), c(c_), h(h_), w(w_) {
    check(n_ >= 0 && c_ > 0 && h_ > 0 && w_ > 0, "Tensor4: bad shape");
    data.assign(std::size_t(n_) * c_ * h_ * w_, S(0));
  }

  S& at(int ni, int ci, int y, int x) {
    return data[((std::size_t(ni) * c + ci) * h + y) * w + x];
  }
  S at(int ni, int ci, int y, int x) const {
    return data[((std::size_t(ni) * c + ci) * h + y) * w + x];
  }
  std::size_t size() const { return data.size(); }
  bool same_shape(const Tensor4& o) const {
    return n == o.n && c == o.c && h == o.h && w == o.w;
  }
};

}  // namespace track6d
