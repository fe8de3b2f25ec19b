#pragma once

#include <Eigen/Core>
#include <string>
#include <utility>
#include <vector>

#include "track6d/common.hpp"

namespace track6d {

// Batched dense activations: one sample per row.
template <typename S>
using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;

// One learnable tensor plus its gradient accumulator. Layers own their
// Params; optimizers and checkpoints see them through collect() as a flat
// list of pointers, so a parameter's identity is its name.
template <typename S>
struct Param {
  using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;

  std::string name;
  Mat w;
  Mat g;
  // Non-trainable entries (batch-norm running statistics) ride along in the
  // list for checkpointing; optimizers skip them.
  bool trainable = true;

  Param() = default;
  Param(std::string n, Eigen::Index rows, Eigen::Index cols,
        bool trainable_ = true)
      : name(std::move(n)),
        w(Mat::Zero(rows, cols)),
        g(Mat::Zero(rows, cols)),
        trainable(trainable_) {}

  void zero_grad() { g.setZero(); }
  Eigen::Index size() const { return w.size(); }
};

template <typename S>
using ParamList = std::vector<Param<S>*>;

template <typename S>
inline void zero_grads(const ParamList<S>& ps) {
  for (Param<S>* p : ps) p->zero_grad();
}

}  // namespace track6d
