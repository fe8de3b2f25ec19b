#pragma once

#include <vector>

#include "track6d/models/motion_model.hpp"
#include "track6d/tracker/predictor.hpp"

namespace track6d {

// Learned predictor running the network in evaluation mode. Does not own the
// model; one model can serve many concurrent trackers since inference never
// touches parameters or batch statistics.
template <typename S>
class ModelPredictor : public Predictor {
 public:
  explicit ModelPredictor(MotionModel<S>& model) : model_(&model) {}

  int window() const override { return model_->window(); }

  MotionCode predict(const std::vector<ImageF32>& crops, const CropSpec&,
                     int) override {
    return model_->predict(crops);
  }

 private:
  MotionModel<S>* model_;
};

}  // namespace track6d
