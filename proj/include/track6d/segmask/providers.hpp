#pragma once

#include <memory>
#include <vector>

#include "track6d/rng.hpp"
#include "track6d/segmask/mask.hpp"

namespace track6d {

// Segmentation source: given a frame and a box, return the object mask inside
// that box. Stands in for an off-the-shelf video segmenter.
class MaskRefiner {
 public:
  virtual ~MaskRefiner() = default;
  virtual Mask refine(const ImageU8& frame, const BBox& box,
                      int frame_index) = 0;
};

// Dense optical flow source between consecutive frames. Stands in for a
// learned flow network.
class FlowProvider {
 public:
  virtual ~FlowProvider() = default;
  virtual FlowField flow(const ImageU8& frame_a, const ImageU8& frame_b,
                         int from_index, int to_index) = 0;
};

// Ground-truth refiner backed by the renderer's instance masks; output is the
// stored mask restricted to the query box.
class OracleMaskRefiner : public MaskRefiner {
 public:
  explicit OracleMaskRefiner(std::vector<Mask> gt_masks)
      : masks_(std::move(gt_masks)) {}

  Mask refine(const ImageU8& frame, const BBox& box, int frame_index) override {
    (void)frame;
    check(frame_index >= 0 && frame_index < int(masks_.size()),
          "OracleMaskRefiner: frame index out of range");
    const Mask& gt = masks_[frame_index];
    Mask out(gt.grid.height, gt.grid.width, frame_index);
    const BBox b = box.clamped(gt.grid.width, gt.grid.height);
    for (int y = b.top; y < b.bottom(); ++y)
      for (int x = b.left; x < b.right(); ++x)
        out.grid.at(y, x) = gt.grid.at(y, x);
    return out;
  }

 private:
  std::vector<Mask> masks_;
};

// Ground-truth flow backed by the renderer.
class OracleFlowProvider : public FlowProvider {
 public:
  explicit OracleFlowProvider(std::vector<FlowField> flows)
      : flows_(std::move(flows)) {}

  FlowField flow(const ImageU8&, const ImageU8&, int from_index,
                 int to_index) override {
    for (const FlowField& f : flows_)
      if (f.from_index == from_index && f.to_index == to_index) return f;
    throw DomainError("OracleFlowProvider: no flow for requested frame pair");
  }

 private:
  std::vector<FlowField> flows_;
};

// Degrades an exact refiner with dilation/erosion, modelling segmentation
// boundary error.
class NoisyMaskRefiner : public MaskRefiner {
 public:
  NoisyMaskRefiner(std::shared_ptr<MaskRefiner> inner, int dilate_radius,
                   int erode_radius)
      : inner_(std::move(inner)),
        dilate_(dilate_radius),
        erode_(erode_radius) {}

  Mask refine(const ImageU8& frame, const BBox& box, int frame_index) override {
    Mask m = inner_->refine(frame, box, frame_index);
    if (dilate_ > 0) m = morph(m, dilate_, true);
    if (erode_ > 0) m = morph(m, erode_, false);
    return m;
  }

 private:
  std::shared_ptr<MaskRefiner> inner_;
  int dilate_, erode_;
};

// Adds iid Gaussian pixel noise to an exact flow field. The per-call rng is
// derived from (seed, from_index) so results do not depend on call order.
class NoisyFlowProvider : public FlowProvider {
 public:
  NoisyFlowProvider(std::shared_ptr<FlowProvider> inner, double sigma_px,
                    std::uint64_t seed)
      : inner_(std::move(inner)), sigma_(sigma_px), seed_(seed) {}

  FlowField flow(const ImageU8& a, const ImageU8& b, int from_index,
                 int to_index) override {
    FlowField f = inner_->flow(a, b, from_index, to_index);
    if (sigma_ > 0) {
      Rng rng = Rng::child(seed_, std::uint64_t(from_index));
      for (float& v : f.grid.data) v += float(rng.normal(0.0, sigma_));
    }
    return f;
  }

 private:
  std::shared_ptr<FlowProvider> inner_;
  double sigma_;
  std::uint64_t seed_;
};

}  // namespace track6d
