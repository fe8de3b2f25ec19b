#pragma once

#include <utility>
#include <vector>

#include "track6d/segmask/providers.hpp"

namespace track6d {

struct SegmaskConfig {
  double pad_frac = 0.1;    // box padding as a fraction of the tight diagonal
  double margin = 0.0;      // extra crop_union margin per side
  int min_mask_px = 1;      // below this the target counts as lost

  void validate() const {
    check(pad_frac >= 0 && margin >= 0 && min_mask_px >= 1,
          "SegmaskConfig: invalid values");
  }
};

// mask_to_bbox with pad proportional to the tight box diagonal.
inline BBox mask_to_bbox_frac(const Mask& mask, double pad_frac) {
  const BBox tight = mask_to_bbox(mask, 0);
  const int pad = int(std::lround(pad_frac * tight.diagonal()));
  return mask_to_bbox(mask, pad);
}

// One 2D tracking step (frame t -> t+1):
//   M_t = refine(B_t); M_hat = warp(M_t); B_{t+1} = bbox(M_hat);
//   M_{t+1} = refine(B_{t+1}).
inline std::pair<BBox, Mask> propagate_step(
    const BBox& box_t, const ImageU8& frame_t, const ImageU8& frame_t1, int t,
    FlowProvider& flow_provider, MaskRefiner& refiner,
    const SegmaskConfig& cfg = {}) {
  cfg.validate();
  check(box_t.valid(), "propagate_step: degenerate input box");
  Mask m_t = refiner.refine(frame_t, box_t, t);
  if (m_t.count() < cfg.min_mask_px)
    throw TrackingLostError(t, "refined mask below minimum size");
  const FlowField f = flow_provider.flow(frame_t, frame_t1, t, t + 1);
  const Mask m_hat = warp_mask(m_t, f);
  if (m_hat.count() < cfg.min_mask_px)
    throw TrackingLostError(t + 1, "warped mask below minimum size");
  const BBox box_t1 = mask_to_bbox_frac(m_hat, cfg.pad_frac);
  Mask m_t1 = refiner.refine(frame_t1, box_t1, t + 1);
  if (m_t1.count() < cfg.min_mask_px)
    throw TrackingLostError(t + 1, "refined mask below minimum size");
  return {box_t1, std::move(m_t1)};
}

// Runs the 2D tracker over a whole sequence starting from box_0; returns one
// (box, mask) per frame.
inline std::vector<std::pair<BBox, Mask>> track_boxes(
    const std::vector<ImageU8>& frames, const BBox& box_0,
    FlowProvider& flow_provider, MaskRefiner& refiner,
    const SegmaskConfig& cfg = {}) {
  cfg.validate();
  check(!frames.empty(), "track_boxes: no frames");
  std::vector<std::pair<BBox, Mask>> out;
  out.reserve(frames.size());
  Mask m0 = refiner.refine(frames[0], box_0, 0);
  if (m0.count() < cfg.min_mask_px)
    throw TrackingLostError(0, "initial mask below minimum size");
  out.emplace_back(box_0, std::move(m0));
  for (std::size_t t = 0; t + 1 < frames.size(); ++t)
    out.push_back(propagate_step(out.back().first, frames[t], frames[t + 1],
                                 int(t), flow_provider, refiner, cfg));
  return out;
}

namespace detail {

// Clamp-to-edge bilinear sample of a channel, half-pixel convention.
inline float bilinear(const ImageF32& img, double x, double y, int c) {
  const int w = img.width, h = img.height;
  const double fx = std::clamp(x, 0.0, double(w - 1));
  const double fy = std::clamp(y, 0.0, double(h - 1));
  const int x0 = int(fx), y0 = int(fy);
  const int x1 = std::min(x0 + 1, w - 1), y1 = std::min(y0 + 1, h - 1);
  const double ax = fx - x0, ay = fy - y0;
  const double top = (1 - ax) * img.at(y0, x0, c) + ax * img.at(y0, x1, c);
  const double bot = (1 - ax) * img.at(y1, x0, c) + ax * img.at(y1, x1, c);
  return float((1 - ay) * top + ay * bot);
}

}  // namespace detail

struct NetworkInputs {
  std::vector<ImageF32> crops;  // K images, input_h x input_w x 3, in [0,1]
  CropSpec crop;
};

// Masks the background to zero, crops every frame by the union of the K
// boxes, and resamples to the network input size. One CropSpec is shared by
// the whole window; it is what encode/decode use later.
inline NetworkInputs prepare_network_inputs(const std::vector<ImageU8>& frames,
                                            const std::vector<Mask>& masks,
                                            const std::vector<BBox>& boxes,
                                            int input_w, int input_h,
                                            double margin = 0.0) {
  const std::size_t k = frames.size();
  check(k >= 2, "prepare_network_inputs: need at least 2 frames");
  check(masks.size() == k && boxes.size() == k,
        "prepare_network_inputs: frames/masks/boxes size mismatch");
  const int img_h = frames[0].height, img_w = frames[0].width;
  for (const ImageU8& f : frames)
    check(f.height == img_h && f.width == img_w && f.channels == 3,
          "prepare_network_inputs: frame shape mismatch");
  const std::vector<BBox> box_list(boxes.begin(), boxes.end());
  const CropSpec spec =
      crop_union(box_list, input_w, input_h, margin, img_w, img_h);

  NetworkInputs out;
  out.crop = spec;
  out.crops.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    check(masks[i].grid.height == img_h && masks[i].grid.width == img_w,
          "prepare_network_inputs: mask shape mismatch");
    ImageF32 masked(img_h, img_w, 3);
    for (int y = 0; y < img_h; ++y)
      for (int x = 0; x < img_w; ++x)
        if (masks[i].grid.at(y, x))
          for (int c = 0; c < 3; ++c)
            masked.at(y, x, c) = float(frames[i].at(y, x, c)) / 255.0f;
    ImageF32 crop(input_h, input_w, 3);
    for (int y = 0; y < input_h; ++y) {
      const double sy = spec.box.top + (y + 0.5) * spec.alpha_v - 0.5;
      for (int x = 0; x < input_w; ++x) {
        const double sx = spec.box.left + (x + 0.5) * spec.alpha_u - 0.5;
        for (int c = 0; c < 3; ++c)
          crop.at(y, x, c) = detail::bilinear(masked, sx, sy, c);
      }
    }
    out.crops.push_back(std::move(crop));
  }
  return out;
}

}  // namespace track6d
