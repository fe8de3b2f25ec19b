#pragma once

#include <cmath>
#include <cstdint>

#include "track6d/geometry/crop.hpp"
#include "track6d/image.hpp"

namespace track6d {

// Binary occupancy grid for one frame. Values are 0/1.
struct Mask {
  Image<std::uint8_t> grid;
  int frame_index = 0;

  Mask() = default;
  Mask(int h, int w, int frame_index)
      : grid(h, w, 1), frame_index(frame_index) {}

  int count() const {
    int n = 0;
    for (std::uint8_t v : grid.data) n += (v != 0);
    return n;
  }
};

// Dense displacement field from frame from_index to frame to_index;
// channel 0 is the x displacement, channel 1 the y displacement, in pixels.
struct FlowField {
  Image<float> grid;
  int from_index = 0;
  int to_index = 0;

  FlowField() = default;
  FlowField(int h, int w, int from_index, int to_index)
      : grid(h, w, 2), from_index(from_index), to_index(to_index) {}
};

// Forward splat: every foreground pixel p lands on round(p + flow(p)).
// Targets outside the image are dropped, so the warp never creates
// foreground out of bounds. Holes from non-injective flow are accepted;
// the downstream box, not the mask boundary, is what matters.
inline Mask warp_mask(const Mask& mask, const FlowField& flow) {
  check(mask.grid.height == flow.grid.height &&
            mask.grid.width == flow.grid.width,
        "warp_mask: mask/flow shape mismatch");
  check(mask.frame_index == flow.from_index,
        "warp_mask: mask frame does not match flow source frame");
  const int h = mask.grid.height, w = mask.grid.width;
  Mask out(h, w, flow.to_index);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!mask.grid.at(y, x)) continue;
      const int tx = int(std::lround(x + double(flow.grid.at(y, x, 0))));
      const int ty = int(std::lround(y + double(flow.grid.at(y, x, 1))));
      if (out.grid.in_bounds(ty, tx)) out.grid.at(ty, tx) = 1;
    }
  }
  return out;
}

// Tight foreground box grown by pad pixels per side, clamped to the image.
inline BBox mask_to_bbox(const Mask& mask, int pad) {
  check(pad >= 0, "mask_to_bbox: negative pad");
  const int h = mask.grid.height, w = mask.grid.width;
  int min_x = w, min_y = h, max_x = -1, max_y = -1;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!mask.grid.at(y, x)) continue;
      min_x = std::min(min_x, x);
      min_y = std::min(min_y, y);
      max_x = std::max(max_x, x);
      max_y = std::max(max_y, y);
    }
  }
  if (max_x < 0)
    throw TrackingLostError(mask.frame_index, "mask_to_bbox: empty mask");
  BBox box{min_x - pad, min_y - pad, (max_x - min_x + 1) + 2 * pad,
           (max_y - min_y + 1) + 2 * pad};
  return box.clamped(w, h);
}

// Erode/dilate by a square structuring element of the given radius; used by
// the noisy refiner to model imperfect segmentation.
inline Mask morph(const Mask& mask, int radius, bool dilate) {
  if (radius <= 0) return mask;
  const int h = mask.grid.height, w = mask.grid.width;
  Mask out(h, w, mask.frame_index);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      bool hit = dilate ? false : true;
      for (int dy = -radius; dy <= radius && (dilate ? !hit : hit); ++dy) {
        for (int dx = -radius; dx <= radius; ++dx) {
          const int yy = y + dy, xx = x + dx;
          const bool v = mask.grid.in_bounds(yy, xx) && mask.grid.at(yy, xx);
          if (dilate && v) {
            hit = true;
            break;
          }
          if (!dilate && !v) {
            hit = false;
            break;
          }
        }
      }
      out.grid.at(y, x) = hit ? 1 : 0;
    }
  }
  return out;
}

}  // namespace track6d
