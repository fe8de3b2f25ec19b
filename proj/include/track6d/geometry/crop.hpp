#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "track6d/common.hpp"

namespace track6d {

// Axis-aligned pixel box; [left, left+width) x [top, top+height).
struct BBox {
  int left = 0, top = 0, width = 0, height = 0;

  int right() const { return left + width; }    // exclusive
  int bottom() const { return top + height; }   // exclusive

  bool valid() const { return width >= 1 && height >= 1; }
  long long area() const { return (long long)width * height; }

  double diagonal() const {
    return std::sqrt(double(width) * width + double(height) * height);
  }

  BBox clamped(int img_w, int img_h) const {
    const int l = std::max(left, 0);
    const int t = std::max(top, 0);
    const int r = std::min(right(), img_w);
    const int b = std::min(bottom(), img_h);
    return {l, t, r - l, b - t};
  }

  bool contains(const BBox& o) const {
    return o.left >= left && o.top >= top && o.right() <= right() &&
           o.bottom() <= bottom();
  }

  bool operator==(const BBox& o) const {
    return left == o.left && top == o.top && width == o.width &&
           height == o.height;
  }
};

inline double iou(const BBox& a, const BBox& b) {
  const int l = std::max(a.left, b.left);
  const int t = std::max(a.top, b.top);
  const int r = std::min(a.right(), b.right());
  const int btm = std::min(a.bottom(), b.bottom());
  if (r <= l || btm <= t) return 0.0;
  const double inter = double(r - l) * (btm - t);
  return inter / (double(a.area()) + double(b.area()) - inter);
}

// Crop geometry shared by every frame of a window. alpha_u/alpha_v convert
// between network-input fractions and original-image pixels:
// dU_px = du * alpha_u * input_w = du * W_crop.
struct CropSpec {
  BBox box;
  int input_w = 0;
  int input_h = 0;
  double alpha_u = 0;
  double alpha_v = 0;

  static CropSpec make(const BBox& box, int input_w, int input_h) {
    check(box.valid(), "CropSpec: degenerate box");
    check(input_w >= 1 && input_h >= 1, "CropSpec: degenerate input size");
    CropSpec c;
    c.box = box;
    c.input_w = input_w;
    c.input_h = input_h;
    c.alpha_u = double(box.width) / input_w;
    c.alpha_v = double(box.height) / input_h;
    return c;
  }
};

// Smallest box containing all input boxes, grown by margin (fraction of the
// union's width/height, per side) and clamped to the image.
inline CropSpec crop_union(const std::vector<BBox>& boxes, int input_w,
                           int input_h, double margin, int img_w, int img_h) {
  check(!boxes.empty(), "crop_union: empty box list");
  check(margin >= 0, "crop_union: negative margin");
  int l = boxes[0].left, t = boxes[0].top;
  int r = boxes[0].right(), b = boxes[0].bottom();
  for (const BBox& box : boxes) {
    check(box.valid(), "crop_union: degenerate input box");
    l = std::min(l, box.left);
    t = std::min(t, box.top);
    r = std::max(r, box.right());
    b = std::max(b, box.bottom());
  }
  const int mx = int(std::lround(margin * (r - l)));
  const int my = int(std::lround(margin * (b - t)));
  BBox u{l - mx, t - my, (r - l) + 2 * mx, (b - t) + 2 * my};
  u = u.clamped(img_w, img_h);
  check(u.valid(), "crop_union: union box degenerate after clamping");
  return CropSpec::make(u, input_w, input_h);
}

}  // namespace track6d
