#pragma once

#include <cstdint>
#include <vector>

#include "track6d/common.hpp"

namespace track6d {

// Dense H x W x C raster, row-major, channel-interleaved.
template <typename T>
struct Image {
  int height = 0;
  int width = 0;
  int channels = 0;
  std::vector<T> data;

  Image() = default;
  Image(int h, int w, int c, T fill = T(0))
      : height(h), width(w), channels(c),
        data(std::size_t(h) * w * c, fill) {
    check(h > 0 && w > 0 && c > 0, "Image: non-positive dimensions");
  }

  T& at(int y, int x, int c = 0) {
    return data[(std::size_t(y) * width + x) * channels + c];
  }
  const T& at(int y, int x, int c = 0) const {
    return data[(std::size_t(y) * width + x) * channels + c];
  }

  bool in_bounds(int y, int x) const {
    return y >= 0 && y < height && x >= 0 && x < width;
  }

  std::size_t size() const { return data.size(); }

  bool same_shape(const Image& o) const {
    return height == o.height && width == o.width && channels == o.channels;
  }

  bool operator==(const Image& o) const {
    return same_shape(o) && data == o.data;
  }
};

using ImageU8 = Image<std::uint8_t>;
using ImageU16 = Image<std::uint16_t>;
using ImageF32 = Image<float>;

}  // namespace track6d
