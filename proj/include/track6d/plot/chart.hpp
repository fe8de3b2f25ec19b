#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

#include "track6d/geometry/crop.hpp"
#include "track6d/image.hpp"
#include "track6d/plot/font5x7.hpp"

namespace track6d {

struct Color {
  std::uint8_t r = 0, g = 0, b = 0;
};

namespace palette {
inline constexpr Color blue{31, 119, 180};
inline constexpr Color orange{255, 127, 14};
inline constexpr Color green{44, 160, 44};
inline constexpr Color red{214, 39, 40};
inline constexpr Color purple{148, 103, 189};
inline constexpr Color ink{40, 40, 40};
inline constexpr Color grid{222, 222, 222};
inline constexpr Color paper{255, 255, 255};
}  // namespace palette

// Integer-raster RGB drawing surface. Everything is plain pixel arithmetic,
// so a given draw sequence produces the same bytes on every run.
class Canvas {
 public:
  Canvas(int w, int h, Color bg) : img_(h, w, 3) {
    check(w >= 1 && h >= 1, "Canvas: degenerate size");
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) set(x, y, bg);
  }

  int width() const { return img_.width; }
  int height() const { return img_.height; }

  void set(int x, int y, Color c) {
    if (x < 0 || y < 0 || x >= img_.width || y >= img_.height) return;
    img_.at(y, x, 0) = c.r;
    img_.at(y, x, 1) = c.g;
    img_.at(y, x, 2) = c.b;
  }

  void fill_rect(int x, int y, int w, int h, Color c) {
    for (int yy = y; yy < y + h; ++yy)
      for (int xx = x; xx < x + w; ++xx) set(xx, yy, c);
  }

  // Bresenham; endpoints included.
  void line(int x0, int y0, int x1, int y1, Color c) {
    const int dx = std::abs(x1 - x0), sx = x0 < x1 ? 1 : -1;
    const int dy = -std::abs(y1 - y0), sy = y0 < y1 ? 1 : -1;
    int err = dx + dy;
    while (true) {
      set(x0, y0, c);
      if (x0 == x1 && y0 == y1) break;
      const int e2 = 2 * err;
      if (e2 >= dy) {
        err += dy;
        x0 += sx;
      }
      if (e2 <= dx) {
        err += dx;
        y0 += sy;
      }
    }
  }

  void text(int x, int y, const std::string& s, Color c, int scale = 1) {
    int cx = x;
    for (const char ch : s) {
      const Glyph5x7& g = glyph5x7(ch);
      for (int row = 0; row < 7; ++row)
        for (int col = 0; col < 5; ++col) {
          if (!((g[std::size_t(row)] >> (4 - col)) & 1)) continue;
          fill_rect(cx + col * scale, y + row * scale, scale, scale, c);
        }
      cx += 6 * scale;
    }
  }

  static int text_width(const std::string& s, int scale = 1) {
    return s.empty() ? 0 : int(s.size()) * 6 * scale - scale;
  }

  const ImageU8& image() const { return img_; }
  ImageU8 take() { return std::move(img_); }

 private:
  ImageU8 img_;
};

namespace detail {

inline std::string fmt_g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

// Tick step of the form {1,2,5} * 10^k close to range/target.
inline double nice_step(double range, int target) {
  const double raw = range / std::max(1, target);
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double norm = raw / mag;
  const double n = norm < 1.5 ? 1 : norm < 3.5 ? 2 : norm < 7.5 ? 5 : 10;
  return n * mag;
}

inline std::vector<double> ticks(double lo, double hi, int target) {
  const double step = nice_step(hi - lo, target);
  std::vector<double> out;
  for (double v = std::ceil(lo / step) * step; v <= hi + 1e-9 * step;
       v += step)
    out.push_back(std::abs(v) < 1e-12 * step ? 0.0 : v);
  return out;
}

}  // namespace detail

// Multi-series line chart with axes, ticks, grid, and a legend. Output is a
// plain RGB image; rendering the same chart twice gives identical bytes.
class LineChart {
 public:
  LineChart& title(std::string t) {
    title_ = std::move(t);
    return *this;
  }
  LineChart& x_label(std::string t) {
    x_label_ = std::move(t);
    return *this;
  }
  LineChart& y_label(std::string t) {
    y_label_ = std::move(t);
    return *this;
  }

  // Overrides the y range computed from the data.
  LineChart& y_range(double lo, double hi) {
    check(lo < hi, "LineChart: empty y range");
    y_lo_ = lo;
    y_hi_ = hi;
    forced_y_ = true;
    return *this;
  }

  LineChart& add_series(std::string label, Color color, std::vector<double> y) {
    std::vector<double> x(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) x[i] = double(i);
    return add_series(std::move(label), color, std::move(x), std::move(y));
  }

  LineChart& add_series(std::string label, Color color, std::vector<double> x,
                        std::vector<double> y) {
    check(!y.empty(), "LineChart: empty series");
    check(x.size() == y.size(), "LineChart: x/y size mismatch");
    for (std::size_t i = 0; i < y.size(); ++i)
      check(std::isfinite(x[i]) && std::isfinite(y[i]),
            "LineChart: non-finite sample");
    series_.push_back({std::move(label), color, std::move(x), std::move(y)});
    return *this;
  }

  int series_count() const { return int(series_.size()); }

  // Inner plotting area for a given output size; exposed so callers can
  // reason about where data pixels may land.
  BBox inner_rect(int w, int h) const {
    check(w >= 160 && h >= 120, "LineChart: output too small");
    check(!series_.empty(), "LineChart: no series");
    const Bounds b = bounds();
    int label_w = 0;
    for (const double v : detail::ticks(b.y_lo, b.y_hi, 5))
      label_w = std::max(label_w, Canvas::text_width(detail::fmt_g(v)));
    const int top = 6 + (title_.empty() ? 0 : 14) + (y_label_.empty() ? 0 : 12);
    const int bottom = 6 + 10 + (x_label_.empty() ? 0 : 12);
    const int left = 6 + label_w + 4;
    const int right = 14;
    BBox inner{left, top, w - left - right, h - top - bottom};
    check(inner.width >= 16 && inner.height >= 16,
          "LineChart: margins leave no plotting area");
    return inner;
  }

  ImageU8 render(int w, int h) const {
    const BBox inner = inner_rect(w, h);
    const Bounds b = bounds();
    Canvas cv(w, h, palette::paper);

    const auto map_x = [&](double v) {
      const double f = (v - b.x_lo) / (b.x_hi - b.x_lo);
      return inner.left + int(std::lround(f * (inner.width - 1)));
    };
    const auto map_y = [&](double v) {
      const double f = (v - b.y_lo) / (b.y_hi - b.y_lo);
      return inner.top + inner.height - 1 -
             int(std::lround(f * (inner.height - 1)));
    };
    const auto clamp_pt = [&](int& x, int& y) {
      x = std::clamp(x, inner.left, inner.right() - 1);
      y = std::clamp(y, inner.top, inner.bottom() - 1);
    };

    for (const double v : detail::ticks(b.x_lo, b.x_hi, 6)) {
      const int x = map_x(v);
      cv.line(x, inner.top, x, inner.bottom() - 1, palette::grid);
      const std::string s = detail::fmt_g(v);
      cv.text(x - Canvas::text_width(s) / 2, inner.bottom() + 4, s,
              palette::ink);
    }
    for (const double v : detail::ticks(b.y_lo, b.y_hi, 5)) {
      const int y = map_y(v);
      cv.line(inner.left, y, inner.right() - 1, y, palette::grid);
      const std::string s = detail::fmt_g(v);
      cv.text(inner.left - 4 - Canvas::text_width(s), y - 3, s, palette::ink);
    }

    cv.line(inner.left, inner.top, inner.left, inner.bottom() - 1,
            palette::ink);
    cv.line(inner.left, inner.bottom() - 1, inner.right() - 1,
            inner.bottom() - 1, palette::ink);

    if (!title_.empty())
      cv.text((w - Canvas::text_width(title_)) / 2, 4, title_, palette::ink);
    if (!y_label_.empty())
      cv.text(inner.left, inner.top - 10, y_label_, palette::ink);
    if (!x_label_.empty())
      cv.text(inner.left + (inner.width - Canvas::text_width(x_label_)) / 2,
              h - 13, x_label_, palette::ink);

    for (const Series& s : series_) {
      int px = 0, py = 0;
      for (std::size_t i = 0; i < s.y.size(); ++i) {
        int x = map_x(s.x[i]);
        int y = map_y(s.y[i]);
        clamp_pt(x, y);
        if (i == 0)
          cv.set(x, y, s.color);
        else
          cv.line(px, py, x, y, s.color);
        px = x;
        py = y;
      }
    }

    draw_legend(cv, inner);
    return cv.take();
  }

 private:
  struct Series {
    std::string label;
    Color color;
    std::vector<double> x, y;
  };

  struct Bounds {
    double x_lo = 0, x_hi = 1, y_lo = 0, y_hi = 1;
  };

  Bounds bounds() const {
    Bounds b;
    b.x_lo = b.y_lo = std::numeric_limits<double>::infinity();
    b.x_hi = b.y_hi = -std::numeric_limits<double>::infinity();
    for (const Series& s : series_) {
      for (const double v : s.x) {
        b.x_lo = std::min(b.x_lo, v);
        b.x_hi = std::max(b.x_hi, v);
      }
      for (const double v : s.y) {
        b.y_lo = std::min(b.y_lo, v);
        b.y_hi = std::max(b.y_hi, v);
      }
    }
    if (b.x_lo == b.x_hi) {
      b.x_lo -= 1;
      b.x_hi += 1;
    }
    if (forced_y_) {
      b.y_lo = y_lo_;
      b.y_hi = y_hi_;
    } else {
      if (b.y_lo == b.y_hi) {
        const double pad = std::max(1.0, std::abs(b.y_lo) * 0.1);
        b.y_lo -= pad;
        b.y_hi += pad;
      } else {
        const double pad = 0.05 * (b.y_hi - b.y_lo);
        b.y_lo -= pad;
        b.y_hi += pad;
      }
    }
    return b;
  }

  void draw_legend(Canvas& cv, const BBox& inner) const {
    int label_w = 0, rows = 0;
    for (const Series& s : series_) {
      if (s.label.empty()) continue;
      label_w = std::max(label_w, Canvas::text_width(s.label));
      ++rows;
    }
    if (rows == 0) return;
    const int box_w = 3 + 12 + 3 + label_w + 3;
    const int box_h = 3 + rows * 10;
    const int bx = inner.right() - 3 - box_w;
    const int by = inner.top + 3;
    cv.fill_rect(bx, by, box_w, box_h, palette::paper);
    cv.line(bx, by, bx + box_w - 1, by, palette::grid);
    cv.line(bx, by + box_h - 1, bx + box_w - 1, by + box_h - 1, palette::grid);
    cv.line(bx, by, bx, by + box_h - 1, palette::grid);
    cv.line(bx + box_w - 1, by, bx + box_w - 1, by + box_h - 1, palette::grid);
    int row = 0;
    for (const Series& s : series_) {
      if (s.label.empty()) continue;
      const int ty = by + 3 + row * 10;
      cv.line(bx + 3, ty + 3, bx + 3 + 11, ty + 3, s.color);
      cv.text(bx + 3 + 12 + 3, ty, s.label, palette::ink);
      ++row;
    }
  }

  std::string title_, x_label_, y_label_;
  std::vector<Series> series_;
  double y_lo_ = 0, y_hi_ = 1;
  bool forced_y_ = false;
};

}  // namespace track6d
