#pragma once

#include <cstdlib>
#include <vector>

#include "track6d/metrics/report.hpp"
#include "track6d/plot/chart.hpp"

namespace track6d {

// Standard error-vs-frame charts built from an evaluation report. Per-axis
// charts plot signed errors, the totals plot magnitudes.
namespace detail {

inline std::vector<double> report_column(const MetricReport& r,
                                         double (*get)(const FrameMetrics&)) {
  std::vector<double> out;
  out.reserve(r.frames.size());
  for (const FrameMetrics& f : r.frames) out.push_back(get(f));
  return out;
}

inline void add_axis_series(LineChart& c, const MetricReport& r, bool rot) {
  static constexpr Color kAxisColors[3] = {palette::red, palette::green,
                                           palette::blue};
  static constexpr const char* kAxisNames[3] = {"x", "y", "z"};
  for (int a = 0; a < 3; ++a) {
    std::vector<double> col;
    col.reserve(r.frames.size());
    for (const FrameMetrics& f : r.frames)
      col.push_back(rot ? f.rot_axis_deg[std::size_t(a)]
                        : f.trans_axis_mm[std::size_t(a)]);
    c.add_series(kAxisNames[a], kAxisColors[a], std::move(col));
  }
}

}  // namespace detail

inline LineChart rotation_axis_chart(const MetricReport& r) {
  check(!r.frames.empty(), "rotation_axis_chart: empty report");
  LineChart c;
  c.title("rotation error per axis").y_label("deg").x_label("frame");
  detail::add_axis_series(c, r, true);
  return c;
}

inline LineChart translation_axis_chart(const MetricReport& r) {
  check(!r.frames.empty(), "translation_axis_chart: empty report");
  LineChart c;
  c.title("translation error per axis").y_label("mm").x_label("frame");
  detail::add_axis_series(c, r, false);
  return c;
}

inline LineChart rotation_error_chart(const MetricReport& r) {
  check(!r.frames.empty(), "rotation_error_chart: empty report");
  LineChart c;
  c.title("rotation error").y_label("deg").x_label("frame");
  c.add_series("geodesic", palette::purple,
               detail::report_column(r, [](const FrameMetrics& f) {
                 return f.rot_deg;
               }));
  return c;
}

inline LineChart translation_error_chart(const MetricReport& r) {
  check(!r.frames.empty(), "translation_error_chart: empty report");
  LineChart c;
  c.title("translation error").y_label("mm").x_label("frame");
  c.add_series("center", palette::purple,
               detail::report_column(r, [](const FrameMetrics& f) {
                 return f.trans_mm;
               }));
  return c;
}

inline LineChart add_chart(const MetricReport& r) {
  check(!r.frames.empty(), "add_chart: empty report");
  LineChart c;
  c.title("point distance error").y_label("mm").x_label("frame");
  c.add_series("add", palette::orange,
               detail::report_column(r, [](const FrameMetrics& f) {
                 return f.add_mm;
               }));
  c.add_series("add-s", palette::blue,
               detail::report_column(r, [](const FrameMetrics& f) {
                 return f.add_s_mm;
               }));
  return c;
}

}  // namespace track6d
