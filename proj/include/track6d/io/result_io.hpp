#pragma once

#include <filesystem>
#include <string>

#include "track6d/io/schemas.hpp"
#include "track6d/metrics/report.hpp"
#include "track6d/tracker/tracker.hpp"

namespace track6d {

// The optional "run" object carried by trajectory and report files is an
// opaque slot for run provenance (effective command-line config and the
// like); it round-trips untouched and is never interpreted here.
inline Json trajectory_to_json(const Trajectory& t, const Json& run = {}) {
  Json frames = Json::array();
  for (std::size_t i = 0; i < t.frames.size(); ++i) {
    const TrackedFrame& f = t.frames[i];
    Json rec = pose_to_json(f.pose, int(i));
    rec["u"] = f.u;
    rec["v"] = f.v;
    rec["z"] = f.z;
    rec["code"] = Json{{"du", f.code.du},
                       {"dv", f.code.dv},
                       {"s", f.code.s},
                       {"omega", Json::array({f.code.omega.x(),
                                              f.code.omega.y(),
                                              f.code.omega.z()})}};
    // alpha_u/alpha_v are derived, so only the box and input size are stored
    rec["crop"] = Json{{"left", f.crop.box.left},
                       {"top", f.crop.box.top},
                       {"width", f.crop.box.width},
                       {"height", f.crop.box.height},
                       {"input_w", f.crop.input_w},
                       {"input_h", f.crop.input_h}};
    frames.push_back(std::move(rec));
  }
  Json j{{"format", "track6d-trajectory"},
         {"version", 1},
         {"frames", std::move(frames)}};
  if (run.is_object()) j["run"] = run;
  return j;
}

inline Trajectory trajectory_from_json(const Json& j) {
  Trajectory t;
  const Json& frames = j.at("frames");
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const Json& rec = frames.at(i);
    if (rec.at("frame").get<int>() != int(i))
      throw ValidationError("trajectory: frames are not consecutive from 0");
    TrackedFrame f;
    f.pose = pose_from_json(rec);
    f.u = rec.at("u").get<double>();
    f.v = rec.at("v").get<double>();
    f.z = rec.at("z").get<double>();
    const Json& code = rec.at("code");
    f.code.du = code.at("du").get<double>();
    f.code.dv = code.at("dv").get<double>();
    f.code.s = code.at("s").get<double>();
    for (int a = 0; a < 3; ++a)
      f.code.omega[a] = code.at("omega").at(std::size_t(a)).get<double>();
    const Json& crop = rec.at("crop");
    f.crop = CropSpec::make(BBox{crop.at("left").get<int>(),
                                 crop.at("top").get<int>(),
                                 crop.at("width").get<int>(),
                                 crop.at("height").get<int>()},
                            crop.at("input_w").get<int>(),
                            crop.at("input_h").get<int>());
    t.frames.push_back(std::move(f));
  }
  t.validate();
  return t;
}

inline void save_trajectory(const std::filesystem::path& path,
                            const Trajectory& t, const Json& run = {}) {
  save_json(path.string(), trajectory_to_json(t, run));
}

inline Trajectory load_trajectory(const std::filesystem::path& path) {
  return trajectory_from_json(
      load_validated(path, schemas::trajectory_file()));
}

inline Json to_json(const MetricConfig& c) {
  return Json{{"k_deg", c.k_deg},
              {"k_cm", c.k_cm},
              {"add_frac", c.add_frac},
              {"proj2d_px", c.proj2d_px},
              {"auc_max_mm", c.auc_max_mm},
              {"segment_len", c.segment_len}};
}

inline MetricConfig metric_config_from_json(const Json& j) {
  MetricConfig c;
  c.k_deg = j.at("k_deg").get<double>();
  c.k_cm = j.at("k_cm").get<double>();
  c.add_frac = j.at("add_frac").get<double>();
  c.proj2d_px = j.at("proj2d_px").get<double>();
  c.auc_max_mm = j.at("auc_max_mm").get<double>();
  c.segment_len = j.at("segment_len").get<int>();
  c.validate();
  return c;
}

inline Json report_to_json(const MetricReport& r, const Json& run = {}) {
  Json frames = Json::array();
  for (const FrameMetrics& f : r.frames)
    frames.push_back(Json{
        {"rot_deg", f.rot_deg},
        {"trans_mm", f.trans_mm},
        {"add_mm", f.add_mm},
        {"add_s_mm", f.add_s_mm},
        {"proj2d_px", f.proj2d_px},
        {"rot_axis_deg",
         Json::array({f.rot_axis_deg[0], f.rot_axis_deg[1], f.rot_axis_deg[2]})},
        {"trans_axis_mm",
         Json::array(
             {f.trans_axis_mm[0], f.trans_axis_mm[1], f.trans_axis_mm[2]})},
        {"correct_pose", f.correct_pose},
        {"correct_add", f.correct_add},
        {"correct_proj2d", f.correct_proj2d}});
  Json segments = Json::array();
  for (const SegmentError& e : r.segments)
    segments.push_back(Json{{"start", e.start},
                            {"last", e.last},
                            {"rot_deg", e.rot_deg},
                            {"trans_mm", e.trans_mm},
                            {"gt_rot_deg", e.gt_rot_deg},
                            {"gt_trans_mm", e.gt_trans_mm}});
  Json j{{"format", "track6d-report"},
         {"version", 1},
         {"config", to_json(r.config)},
         {"diameter_mm", r.diameter_mm},
         {"frames", std::move(frames)},
         {"mean_rot_deg", r.mean_rot_deg},
         {"mean_trans_mm", r.mean_trans_mm},
         {"mean_add_mm", r.mean_add_mm},
         {"mean_add_s_mm", r.mean_add_s_mm},
         {"mean_proj2d_px", r.mean_proj2d_px},
         {"frac_correct_pose", r.frac_correct_pose},
         {"frac_correct_add", r.frac_correct_add},
         {"frac_correct_proj2d", r.frac_correct_proj2d},
         {"auc_add", r.auc_add},
         {"auc_add_s", r.auc_add_s},
         {"segments", std::move(segments)},
         {"segment_summary",
          Json{{"segments", r.segment_summary.segments},
               {"mean_rot_deg", r.segment_summary.mean_rot_deg},
               {"mean_trans_mm", r.segment_summary.mean_trans_mm},
               {"base_rot_deg", r.segment_summary.base_rot_deg},
               {"base_trans_mm", r.segment_summary.base_trans_mm}}}};
  if (run.is_object()) j["run"] = run;
  return j;
}

inline MetricReport report_from_json(const Json& j) {
  MetricReport r;
  r.config = metric_config_from_json(j.at("config"));
  r.diameter_mm = j.at("diameter_mm").get<double>();
  for (const Json& rec : j.at("frames")) {
    FrameMetrics f;
    f.rot_deg = rec.at("rot_deg").get<double>();
    f.trans_mm = rec.at("trans_mm").get<double>();
    f.add_mm = rec.at("add_mm").get<double>();
    f.add_s_mm = rec.at("add_s_mm").get<double>();
    f.proj2d_px = rec.at("proj2d_px").get<double>();
    for (int a = 0; a < 3; ++a) {
      f.rot_axis_deg[std::size_t(a)] =
          rec.at("rot_axis_deg").at(std::size_t(a)).get<double>();
      f.trans_axis_mm[std::size_t(a)] =
          rec.at("trans_axis_mm").at(std::size_t(a)).get<double>();
    }
    f.correct_pose = rec.at("correct_pose").get<bool>();
    f.correct_add = rec.at("correct_add").get<bool>();
    f.correct_proj2d = rec.at("correct_proj2d").get<bool>();
    r.frames.push_back(f);
  }
  for (const Json& rec : j.at("segments")) {
    SegmentError e;
    e.start = rec.at("start").get<int>();
    e.last = rec.at("last").get<int>();
    e.rot_deg = rec.at("rot_deg").get<double>();
    e.trans_mm = rec.at("trans_mm").get<double>();
    e.gt_rot_deg = rec.at("gt_rot_deg").get<double>();
    e.gt_trans_mm = rec.at("gt_trans_mm").get<double>();
    r.segments.push_back(e);
  }
  r.mean_rot_deg = j.at("mean_rot_deg").get<double>();
  r.mean_trans_mm = j.at("mean_trans_mm").get<double>();
  r.mean_add_mm = j.at("mean_add_mm").get<double>();
  r.mean_add_s_mm = j.at("mean_add_s_mm").get<double>();
  r.mean_proj2d_px = j.at("mean_proj2d_px").get<double>();
  r.frac_correct_pose = j.at("frac_correct_pose").get<double>();
  r.frac_correct_add = j.at("frac_correct_add").get<double>();
  r.frac_correct_proj2d = j.at("frac_correct_proj2d").get<double>();
  r.auc_add = j.at("auc_add").get<double>();
  r.auc_add_s = j.at("auc_add_s").get<double>();
  const Json& s = j.at("segment_summary");
  r.segment_summary.segments = s.at("segments").get<int>();
  r.segment_summary.mean_rot_deg = s.at("mean_rot_deg").get<double>();
  r.segment_summary.mean_trans_mm = s.at("mean_trans_mm").get<double>();
  r.segment_summary.base_rot_deg = s.at("base_rot_deg").get<double>();
  r.segment_summary.base_trans_mm = s.at("base_trans_mm").get<double>();
  return r;
}

inline void save_report(const std::filesystem::path& path,
                        const MetricReport& r, const Json& run = {}) {
  save_json(path.string(), report_to_json(r, run));
}

inline MetricReport load_report(const std::filesystem::path& path) {
  return report_from_json(load_validated(path, schemas::report_file()));
}

}  // namespace track6d
