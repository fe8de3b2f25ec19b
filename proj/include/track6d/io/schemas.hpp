#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "track6d/io/schema.hpp"

namespace track6d {
namespace schemas {

// Schema documents for every JSON file the library writes. Composed here
// (the validator has no $ref) and mirrored byte-for-byte under docs/schemas/
// as dump(2) plus a trailing newline.
namespace detail {

inline Json num() { return {{"type", "number"}}; }
inline Json boolean() { return {{"type", "boolean"}}; }
inline Json str() { return {{"type", "string"}}; }

inline Json integer(std::int64_t minimum) {
  return {{"type", "integer"}, {"minimum", minimum}};
}

inline Json vec(int n) {
  return {{"type", "array"},
          {"minItems", n},
          {"maxItems", n},
          {"items", num()}};
}

inline Json array_of(Json item, int min_items) {
  return {{"type", "array"}, {"minItems", min_items}, {"items", std::move(item)}};
}

inline Json obj(Json properties, Json required) {
  return {{"type", "object"},
          {"additionalProperties", false},
          {"properties", std::move(properties)},
          {"required", std::move(required)}};
}

inline Json format_tag(const char* name) {
  return {{"type", "string"}, {"enum", Json::array({name})}};
}

// The format version this library reads and writes.
inline Json version_tag() {
  return {{"type", "integer"}, {"minimum", 1}, {"maximum", 1}};
}

inline Json intrinsics() {
  return obj({{"fx", num()}, {"fy", num()}, {"cx", num()}, {"cy", num()}},
             {"fx", "fy", "cx", "cy"});
}

inline Json pose_record() {
  return obj({{"frame", integer(0)}, {"R", vec(9)}, {"T", vec(3)}},
             {"frame", "R", "T"});
}

inline Json sequence_spec() {
  const Json object_cfg =
      obj({{"n_points", integer(50)},
           {"splat_radius", num()},
           {"min_half_extent", num()},
           {"max_half_extent", num()},
           {"shape",
            Json{{"type", "string"},
                 {"enum", Json::array({"mixed", "box", "ellipsoid"})}}}},
          {"n_points", "splat_radius", "min_half_extent", "max_half_extent",
           "shape"});
  const Json randomize_cfg =
      obj({{"randomize_background", boolean()},
           {"brightness_min", num()},
           {"brightness_max", num()}},
          {"randomize_background", "brightness_min", "brightness_max"});
  return obj(
      {{"protocol",
        Json{{"type", "string"},
             {"enum", Json::array({"modelnet_pair", "shapenet_video"})}}},
       {"length", integer(2)},
       {"seed", integer(0)},
       {"width", integer(8)},
       {"height", integer(8)},
       {"intrinsics", intrinsics()},
       {"object", object_cfg},
       {"randomize", randomize_cfg}},
      {"protocol", "length", "seed", "width", "height", "intrinsics", "object",
       "randomize"});
}

}  // namespace detail

inline const Json& sequence_meta() {
  static const Json s = detail::obj(
      {{"format", detail::format_tag("track6d-sequence")},
       {"version", detail::version_tag()},
       {"spec", detail::sequence_spec()},
       {"has_depth", detail::boolean()},
       {"has_masks", detail::boolean()},
       {"has_flow", detail::boolean()},
       {"has_object", detail::boolean()}},
      {"format", "version", "spec", "has_depth", "has_masks", "has_flow",
       "has_object"});
  return s;
}

inline const Json& poses_file() {
  static const Json s = detail::obj(
      {{"format", detail::format_tag("track6d-poses")},
       {"version", detail::version_tag()},
       {"poses", detail::array_of(detail::pose_record(), 1)}},
      {"format", "version", "poses"});
  return s;
}

inline const Json& object_file() {
  static const Json s = detail::obj(
      {{"format", detail::format_tag("track6d-object")},
       {"version", detail::version_tag()},
       {"object_id", detail::integer(0)},
       {"splat_radius", detail::num()},
       {"points", detail::array_of(detail::vec(3), 50)},
       {"colors", detail::array_of(detail::vec(3), 50)}},
      {"format", "version", "object_id", "splat_radius", "points", "colors"});
  return s;
}

inline const Json& dataset_manifest() {
  static const Json s = detail::obj(
      {{"format", detail::format_tag("track6d-dataset")},
       {"version", detail::version_tag()},
       {"seed", detail::integer(0)},
       {"count", detail::integer(1)},
       {"base", detail::sequence_spec()},
       {"sequences",
        detail::array_of(detail::obj({{"name", detail::str()},
                                      {"seed", detail::integer(0)}},
                                     {"name", "seed"}),
                         1)}},
      {"format", "version", "seed", "count", "base", "sequences"});
  return s;
}

inline const Json& trajectory_file() {
  static const Json s = [] {
    const Json code = detail::obj({{"du", detail::num()},
                                   {"dv", detail::num()},
                                   {"s", detail::num()},
                                   {"omega", detail::vec(3)}},
                                  {"du", "dv", "s", "omega"});
    const Json crop = detail::obj({{"left", Json{{"type", "integer"}}},
                                   {"top", Json{{"type", "integer"}}},
                                   {"width", detail::integer(1)},
                                   {"height", detail::integer(1)},
                                   {"input_w", detail::integer(1)},
                                   {"input_h", detail::integer(1)}},
                                  {"left", "top", "width", "height", "input_w",
                                   "input_h"});
    return detail::obj(
        {{"format", detail::format_tag("track6d-trajectory")},
         {"version", detail::version_tag()},
         {"run", Json{{"type", "object"}}},
         {"frames",
          detail::array_of(
              detail::obj({{"frame", detail::integer(0)},
                           {"R", detail::vec(9)},
                           {"T", detail::vec(3)},
                           {"u", detail::num()},
                           {"v", detail::num()},
                           {"z", detail::num()},
                           {"code", code},
                           {"crop", crop}},
                          {"frame", "R", "T", "u", "v", "z", "code", "crop"}),
              1)}},
        {"format", "version", "frames"});
  }();
  return s;
}

inline const Json& report_file() {
  static const Json s = [] {
    const Json metric_cfg = detail::obj(
        {{"k_deg", detail::num()},
         {"k_cm", detail::num()},
         {"add_frac", detail::num()},
         {"proj2d_px", detail::num()},
         {"auc_max_mm", detail::num()},
         {"segment_len", detail::integer(2)}},
        {"k_deg", "k_cm", "add_frac", "proj2d_px", "auc_max_mm",
         "segment_len"});
    const Json frame = detail::obj(
        {{"rot_deg", detail::num()},
         {"trans_mm", detail::num()},
         {"add_mm", detail::num()},
         {"add_s_mm", detail::num()},
         {"proj2d_px", detail::num()},
         {"rot_axis_deg", detail::vec(3)},
         {"trans_axis_mm", detail::vec(3)},
         {"correct_pose", detail::boolean()},
         {"correct_add", detail::boolean()},
         {"correct_proj2d", detail::boolean()}},
        {"rot_deg", "trans_mm", "add_mm", "add_s_mm", "proj2d_px",
         "rot_axis_deg", "trans_axis_mm", "correct_pose", "correct_add",
         "correct_proj2d"});
    const Json segment = detail::obj(
        {{"start", detail::integer(0)},
         {"last", detail::integer(0)},
         {"rot_deg", detail::num()},
         {"trans_mm", detail::num()},
         {"gt_rot_deg", detail::num()},
         {"gt_trans_mm", detail::num()}},
        {"start", "last", "rot_deg", "trans_mm", "gt_rot_deg", "gt_trans_mm"});
    const Json summary = detail::obj(
        {{"segments", detail::integer(0)},
         {"mean_rot_deg", detail::num()},
         {"mean_trans_mm", detail::num()},
         {"base_rot_deg", detail::num()},
         {"base_trans_mm", detail::num()}},
        {"segments", "mean_rot_deg", "mean_trans_mm", "base_rot_deg",
         "base_trans_mm"});
    return detail::obj(
        {{"format", detail::format_tag("track6d-report")},
         {"version", detail::version_tag()},
         {"run", Json{{"type", "object"}}},
         {"config", metric_cfg},
         {"diameter_mm", detail::num()},
         {"frames", detail::array_of(frame, 1)},
         {"mean_rot_deg", detail::num()},
         {"mean_trans_mm", detail::num()},
         {"mean_add_mm", detail::num()},
         {"mean_add_s_mm", detail::num()},
         {"mean_proj2d_px", detail::num()},
         {"frac_correct_pose", detail::num()},
         {"frac_correct_add", detail::num()},
         {"frac_correct_proj2d", detail::num()},
         {"auc_add", detail::num()},
         {"auc_add_s", detail::num()},
         {"segments", detail::array_of(segment, 0)},
         {"segment_summary", summary}},
        {"format", "version", "config", "diameter_mm", "frames",
         "mean_rot_deg", "mean_trans_mm", "mean_add_mm", "mean_add_s_mm",
         "mean_proj2d_px", "frac_correct_pose", "frac_correct_add",
         "frac_correct_proj2d", "auc_add", "auc_add_s", "segments",
         "segment_summary"});
  }();
  return s;
}

// Name -> schema, for the docs mirror and its sync test.
inline std::vector<std::pair<std::string, const Json*>> all() {
  return {{"sequence_meta", &sequence_meta()},
          {"poses", &poses_file()},
          {"object", &object_file()},
          {"dataset_manifest", &dataset_manifest()},
          {"trajectory", &trajectory_file()},
          {"report", &report_file()}};
}

}  // namespace schemas
}  // namespace track6d
