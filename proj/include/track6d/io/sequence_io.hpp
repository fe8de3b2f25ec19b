#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "track6d/io/png_io.hpp"
#include "track6d/io/schemas.hpp"
#include "track6d/synth/sequence.hpp"

namespace track6d {

inline const char* to_string(ObjectShape s) {
  switch (s) {
    case ObjectShape::box: return "box";
    case ObjectShape::ellipsoid: return "ellipsoid";
    default: return "mixed";
  }
}

inline ObjectShape object_shape_from_string(const std::string& s) {
  if (s == "mixed") return ObjectShape::mixed;
  if (s == "box") return ObjectShape::box;
  if (s == "ellipsoid") return ObjectShape::ellipsoid;
  throw ValidationError("unknown object shape: " + s);
}

inline Json to_json(const ObjectConfig& c) {
  return Json{{"n_points", c.n_points},
              {"splat_radius", c.splat_radius},
              {"min_half_extent", c.min_half_extent},
              {"max_half_extent", c.max_half_extent},
              {"shape", to_string(c.shape)}};
}

inline ObjectConfig object_config_from_json(const Json& j) {
  ObjectConfig c;
  c.n_points = j.at("n_points").get<int>();
  c.splat_radius = j.at("splat_radius").get<double>();
  c.min_half_extent = j.at("min_half_extent").get<double>();
  c.max_half_extent = j.at("max_half_extent").get<double>();
  c.shape = object_shape_from_string(j.at("shape").get<std::string>());
  return c;
}

inline Json to_json(const RandomizeConfig& c) {
  return Json{{"randomize_background", c.randomize_background},
              {"brightness_min", c.brightness_min},
              {"brightness_max", c.brightness_max}};
}

inline RandomizeConfig randomize_config_from_json(const Json& j) {
  RandomizeConfig c;
  c.randomize_background = j.at("randomize_background").get<bool>();
  c.brightness_min = j.at("brightness_min").get<double>();
  c.brightness_max = j.at("brightness_max").get<double>();
  return c;
}

inline Json to_json(const SequenceSpec& s) {
  return Json{{"protocol", to_string(s.protocol)},
              {"length", s.length},
              {"seed", s.seed},
              {"width", s.width},
              {"height", s.height},
              {"intrinsics", intrinsics_to_json(s.intrinsics)},
              {"object", to_json(s.object)},
              {"randomize", to_json(s.randomize)}};
}

inline SequenceSpec sequence_spec_from_json(const Json& j) {
  SequenceSpec s;
  s.protocol = protocol_from_string(j.at("protocol").get<std::string>());
  s.length = j.at("length").get<int>();
  s.seed = j.at("seed").get<std::uint64_t>();
  s.width = j.at("width").get<int>();
  s.height = j.at("height").get<int>();
  s.intrinsics = intrinsics_from_json(j.at("intrinsics"));
  s.object = object_config_from_json(j.at("object"));
  s.randomize = randomize_config_from_json(j.at("randomize"));
  s.validate();
  return s;
}

inline Json object_to_json(const SceneObject& obj) {
  Json points = Json::array();
  Json colors = Json::array();
  for (const auto& p : obj.points)
    points.push_back(Json::array({p.x(), p.y(), p.z()}));
  // float -> double is exact, so colors survive the round trip bit-for-bit
  for (const auto& c : obj.colors)
    colors.push_back(Json::array({double(c.x()), double(c.y()), double(c.z())}));
  return Json{{"format", "track6d-object"},
              {"version", 1},
              {"object_id", obj.object_id},
              {"splat_radius", obj.splat_radius},
              {"points", std::move(points)},
              {"colors", std::move(colors)}};
}

inline SceneObject object_from_json(const Json& j) {
  SceneObject obj;
  obj.object_id = j.at("object_id").get<int>();
  obj.splat_radius = j.at("splat_radius").get<double>();
  for (const auto& p : j.at("points"))
    obj.points.emplace_back(p.at(0).get<double>(), p.at(1).get<double>(),
                            p.at(2).get<double>());
  for (const auto& c : j.at("colors"))
    obj.colors.emplace_back(float(c.at(0).get<double>()),
                            float(c.at(1).get<double>()),
                            float(c.at(2).get<double>()));
  obj.validate();
  return obj;
}

namespace detail {

constexpr char kFlowMagic[4] = {'T', '6', 'D', 'F'};
constexpr std::uint32_t kFlowVersion = 1;

inline std::string frame_name(int i) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%06d", i);
  return buf;
}

}  // namespace detail

// Dense flow as a little raw archive: magic, version, h, w, from, to, then
// the float32 grid (x/y displacement interleaved, row-major).
inline void write_flow_bin(const std::string& path, const FlowField& f) {
  check(f.grid.channels == 2, "write_flow_bin: flow must have 2 channels");
  const std::string tmp = path + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError(path, "cannot open for writing");
    os.write(detail::kFlowMagic, 4);
    const std::int32_t head[5] = {std::int32_t(detail::kFlowVersion),
                                  f.grid.height, f.grid.width, f.from_index,
                                  f.to_index};
    os.write(reinterpret_cast<const char*>(head), sizeof(head));
    os.write(reinterpret_cast<const char*>(f.grid.data.data()),
             std::streamsize(f.grid.data.size() * sizeof(float)));
    if (!os) throw IoError(path, "write failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError(path, "rename failed: " + ec.message());
}

inline FlowField read_flow_bin(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError(path, "cannot open");
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, detail::kFlowMagic, 4) != 0)
    throw IoError(path, "not a flow file");
  std::int32_t head[5];
  is.read(reinterpret_cast<char*>(head), sizeof(head));
  if (!is) throw IoError(path, "truncated header");
  if (std::uint32_t(head[0]) != detail::kFlowVersion)
    throw IoError(path, "unsupported flow version " + std::to_string(head[0]));
  if (head[1] < 1 || head[2] < 1) throw IoError(path, "bad flow dimensions");
  FlowField f(head[1], head[2], head[3], head[4]);
  is.read(reinterpret_cast<char*>(f.grid.data.data()),
          std::streamsize(f.grid.data.size() * sizeof(float)));
  if (!is) throw IoError(path, "truncated flow data");
  return f;
}

struct SequenceWriteOptions {
  bool depth = true;
  bool masks = true;
  bool flow = true;
};

// Directory layout: frames/NNNNNN.png (RGB), depth/NNNNNN.png (16-bit gray,
// whole millimeters, 0 = no surface), masks/NNNNNN.png (0/255), flow/NNNNNN.bin
// (named by source frame), object.json, poses.json, and meta.json. meta.json
// is written last; its presence marks the directory complete.
inline void write_sequence(const std::filesystem::path& dir,
                           const SyntheticSequence& seq,
                           const SequenceWriteOptions& opt = {}) {
  seq.spec.validate();
  check(int(seq.frames.size()) == seq.spec.length,
        "write_sequence: frame count does not match the spec");
  std::filesystem::create_directories(dir / "frames");
  if (opt.depth) std::filesystem::create_directories(dir / "depth");
  if (opt.masks) std::filesystem::create_directories(dir / "masks");
  if (opt.flow) std::filesystem::create_directories(dir / "flow");

  const int n = int(seq.frames.size());
  for (int i = 0; i < n; ++i) {
    const RenderedFrame& f = seq.frames[i];
    const std::string name = detail::frame_name(i) + ".png";
    write_png_rgb8((dir / "frames" / name).string(), f.image);

    if (opt.depth) {
      ImageU16 d(f.depth.height, f.depth.width, 1);
      for (std::size_t p = 0; p < f.depth.data.size(); ++p) {
        const double mm = std::clamp(double(f.depth.data[p]), 0.0, 65535.0);
        d.data[p] = std::uint16_t(std::lround(mm));
      }
      write_png_gray16((dir / "depth" / name).string(), d);
    }
    if (opt.masks) {
      ImageU8 m(f.instance_mask.grid.height, f.instance_mask.grid.width, 1);
      for (std::size_t p = 0; p < m.data.size(); ++p)
        m.data[p] = f.instance_mask.grid.data[p] ? 255 : 0;
      write_png_gray8((dir / "masks" / name).string(), m);
    }
    if (opt.flow && i + 1 < n) {
      check(f.gt_flow_to_next.has_value(), "write_sequence: missing flow");
      write_flow_bin((dir / "flow" / (detail::frame_name(i) + ".bin")).string(),
                     *f.gt_flow_to_next);
    }
  }

  save_json((dir / "object.json").string(), object_to_json(seq.object));

  Json poses = Json::array();
  for (int i = 0; i < n; ++i)
    poses.push_back(pose_to_json(seq.frames[std::size_t(i)].gt_pose, i));
  save_json((dir / "poses.json").string(),
            Json{{"format", "track6d-poses"},
                 {"version", 1},
                 {"poses", std::move(poses)}});

  save_json((dir / "meta.json").string(),
            Json{{"format", "track6d-sequence"},
                 {"version", 1},
                 {"spec", to_json(seq.spec)},
                 {"has_depth", opt.depth},
                 {"has_masks", opt.masks},
                 {"has_flow", opt.flow},
                 {"has_object", true}});
}

// A sequence reloaded from disk. Depth is in millimeters again (0 = empty),
// quantized to whole millimeters by the 16-bit store.
struct LoadedSequence {
  SequenceSpec spec;
  std::vector<ImageU8> images;
  std::vector<Pose> poses;
  std::vector<Image<float>> depths;
  std::vector<Mask> masks;
  std::vector<FlowField> flows;
  SceneObject object;
  bool has_depth = false;
  bool has_masks = false;
  bool has_flow = false;
  bool has_object = false;
};

inline LoadedSequence read_sequence(const std::filesystem::path& dir) {
  const Json meta =
      load_validated(dir / "meta.json", schemas::sequence_meta());
  LoadedSequence out;
  out.spec = sequence_spec_from_json(meta.at("spec"));
  out.has_depth = meta.at("has_depth").get<bool>();
  out.has_masks = meta.at("has_masks").get<bool>();
  out.has_flow = meta.at("has_flow").get<bool>();
  out.has_object = meta.at("has_object").get<bool>();
  const int n = out.spec.length;

  const Json poses = load_validated(dir / "poses.json", schemas::poses_file());
  const Json& recs = poses.at("poses");
  if (int(recs.size()) != n)
    throw ValidationError((dir / "poses.json").string() +
                          ": pose count does not match the spec length");
  for (int i = 0; i < n; ++i) {
    const Json& rec = recs.at(std::size_t(i));
    if (rec.at("frame").get<int>() != i)
      throw ValidationError((dir / "poses.json").string() +
                            ": frames are not consecutive from 0");
    out.poses.push_back(pose_from_json(rec));
  }

  for (int i = 0; i < n; ++i) {
    const std::string name = detail::frame_name(i) + ".png";
    ImageU8 img = read_png_rgb8((dir / "frames" / name).string());
    if (img.width != out.spec.width || img.height != out.spec.height)
      throw ValidationError((dir / "frames" / name).string() +
                            ": image size does not match the spec");
    out.images.push_back(std::move(img));

    if (out.has_depth) {
      const ImageU16 d16 = read_png_gray16((dir / "depth" / name).string());
      Image<float> d(d16.height, d16.width, 1);
      for (std::size_t p = 0; p < d.data.size(); ++p)
        d.data[p] = float(d16.data[p]);
      out.depths.push_back(std::move(d));
    }
    if (out.has_masks) {
      const ImageU8 m8 = read_png_gray8((dir / "masks" / name).string());
      Mask m(m8.height, m8.width, i);
      for (std::size_t p = 0; p < m8.data.size(); ++p)
        m.grid.data[p] = m8.data[p] >= 128 ? 1 : 0;
      out.masks.push_back(std::move(m));
    }
    if (out.has_flow && i + 1 < n) {
      FlowField f =
          read_flow_bin((dir / "flow" / (detail::frame_name(i) + ".bin")).string());
      if (f.grid.width != out.spec.width || f.grid.height != out.spec.height ||
          f.from_index != i || f.to_index != i + 1)
        throw ValidationError((dir / "flow" / detail::frame_name(i)).string() +
                              ".bin: flow header does not match the sequence");
      out.flows.push_back(std::move(f));
    }
  }

  if (out.has_object)
    out.object = object_from_json(
        load_validated(dir / "object.json", schemas::object_file()));
  return out;
}

}  // namespace track6d
