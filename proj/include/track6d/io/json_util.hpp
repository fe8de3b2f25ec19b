#pragma once

#include <filesystem>
#include <fstream>
#include <string>

#include "json.hpp"
#include "track6d/geometry/camera.hpp"
#include "track6d/geometry/pose.hpp"
#include "track6d/geometry/rotation.hpp"

namespace track6d {

using Json = nlohmann::json;

inline Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path, "cannot open");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw IoError(path, e.what());
  }
}

// Crash-safe single-file write: the content lands under a temporary name and
// is renamed into place, so readers never observe a half-written file.
inline void atomic_write_text(const std::string& path,
                              const std::string& text) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(path, "cannot open for writing");
    out << text;
    if (!out) throw IoError(path, "write failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError(path, "rename failed: " + ec.message());
}

// nlohmann serializes doubles with shortest-round-trip decimals, so every
// value reloads bit-exact.
inline void save_json(const std::string& path, const Json& j) {
  atomic_write_text(path, j.dump(2) + "\n");
}

inline Json pose_to_json(const Pose& p, int frame) {
  Json r = Json::array();
  for (int row = 0; row < 3; ++row)
    for (int col = 0; col < 3; ++col) r.push_back(p.R(row, col));
  return Json{{"frame", frame},
              {"R", std::move(r)},
              {"T", Json::array({p.T.x(), p.T.y(), p.T.z()})}};
}

inline Pose pose_from_json(const Json& j) {
  Pose p;
  const auto& r = j.at("R");
  for (int row = 0; row < 3; ++row)
    for (int col = 0; col < 3; ++col)
      p.R(row, col) = r.at(std::size_t(row * 3 + col)).get<double>();
  if (!is_rotation(p.R, 1e-6))
    throw ValidationError("pose record: R is not orthonormal within 1e-6");
  const auto& t = j.at("T");
  for (int i = 0; i < 3; ++i) p.T[i] = t.at(std::size_t(i)).get<double>();
  return p;
}

inline Json intrinsics_to_json(const CameraIntrinsics& k) {
  return Json{{"fx", k.fx}, {"fy", k.fy}, {"cx", k.cx}, {"cy", k.cy}};
}

inline CameraIntrinsics intrinsics_from_json(const Json& j) {
  CameraIntrinsics k;
  k.fx = j.at("fx").get<double>();
  k.fy = j.at("fy").get<double>();
  k.cx = j.at("cx").get<double>();
  k.cy = j.at("cy").get<double>();
  k.validate();
  return k;
}

}  // namespace track6d
