#pragma once

#include <optional>
#include <vector>

#include "track6d/geometry/camera.hpp"
#include "track6d/geometry/pose.hpp"
#include "track6d/image.hpp"
#include "track6d/segmask/mask.hpp"
#include "track6d/synth/object.hpp"

namespace track6d {

enum class BackgroundKind { solid, gradient, noise };

struct RenderOptions {
  BackgroundKind background = BackgroundKind::solid;
  Eigen::Vector3f bg_color_a = Eigen::Vector3f(0.1f, 0.1f, 0.12f);
  Eigen::Vector3f bg_color_b = Eigen::Vector3f(0.3f, 0.3f, 0.35f);
  std::uint64_t noise_seed = 0;
  double brightness = 1.0;
  double z_near = 1.0;  // mm
};

struct RenderedFrame {
  ImageU8 image;
  Image<float> depth;  // mm, 0 = empty
  Mask instance_mask;
  Pose gt_pose;
  std::optional<FlowField> gt_flow_to_next;

  bool empty_mask() const { return instance_mask.count() == 0; }
};

namespace detail {

// Depth buffer plus the index of the winning point per pixel (-1 = empty).
struct SplatBuffers {
  Image<float> depth;
  Image<std::int32_t> index;
};

inline SplatBuffers splat_points(const SceneObject& obj, const Pose& pose,
                                 const CameraIntrinsics& k, int width,
                                 int height, double z_near) {
  obj.validate();
  pose.validate();
  SplatBuffers buf{Image<float>(height, width, 1),
                   Image<std::int32_t>(height, width, 1, -1)};
  const int r = int(std::ceil(obj.splat_radius));
  const double r2 = obj.splat_radius * obj.splat_radius;
  bool any_in_front = false;
  for (std::size_t i = 0; i < obj.points.size(); ++i) {
    const Eigen::Vector3d p = pose.apply(obj.points[i]);
    if (p.z() <= z_near) continue;
    any_in_front = true;
    const Projection proj = project(k, p);
    const int cx = int(std::lround(proj.u));
    const int cy = int(std::lround(proj.v));
    for (int dy = -r; dy <= r; ++dy) {
      for (int dx = -r; dx <= r; ++dx) {
        if (dx * dx + dy * dy > r2) continue;
        const int x = cx + dx, y = cy + dy;
        if (!buf.depth.in_bounds(y, x)) continue;
        float& d = buf.depth.at(y, x);
        if (d == 0.0f || float(p.z()) < d) {
          d = float(p.z());
          buf.index.at(y, x) = std::int32_t(i);
        }
      }
    }
  }
  if (!any_in_front)
    throw DomainError("splat_points: object fully behind camera");
  return buf;
}

inline std::uint8_t quantize(double v) {
  return std::uint8_t(std::clamp(std::lround(v * 255.0), 0l, 255l));
}

}  // namespace detail

// Depth-buffered point-splat rendering: each point becomes a disk of the
// object's splat radius; the nearest point wins each pixel. The instance
// mask is exactly (depth > 0). Same inputs give bit-identical output.
inline RenderedFrame render_frame(const SceneObject& obj, const Pose& pose,
                                  const CameraIntrinsics& k, int width,
                                  int height, const RenderOptions& opt = {}) {
  check(width >= 1 && height >= 1, "render_frame: bad image size");
  const detail::SplatBuffers buf =
      detail::splat_points(obj, pose, k, width, height, opt.z_near);

  RenderedFrame frame;
  frame.gt_pose = pose;
  frame.depth = buf.depth;
  frame.instance_mask = Mask(height, width, 0);
  frame.image = ImageU8(height, width, 3);

  Rng noise(opt.noise_seed);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      Eigen::Vector3f c;
      switch (opt.background) {
        case BackgroundKind::solid:
          c = opt.bg_color_a;
          break;
        case BackgroundKind::gradient: {
          const float a = height > 1 ? float(y) / float(height - 1) : 0.0f;
          c = (1.0f - a) * opt.bg_color_a + a * opt.bg_color_b;
          break;
        }
        case BackgroundKind::noise:
          c = Eigen::Vector3f(float(noise.uniform()), float(noise.uniform()),
                              float(noise.uniform()));
          break;
      }
      const std::int32_t idx = buf.index.at(y, x);
      if (idx >= 0) {
        c = obj.colors[idx];
        frame.instance_mask.grid.at(y, x) = 1;
      }
      for (int ch = 0; ch < 3; ++ch)
        frame.image.at(y, x, ch) = detail::quantize(c[ch] * opt.brightness);
    }
  }
  return frame;
}

// Exact flow oracle: at every frame-t object pixel, the displacement of the
// owning 3D point's projection between the two poses. Background flow is 0;
// points that fall behind the camera at t+1 keep flow 0.
inline FlowField compute_gt_flow(const SceneObject& obj, const Pose& pose_t,
                                 const Pose& pose_t1,
                                 const CameraIntrinsics& k, int width,
                                 int height, double z_near = 1.0) {
  const detail::SplatBuffers buf =
      detail::splat_points(obj, pose_t, k, width, height, z_near);
  bool any_t1 = false;
  for (const auto& p : obj.points)
    if (pose_t1.apply(p).z() > z_near) {
      any_t1 = true;
      break;
    }
  if (!any_t1)
    throw DomainError("compute_gt_flow: object fully behind camera at t+1");

  FlowField flow(height, width, 0, 1);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const std::int32_t idx = buf.index.at(y, x);
      if (idx < 0) continue;
      const Eigen::Vector3d pa = pose_t.apply(obj.points[idx]);
      const Eigen::Vector3d pb = pose_t1.apply(obj.points[idx]);
      if (pb.z() <= z_near) continue;
      const Projection a = project(k, pa);
      const Projection b = project(k, pb);
      flow.grid.at(y, x, 0) = float(b.u - a.u);
      flow.grid.at(y, x, 1) = float(b.v - a.v);
    }
  }
  return flow;
}

}  // namespace track6d
