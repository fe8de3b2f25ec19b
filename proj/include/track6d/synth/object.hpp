#pragma once

#include <Eigen/Core>
#include <array>
#include <vector>

#include "track6d/rng.hpp"

namespace track6d {

// Colored surface point cloud standing in for a CAD model. Points are in the
// object frame, millimeters, centered so the pose translation is the object
// center.
struct SceneObject {
  std::vector<Eigen::Vector3d> points;
  std::vector<Eigen::Vector3f> colors;  // [0,1]
  double splat_radius = 2.0;
  int object_id = 0;

  void validate() const {
    check(points.size() >= 50, "SceneObject: need at least 50 points");
    check(points.size() == colors.size(),
          "SceneObject: point/color count mismatch");
    check(splat_radius >= 0, "SceneObject: negative splat radius");
  }

  double max_radius() const {
    double r = 0;
    for (const auto& p : points) r = std::max(r, p.norm());
    return r;
  }
};

enum class ObjectShape { mixed, box, ellipsoid };

struct ObjectConfig {
  int n_points = 400;
  double splat_radius = 2.0;
  double min_half_extent = 50.0;   // mm
  double max_half_extent = 110.0;  // mm
  ObjectShape shape = ObjectShape::mixed;

  void validate() const {
    check(n_points >= 50, "ObjectConfig: n_points must be >= 50");
    check(min_half_extent > 0 && max_half_extent >= min_half_extent,
          "ObjectConfig: bad half-extent range");
  }
};

namespace detail {

inline Eigen::Vector3f hsv_to_rgb(double h, double s, double v) {
  h = h - std::floor(h);
  const double c = v * s;
  const double hp = h * 6.0;
  const double x = c * (1.0 - std::abs(std::fmod(hp, 2.0) - 1.0));
  double r = 0, g = 0, b = 0;
  switch (int(hp) % 6) {
    case 0: r = c; g = x; break;
    case 1: r = x; g = c; break;
    case 2: g = c; b = x; break;
    case 3: g = x; b = c; break;
    case 4: r = x; b = c; break;
    default: r = c; b = x; break;
  }
  const double m = v - c;
  return Eigen::Vector3f(float(r + m), float(g + m), float(b + m));
}

// Distinct hues spread around the wheel with a random offset, shuffled so
// adjacent regions are not adjacent in hue.
inline std::vector<Eigen::Vector3f> make_palette(Rng& rng, int n) {
  const double h0 = rng.uniform();
  std::vector<Eigen::Vector3f> pal;
  pal.reserve(n);
  for (int i = 0; i < n; ++i)
    pal.push_back(hsv_to_rgb(h0 + double(i) / n, rng.uniform(0.55, 0.95),
                             rng.uniform(0.7, 1.0)));
  for (int i = n - 1; i > 0; --i)
    std::swap(pal[i], pal[rng.uniform_int(0, i)]);
  return pal;
}

}  // namespace detail

// Random textured object: a box surface with per-face colors or an ellipsoid
// surface with per-octant colors. The distinct color regions give the motion
// networks an orientation cue, playing the role of CAD textures.
inline SceneObject random_object(Rng& rng, const ObjectConfig& cfg = {},
                                 int object_id = 0) {
  cfg.validate();
  SceneObject obj;
  obj.object_id = object_id;
  obj.splat_radius = cfg.splat_radius;
  Eigen::Vector3d ext;
  for (int a = 0; a < 3; ++a)
    ext[a] = rng.uniform(cfg.min_half_extent, cfg.max_half_extent);
  // The rng draw happens even when the shape is forced so that switching the
  // override does not shift later draws.
  const bool coin = rng.bernoulli(0.5);
  const bool box = cfg.shape == ObjectShape::mixed ? coin
                                                   : cfg.shape == ObjectShape::box;
  const auto palette = detail::make_palette(rng, box ? 6 : 8);

  obj.points.reserve(cfg.n_points);
  obj.colors.reserve(cfg.n_points);
  Eigen::Vector3d mean = Eigen::Vector3d::Zero();
  for (int i = 0; i < cfg.n_points; ++i) {
    Eigen::Vector3d p;
    int region;
    if (box) {
      // face index: axis*2 + (sign>0)
      const int axis = int(rng.uniform_int(0, 2));
      const int sign = rng.bernoulli(0.5) ? 1 : -1;
      p[axis] = sign * ext[axis];
      p[(axis + 1) % 3] = rng.uniform(-1.0, 1.0) * ext[(axis + 1) % 3];
      p[(axis + 2) % 3] = rng.uniform(-1.0, 1.0) * ext[(axis + 2) % 3];
      region = axis * 2 + (sign > 0 ? 1 : 0);
    } else {
      Eigen::Vector3d d(rng.normal(), rng.normal(), rng.normal());
      while (d.norm() < 1e-9) d = {rng.normal(), rng.normal(), rng.normal()};
      d.normalize();
      p = d.cwiseProduct(ext);
      region = (d.x() > 0 ? 1 : 0) | (d.y() > 0 ? 2 : 0) | (d.z() > 0 ? 4 : 0);
    }
    Eigen::Vector3f c = palette[region];
    for (int ch = 0; ch < 3; ++ch)
      c[ch] = std::clamp(c[ch] + float(rng.uniform(-0.05, 0.05)), 0.0f, 1.0f);
    obj.points.push_back(p);
    obj.colors.push_back(c);
    mean += p;
  }
  mean /= double(cfg.n_points);
  for (auto& p : obj.points) p -= mean;
  obj.validate();
  return obj;
}

}  // namespace track6d
