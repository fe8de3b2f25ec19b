#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "track6d/geometry.hpp"
#include "track6d/rng.hpp"
#include "track6d/synth/object.hpp"
#include "track6d/synth/protocol.hpp"
#include "track6d/synth/render.hpp"

namespace testutil {

// Unique scratch directory, removed on destruction.
class TmpDir {
 public:
  explicit TmpDir(const std::string& tag) {
    path_ = std::filesystem::temp_directory_path() /
            ("track6d_" + tag + "_" + std::to_string(counter_++));
    std::filesystem::create_directories(path_);
  }
  ~TmpDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }

 private:
  static inline int counter_ = 0;
  std::filesystem::path path_;
};

inline track6d::Pose random_pose(track6d::Rng& rng, double z_min = 300,
                                 double z_max = 1500) {
  track6d::Pose p;
  p.R = track6d::random_rotation(rng);
  p.T = {rng.uniform(-150, 150), rng.uniform(-150, 150),
         rng.uniform(z_min, z_max)};
  return p;
}

inline track6d::BBox random_box(track6d::Rng& rng, int img_w, int img_h) {
  const int w = int(rng.uniform_int(4, img_w / 2));
  const int h = int(rng.uniform_int(4, img_h / 2));
  const int l = int(rng.uniform_int(0, img_w - w));
  const int t = int(rng.uniform_int(0, img_h - h));
  return {l, t, w, h};
}

// Rendered clip fixture shared by the 2D-tracking and chaining tests: a
// near-spherical ellipsoid on a motion stream that keeps it fully inside a
// 256x256 frame at 350..1000 mm for at least 100 frames, so mask boxes stay
// well-conditioned. Seeds are load-bearing; do not change them casually.
struct RenderedClip {
  track6d::CameraIntrinsics intrinsics{240, 240, 128, 128};
  int width = 256;
  int height = 256;
  track6d::SceneObject object;
  std::vector<track6d::Pose> poses;
  std::vector<track6d::ImageU8> images;
  std::vector<track6d::Mask> masks;
  std::vector<track6d::FlowField> flows;
};

inline RenderedClip make_locked_clip(int n) {
  using namespace track6d;
  RenderedClip clip;
  ObjectConfig ocfg;
  ocfg.n_points = 500;
  ocfg.min_half_extent = 85;
  ocfg.shape = ObjectShape::ellipsoid;
  Rng obj_rng(12345);
  clip.object = random_object(obj_rng, ocfg);
  Rng pose_rng(255);
  clip.poses = sample_shapenet_video(pose_rng, n);
  for (int t = 0; t < n; ++t) {
    RenderedFrame f = render_frame(clip.object, clip.poses[std::size_t(t)],
                                   clip.intrinsics, clip.width, clip.height);
    f.instance_mask.frame_index = t;
    clip.masks.push_back(std::move(f.instance_mask));
    clip.images.push_back(std::move(f.image));
    if (t + 1 < n) {
      FlowField fl = compute_gt_flow(clip.object, clip.poses[std::size_t(t)],
                                     clip.poses[std::size_t(t) + 1],
                                     clip.intrinsics, clip.width, clip.height);
      fl.from_index = t;
      fl.to_index = t + 1;
      clip.flows.push_back(std::move(fl));
    }
  }
  return clip;
}

}  // namespace testutil
