#pragma once

#include <string>
#include <vector>

#include "track6d/synth/protocol.hpp"
#include "track6d/synth/render.hpp"

namespace track6d {

enum class Protocol { modelnet_pair, shapenet_video };

inline const char* to_string(Protocol p) {
  return p == Protocol::modelnet_pair ? "modelnet_pair" : "shapenet_video";
}

inline Protocol protocol_from_string(const std::string& s) {
  if (s == "modelnet_pair") return Protocol::modelnet_pair;
  if (s == "shapenet_video") return Protocol::shapenet_video;
  throw ValidationError("unknown protocol: " + s);
}

struct RandomizeConfig {
  bool randomize_background = true;
  double brightness_min = 0.7;
  double brightness_max = 1.1;
};

struct SequenceSpec {
  Protocol protocol = Protocol::shapenet_video;
  int length = 100;  // forced to 2 for modelnet_pair
  std::uint64_t seed = 0;
  int width = 128;
  int height = 128;
  CameraIntrinsics intrinsics{120, 120, 64, 64};
  ObjectConfig object;
  RandomizeConfig randomize;

  void validate() const {
    if (protocol == Protocol::modelnet_pair)
      check(length == 2, "SequenceSpec: modelnet_pair requires length 2");
    else
      check(length >= 2, "SequenceSpec: length must be >= 2");
    check(width >= 8 && height >= 8, "SequenceSpec: image too small");
    intrinsics.validate();
    object.validate();
  }
};

struct SyntheticSequence {
  SequenceSpec spec;
  SceneObject object;
  std::vector<RenderedFrame> frames;

  std::vector<Pose> poses() const {
    std::vector<Pose> out;
    out.reserve(frames.size());
    for (const auto& f : frames) out.push_back(f.gt_pose);
    return out;
  }

  std::vector<Mask> masks() const {
    std::vector<Mask> out;
    out.reserve(frames.size());
    for (std::size_t i = 0; i < frames.size(); ++i) {
      out.push_back(frames[i].instance_mask);
      out.back().frame_index = int(i);
    }
    return out;
  }

  std::vector<ImageU8> images() const {
    std::vector<ImageU8> out;
    out.reserve(frames.size());
    for (const auto& f : frames) out.push_back(f.image);
    return out;
  }

  std::vector<FlowField> flows() const {
    std::vector<FlowField> out;
    for (std::size_t i = 0; i + 1 < frames.size(); ++i) {
      check(frames[i].gt_flow_to_next.has_value(),
            "SyntheticSequence: missing flow");
      FlowField f = *frames[i].gt_flow_to_next;
      f.from_index = int(i);
      f.to_index = int(i) + 1;
      out.push_back(std::move(f));
    }
    return out;
  }
};

// Deterministic sequence construction. The rng draw order is fixed (object,
// background, brightness, poses) so a seed fully determines every byte.
inline SyntheticSequence make_sequence(const SequenceSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  SyntheticSequence seq;
  seq.spec = spec;
  seq.object = random_object(rng, spec.object);

  RenderOptions opt;
  if (spec.randomize.randomize_background) {
    const double pick = rng.uniform();
    opt.background = pick < 1.0 / 3 ? BackgroundKind::solid
                     : pick < 2.0 / 3 ? BackgroundKind::gradient
                                      : BackgroundKind::noise;
    opt.bg_color_a = Eigen::Vector3f(float(rng.uniform(0.0, 0.45)),
                                     float(rng.uniform(0.0, 0.45)),
                                     float(rng.uniform(0.0, 0.45)));
    opt.bg_color_b = Eigen::Vector3f(float(rng.uniform(0.0, 0.45)),
                                     float(rng.uniform(0.0, 0.45)),
                                     float(rng.uniform(0.0, 0.45)));
    opt.noise_seed = rng.raw();
    opt.brightness = rng.uniform(spec.randomize.brightness_min,
                                 spec.randomize.brightness_max);
  }

  std::vector<Pose> poses;
  if (spec.protocol == Protocol::modelnet_pair) {
    const auto pair = sample_modelnet_pair(rng);
    poses = {pair.first, pair.second};
  } else {
    poses = sample_shapenet_video(rng, spec.length);
  }

  seq.frames.reserve(poses.size());
  for (const Pose& pose : poses)
    seq.frames.push_back(render_frame(seq.object, pose, spec.intrinsics,
                                      spec.width, spec.height, opt));
  for (std::size_t i = 0; i + 1 < poses.size(); ++i) {
    FlowField f = compute_gt_flow(seq.object, poses[i], poses[i + 1],
                                  spec.intrinsics, spec.width, spec.height,
                                  opt.z_near);
    f.from_index = int(i);
    f.to_index = int(i) + 1;
    seq.frames[i].gt_flow_to_next = std::move(f);
  }
  return seq;
}

}  // namespace track6d
