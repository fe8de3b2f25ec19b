#include <catch2/catch_amalgamated.hpp>

#include "testutil.hpp"
#include "track6d/tracker.hpp"

using namespace track6d;

namespace {

// Always returns the same code; used to drive the decoder into corners.
class FixedPredictor : public Predictor {
 public:
  explicit FixedPredictor(MotionCode code, int window = 2)
      : code_(code), window_(window) {}
  int window() const override { return window_; }
  MotionCode predict(const std::vector<ImageF32>&, const CropSpec&,
                     int) override {
    return code_;
  }

 private:
  MotionCode code_;
  int window_;
};

TrackerInit init_from_gt(const testutil::RenderedClip& clip,
                         const SegmaskConfig& scfg) {
  TrackerInit init;
  const Projection p = project(clip.intrinsics, clip.poses[0].T);
  init.u0 = p.u;
  init.v0 = p.v;
  init.z0 = p.z;
  init.R0 = clip.poses[0].R;
  init.box0 = mask_to_bbox_frac(clip.masks[0], scfg.pad_frac);
  return init;
}

TrackerConfig clip_config(const testutil::RenderedClip& clip) {
  TrackerConfig cfg;
  cfg.intrinsics = clip.intrinsics;
  cfg.input_size = 96;
  return cfg;
}

double max_trans_err(const Trajectory& traj, const std::vector<Pose>& gt) {
  double m = 0;
  for (std::size_t i = 0; i < traj.frames.size(); ++i)
    m = std::max(m, (traj.frames[i].pose.T - gt[i].T).norm());
  return m;
}

double max_rot_err(const Trajectory& traj, const std::vector<Pose>& gt) {
  double m = 0;
  for (std::size_t i = 0; i < traj.frames.size(); ++i)
    m = std::max(m, geodesic_angle(traj.frames[i].pose.R, gt[i].R));
  return m;
}

}  // namespace

TEST_CASE("zero predictor leaves the pose at the initialization") {
  const auto clip = testutil::make_locked_clip(6);
  const TrackerConfig cfg = clip_config(clip);
  const TrackerInit init = init_from_gt(clip, cfg.segmask);
  ZeroPredictor pred;
  OracleMaskRefiner refiner(clip.masks);
  OracleFlowProvider flow(clip.flows);

  const Trajectory traj =
      track_sequence(clip.images, init, pred, flow, refiner, cfg);
  REQUIRE(traj.frames.size() == clip.images.size());
  const Pose& p0 = traj.frames[0].pose;
  for (const TrackedFrame& f : traj.frames) {
    CHECK((f.pose.R - p0.R).cwiseAbs().maxCoeff() == 0.0);
    CHECK((f.pose.T - p0.T).norm() == 0.0);
    CHECK(f.z == init.z0);
  }
}

TEST_CASE("oracle predictor inverts the encoding step by step") {
  const auto clip = testutil::make_locked_clip(8);
  const TrackerConfig cfg = clip_config(clip);
  const TrackerInit init = init_from_gt(clip, cfg.segmask);
  OraclePredictor pred(clip.intrinsics, clip.poses);
  OracleMaskRefiner refiner(clip.masks);
  OracleFlowProvider flow(clip.flows);

  const Trajectory traj =
      track_sequence(clip.images, init, pred, flow, refiner, cfg);
  REQUIRE(traj.frames.size() == clip.poses.size());
  for (std::size_t i = 0; i < traj.frames.size(); ++i) {
    CHECK((traj.frames[i].pose.T - clip.poses[i].T).norm() < 1e-9);
    CHECK(geodesic_angle(traj.frames[i].pose.R, clip.poses[i].R) < 1e-9);
  }

  // two chained steps equal the direct composition of the two ground-truth
  // relative rotations
  const Eigen::Matrix3d dr1 =
      relative_rotation(clip.poses[0].R, clip.poses[1].R);
  const Eigen::Matrix3d dr2 =
      relative_rotation(clip.poses[1].R, clip.poses[2].R);
  const Eigen::Matrix3d composed = dr2 * dr1 * clip.poses[0].R;
  CHECK((traj.frames[2].pose.R - composed).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("oracle closure holds over a long clip") {
  const auto clip = testutil::make_locked_clip(40);
  const TrackerConfig cfg = clip_config(clip);
  const TrackerInit init = init_from_gt(clip, cfg.segmask);
  OraclePredictor pred(clip.intrinsics, clip.poses);
  OracleMaskRefiner refiner(clip.masks);
  OracleFlowProvider flow(clip.flows);

  const Trajectory traj =
      track_sequence(clip.images, init, pred, flow, refiner, cfg);
  CHECK(max_trans_err(traj, clip.poses) < 1e-5);
  CHECK(max_rot_err(traj, clip.poses) < 1e-7);
}

TEST_CASE("depth gauge rescales all translations exactly") {
  const auto clip = testutil::make_locked_clip(12);
  const TrackerConfig cfg = clip_config(clip);
  OraclePredictor pred(clip.intrinsics, clip.poses);
  OracleMaskRefiner refiner(clip.masks);
  OracleFlowProvider flow(clip.flows);

  TrackerInit base = init_from_gt(clip, cfg.segmask);
  base.R0 = Eigen::Matrix3d::Identity();
  base.z0 = 1000.0;
  const Trajectory t1 =
      track_sequence(clip.images, base, pred, flow, refiner, cfg);

  const double c = 2.37;
  TrackerInit scaled = base;
  scaled.z0 = base.z0 * c;
  const Trajectory t2 =
      track_sequence(clip.images, scaled, pred, flow, refiner, cfg);

  REQUIRE(t1.frames.size() == t2.frames.size());
  for (std::size_t i = 0; i < t1.frames.size(); ++i) {
    const Eigen::Vector3d want = c * t1.frames[i].pose.T;
    const double denom = std::max(1.0, want.norm());
    CHECK((t2.frames[i].pose.T - want).norm() / denom < 1e-9);
    CHECK((t2.frames[i].pose.R - t1.frames[i].pose.R).cwiseAbs().maxCoeff() <
          1e-12);
  }
}

TEST_CASE("reference rotation right-multiplies all recovered rotations") {
  const auto clip = testutil::make_locked_clip(12);
  const TrackerConfig cfg = clip_config(clip);
  OraclePredictor pred(clip.intrinsics, clip.poses);
  OracleMaskRefiner refiner(clip.masks);
  OracleFlowProvider flow(clip.flows);

  TrackerInit base = init_from_gt(clip, cfg.segmask);
  base.R0 = Eigen::Matrix3d::Identity();
  const Trajectory t1 =
      track_sequence(clip.images, base, pred, flow, refiner, cfg);

  Rng rng(99);
  const Eigen::Matrix3d q = random_rotation(rng);
  TrackerInit turned = base;
  turned.R0 = q;
  const Trajectory t2 =
      track_sequence(clip.images, turned, pred, flow, refiner, cfg);

  for (std::size_t i = 0; i < t1.frames.size(); ++i) {
    const Eigen::Matrix3d want = t1.frames[i].pose.R * q;
    CHECK((t2.frames[i].pose.R - want).cwiseAbs().maxCoeff() < 1e-9);
    CHECK((t2.frames[i].pose.T - t1.frames[i].pose.T).norm() < 1e-9);
  }
}

TEST_CASE("two-frame sequence reduces to one stepper call") {
  const auto clip = testutil::make_locked_clip(2);
  const TrackerConfig cfg = clip_config(clip);
  const TrackerInit init = init_from_gt(clip, cfg.segmask);
  OraclePredictor pred(clip.intrinsics, clip.poses);
  OracleMaskRefiner refiner(clip.masks);
  OracleFlowProvider flow(clip.flows);

  const Trajectory traj =
      track_sequence(clip.images, init, pred, flow, refiner, cfg);
  REQUIRE(traj.frames.size() == 2);

  OracleMaskRefiner refiner2(clip.masks);
  OracleFlowProvider flow2(clip.flows);
  Tracker tracker(cfg, init, clip.images[0], pred, flow2, refiner2);
  const TrackedFrame stepped = tracker.step(clip.images[1]);
  CHECK((traj.frames[1].pose.T - stepped.pose.T).norm() == 0.0);
  CHECK((traj.frames[1].pose.R - stepped.pose.R).cwiseAbs().maxCoeff() == 0.0);
  CHECK(traj.frames[1].z == stepped.z);
  CHECK(traj.frames[1].crop.box == stepped.crop.box);
}

TEST_CASE("periodic ground-truth reset clamps accumulated drift") {
  const int n = 31;  // resets land on frames 15 and 30
  const auto clip = testutil::make_locked_clip(n);
  TrackerConfig cfg = clip_config(clip);
  const TrackerInit init = init_from_gt(clip, cfg.segmask);
  auto oracle = std::make_shared<OraclePredictor>(clip.intrinsics, clip.poses);
  NoisyPredictor pred(oracle, 0.05, 0.03, 7);
  OracleMaskRefiner refiner(clip.masks);
  OracleFlowProvider flow(clip.flows);

  ReinitSource src;
  src.poses = clip.poses;
  for (const Mask& m : clip.masks)
    src.boxes.push_back(mask_to_bbox_frac(m, cfg.segmask.pad_frac));

  const Trajectory free_run =
      track_sequence(clip.images, init, pred, flow, refiner, cfg);

  cfg.reinit_every = 15;
  const Trajectory reset_run =
      track_sequence(clip.images, init, pred, flow, refiner, cfg, &src);

  for (const int t : {15, 30}) {
    CHECK((reset_run.frames[std::size_t(t)].pose.T - clip.poses[std::size_t(t)].T)
              .norm() == 0.0);
    CHECK((reset_run.frames[std::size_t(t)].pose.R - clip.poses[std::size_t(t)].R)
              .cwiseAbs()
              .maxCoeff() == 0.0);
    CHECK(reset_run.frames[std::size_t(t)].code.omega.norm() == 0.0);
  }

  // 14 steps of accumulation beat 29 steps of accumulation
  const double err_free =
      (free_run.frames[29].pose.T - clip.poses[29].T).norm();
  const double err_reset =
      (reset_run.frames[29].pose.T - clip.poses[29].T).norm();
  CHECK(err_reset < err_free);

  cfg.reinit_every = 15;
  CHECK_THROWS_AS(
      track_sequence(clip.images, init, pred, flow, refiner, cfg, nullptr),
      DomainError);
}

TEST_CASE("error accumulates over time under iid predictor noise") {
  const int n = 16;
  const auto clip = testutil::make_locked_clip(n);
  const TrackerConfig cfg = clip_config(clip);
  const TrackerInit init = init_from_gt(clip, cfg.segmask);
  auto oracle = std::make_shared<OraclePredictor>(clip.intrinsics, clip.poses);
  OracleMaskRefiner refiner(clip.masks);
  OracleFlowProvider flow(clip.flows);

  const int runs = 100;
  double trans_2 = 0, trans_8 = 0, trans_15 = 0;
  double rot_2 = 0, rot_8 = 0, rot_15 = 0;
  for (int r = 0; r < runs; ++r) {
    NoisyPredictor pred(oracle, 0.02, 0.01, std::uint64_t(r));
    const Trajectory traj =
        track_sequence(clip.images, init, pred, flow, refiner, cfg);
    trans_2 += (traj.frames[2].pose.T - clip.poses[2].T).norm();
    trans_8 += (traj.frames[8].pose.T - clip.poses[8].T).norm();
    trans_15 += (traj.frames[15].pose.T - clip.poses[15].T).norm();
    rot_2 += geodesic_angle(traj.frames[2].pose.R, clip.poses[2].R);
    rot_8 += geodesic_angle(traj.frames[8].pose.R, clip.poses[8].R);
    rot_15 += geodesic_angle(traj.frames[15].pose.R, clip.poses[15].R);
  }
  CHECK(trans_2 < trans_8);
  CHECK(trans_8 < trans_15);
  CHECK(rot_2 < rot_8);
  CHECK(rot_8 < rot_15);
}

TEST_CASE("decode failures surface as tracking lost with the frame index") {
  const auto clip = testutil::make_locked_clip(3);
  const TrackerConfig cfg = clip_config(clip);
  const TrackerInit init = init_from_gt(clip, cfg.segmask);
  OracleMaskRefiner refiner(clip.masks);
  OracleFlowProvider flow(clip.flows);

  MotionCode bad;
  bad.s = -50.0;  // drives the decoded depth negative for any crop
  FixedPredictor pred(bad);
  try {
    track_sequence(clip.images, init, pred, flow, refiner, cfg);
    FAIL("expected TrackingLostError");
  } catch (const TrackingLostError& e) {
    CHECK(e.frame_index == 1);
  }
}

TEST_CASE("tracker initialization is validated") {
  const auto clip = testutil::make_locked_clip(2);
  const TrackerConfig cfg = clip_config(clip);
  OraclePredictor pred(clip.intrinsics, clip.poses);
  OracleMaskRefiner refiner(clip.masks);
  OracleFlowProvider flow(clip.flows);

  TrackerInit init = init_from_gt(clip, cfg.segmask);
  init.z0 = 0;
  CHECK_THROWS_AS(Tracker(cfg, init, clip.images[0], pred, flow, refiner),
                  DomainError);
  init = init_from_gt(clip, cfg.segmask);
  init.box0 = {0, 0, 0, 0};
  CHECK_THROWS_AS(Tracker(cfg, init, clip.images[0], pred, flow, refiner),
                  DomainError);
  CHECK_THROWS_AS(track_sequence({clip.images[0]}, init_from_gt(clip, cfg.segmask),
                                 pred, flow, refiner, cfg),
                  DomainError);
}
