#include <catch2/catch_amalgamated.hpp>

#include "testutil.hpp"
#include "track6d/segmask.hpp"

using namespace track6d;

namespace {

Mask block_mask(int h, int w, int frame, BBox b) {
  Mask m(h, w, frame);
  for (int y = b.top; y < b.bottom(); ++y)
    for (int x = b.left; x < b.right(); ++x) m.grid.at(y, x) = 1;
  return m;
}

FlowField uniform_flow(int h, int w, float fx, float fy, int from = 0,
                       int to = 1) {
  FlowField f(h, w, from, to);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      f.grid.at(y, x, 0) = fx;
      f.grid.at(y, x, 1) = fy;
    }
  return f;
}

}  // namespace

TEST_CASE("warp_mask forward splat") {
  const Mask m = block_mask(32, 32, 0, {8, 8, 3, 3});

  const Mask same = warp_mask(m, uniform_flow(32, 32, 0, 0));
  CHECK(same.grid == m.grid);
  CHECK(same.frame_index == 1);

  const Mask shifted = warp_mask(m, uniform_flow(32, 32, 5, 0));
  CHECK(shifted.grid == block_mask(32, 32, 1, {13, 8, 3, 3}).grid);

  FlowField wrong(16, 16, 0, 1);
  CHECK_THROWS_AS(warp_mask(m, wrong), DomainError);
  FlowField bad_index = uniform_flow(32, 32, 0, 0, 3, 4);
  CHECK_THROWS_AS(warp_mask(m, bad_index), DomainError);

  // pushing everything far out of bounds leaves an empty mask, not a crash
  const Mask gone = warp_mask(m, uniform_flow(32, 32, 100, 100));
  CHECK(gone.count() == 0);
}

TEST_CASE("warp_mask agrees with brute-force splat oracle") {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    Mask m(16, 16, 0);
    for (auto& v : m.grid.data) v = rng.bernoulli(0.3) ? 1 : 0;
    FlowField f(16, 16, 0, 1);
    for (auto& v : f.grid.data) v = float(rng.uniform_int(-6, 6));

    const Mask fast = warp_mask(m, f);

    // oracle: a target pixel is foreground iff some foreground source pixel
    // rounds onto it
    Mask slow(16, 16, 1);
    for (int ty = 0; ty < 16; ++ty)
      for (int tx = 0; tx < 16; ++tx) {
        bool hit = false;
        for (int y = 0; y < 16 && !hit; ++y)
          for (int x = 0; x < 16 && !hit; ++x)
            if (m.grid.at(y, x) &&
                int(std::lround(x + double(f.grid.at(y, x, 0)))) == tx &&
                int(std::lround(y + double(f.grid.at(y, x, 1)))) == ty)
              hit = true;
        slow.grid.at(ty, tx) = hit ? 1 : 0;
      }
    REQUIRE(fast.grid == slow.grid);
  }
}

TEST_CASE("mask_to_bbox pads and clamps") {
  Mask single(32, 32, 0);
  single.grid.at(3, 7) = 1;
  CHECK(mask_to_bbox(single, 2) == BBox{5, 1, 5, 5});

  const Mask full = block_mask(32, 32, 0, {0, 0, 32, 32});
  CHECK(mask_to_bbox(full, 0) == BBox{0, 0, 32, 32});

  Mask empty(32, 32, 4);
  try {
    mask_to_bbox(empty, 0);
    FAIL("expected TrackingLostError");
  } catch (const TrackingLostError& e) {
    CHECK(e.frame_index == 4);
  }

  Rng rng(9);
  for (int trial = 0; trial < 1000; ++trial) {
    Mask m(24, 24, 0);
    int n = 0;
    for (auto& v : m.grid.data)
      if (rng.bernoulli(0.05)) {
        v = 1;
        ++n;
      }
    if (n == 0) continue;
    const int pad = int(rng.uniform_int(0, 4));
    const BBox box = mask_to_bbox(m, pad);
    for (int y = 0; y < 24; ++y)
      for (int x = 0; x < 24; ++x)
        if (m.grid.at(y, x)) {
          CHECK(x >= box.left);
          CHECK(x < box.right());
          CHECK(y >= box.top);
          CHECK(y < box.bottom());
        }
  }
}

TEST_CASE("propagate_step with oracle providers keeps a static box") {
  const int hw = 48;
  const BBox obj_box{18, 20, 8, 8};
  const Mask gt = block_mask(hw, hw, 0, obj_box);
  std::vector<Mask> gt_masks;
  std::vector<FlowField> flows;
  for (int t = 0; t < 4; ++t) {
    Mask m = gt;
    m.frame_index = t;
    gt_masks.push_back(m);
    if (t < 3) flows.push_back(uniform_flow(hw, hw, 0, 0, t, t + 1));
  }
  OracleMaskRefiner refiner(gt_masks);
  OracleFlowProvider flow(flows);
  std::vector<ImageU8> frames(4, ImageU8(hw, hw, 3));

  SegmaskConfig cfg;
  BBox box = mask_to_bbox_frac(gt_masks[0], cfg.pad_frac);
  const BBox b0 = box;
  for (int t = 0; t < 3; ++t) {
    auto [nb, nm] = propagate_step(box, frames[t], frames[t + 1], t, flow,
                                   refiner, cfg);
    CHECK(nb == b0);
    CHECK(nm.count() == gt.count());
    box = nb;
  }
}

TEST_CASE("propagate_step reports the lost frame index") {
  const int hw = 32;
  std::vector<Mask> gt_masks{block_mask(hw, hw, 0, {4, 4, 4, 4}),
                             Mask(hw, hw, 1)};
  OracleMaskRefiner refiner(gt_masks);
  // flow that throws everything out of frame
  std::vector<FlowField> flows{uniform_flow(hw, hw, 100, 0, 0, 1)};
  OracleFlowProvider flow(flows);
  std::vector<ImageU8> frames(2, ImageU8(hw, hw, 3));
  try {
    propagate_step({2, 2, 8, 8}, frames[0], frames[1], 0, flow, refiner, {});
    FAIL("expected TrackingLostError");
  } catch (const TrackingLostError& e) {
    CHECK(e.frame_index == 1);
  }
}

TEST_CASE("dilating refiner still yields boxes containing the object") {
  const int hw = 48;
  const BBox obj_box{20, 14, 9, 9};
  std::vector<Mask> gt_masks;
  for (int t = 0; t < 4; ++t) gt_masks.push_back(block_mask(hw, hw, t, obj_box));
  auto oracle = std::make_shared<OracleMaskRefiner>(gt_masks);
  NoisyMaskRefiner dilated(oracle, 1, 0);
  std::vector<FlowField> flows;
  for (int t = 0; t < 3; ++t) flows.push_back(uniform_flow(hw, hw, 0, 0, t, t + 1));
  OracleFlowProvider flow(flows);
  std::vector<ImageU8> frames(4, ImageU8(hw, hw, 3));

  BBox box{16, 10, 17, 17};
  for (int t = 0; t < 3; ++t) {
    auto [nb, nm] = propagate_step(box, frames[t], frames[t + 1], t, flow,
                                   dilated, {});
    CHECK(nb.contains(obj_box));
    box = nb;
  }
}

TEST_CASE("prepare_network_inputs masks, crops, aligns") {
  const int hw = 64;
  ImageU8 frame(hw, hw, 3);
  Rng rng(7);
  for (auto& v : frame.data) v = std::uint8_t(rng.uniform_int(0, 255));
  const BBox box{10, 12, 20, 16};
  const Mask mask = block_mask(hw, hw, 0, box);

  SECTION("identical frames give identical crops and the single box") {
    const NetworkInputs in = prepare_network_inputs(
        {frame, frame}, {mask, mask}, {box, box}, 32, 32);
    REQUIRE(in.crops.size() == 2);
    CHECK(in.crops[0] == in.crops[1]);
    CHECK(in.crop.box == box);
    CHECK(in.crop.alpha_u == Catch::Approx(20.0 / 32.0));
  }

  SECTION("union of disjoint boxes matches crop_union") {
    const BBox a{0, 0, 10, 10}, b{20, 20, 10, 10};
    const NetworkInputs in = prepare_network_inputs(
        {frame, frame}, {mask, mask}, {a, b}, 32, 32);
    CHECK(in.crop.box == BBox{0, 0, 30, 30});
  }

  SECTION("background is exactly zero outside the mask") {
    // mask with a hole: crop pixels fully inside the hole must be zero
    Mask holed = block_mask(hw, hw, 0, box);
    for (int y = 16; y < 24; ++y)
      for (int x = 14; x < 26; ++x) holed.grid.at(y, x) = 0;
    const NetworkInputs in = prepare_network_inputs(
        {frame, frame}, {holed, holed}, {box, box}, 64, 64);
    // with input 64 and box 20x16, alpha < 1: sample positions inside the
    // hole interior only touch zeroed pixels
    int zeros = 0;
    for (const float v : in.crops[0].data) zeros += (v == 0.0f);
    CHECK(zeros > 0);
    // every crop pixel whose 2x2 support is outside the mask is zero
    for (int y = 0; y < 64; ++y)
      for (int x = 0; x < 64; ++x) {
        const double sy = in.crop.box.top + (y + 0.5) * in.crop.alpha_v - 0.5;
        const double sx = in.crop.box.left + (x + 0.5) * in.crop.alpha_u - 0.5;
        bool support_masked = true;
        for (int dy = 0; dy <= 1 && support_masked; ++dy)
          for (int dx = 0; dx <= 1; ++dx) {
            const int yy = std::clamp(int(sy) + dy, 0, hw - 1);
            const int xx = std::clamp(int(sx) + dx, 0, hw - 1);
            if (holed.grid.at(yy, xx)) {
              support_masked = false;
              break;
            }
          }
        if (support_masked)
          for (int c = 0; c < 3; ++c) CHECK(in.crops[0].at(y, x, c) == 0.0f);
      }
  }

  SECTION("translation equivariance for integer shifts") {
    const int dx = 6, dy = 4;
    ImageU8 shifted_frame(hw, hw, 3);
    Mask shifted_mask(hw, hw, 0);
    for (int y = 0; y < hw; ++y)
      for (int x = 0; x < hw; ++x) {
        if (frame.in_bounds(y - dy, x - dx)) {
          for (int c = 0; c < 3; ++c)
            shifted_frame.at(y, x, c) = frame.at(y - dy, x - dx, c);
          shifted_mask.grid.at(y, x) = mask.grid.at(y - dy, x - dx);
        }
      }
    const BBox shifted_box{box.left + dx, box.top + dy, box.width, box.height};
    const NetworkInputs base = prepare_network_inputs(
        {frame, frame}, {mask, mask}, {box, box}, 32, 32);
    const NetworkInputs moved = prepare_network_inputs(
        {shifted_frame, shifted_frame}, {shifted_mask, shifted_mask},
        {shifted_box, shifted_box}, 32, 32);
    CHECK(moved.crop.box.left == base.crop.box.left + dx);
    CHECK(moved.crop.box.top == base.crop.box.top + dy);
    CHECK(moved.crops[0] == base.crops[0]);
  }

  SECTION("K < 2 is rejected") {
    CHECK_THROWS_AS(prepare_network_inputs({frame}, {mask}, {box}, 32, 32),
                    DomainError);
  }
}
