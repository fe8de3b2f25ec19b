#include <catch2/catch_amalgamated.hpp>
#include <fstream>
#include <set>
#include <sstream>

#include "testutil.hpp"
#include "track6d/io.hpp"
#include "track6d/synth/dataset.hpp"

using namespace track6d;

namespace {

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(bool(in));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spew(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << bytes;
  REQUIRE(bool(out));
}

SequenceSpec tiny_spec(std::uint64_t seed) {
  SequenceSpec spec;
  spec.length = 4;
  spec.seed = seed;
  spec.width = 64;
  spec.height = 64;
  spec.intrinsics = CameraIntrinsics{60, 60, 32, 32};
  spec.object.n_points = 64;
  return spec;
}

}  // namespace

TEST_CASE("png images round trip bitwise in all three formats") {
  testutil::TmpDir tmp("png");
  Rng rng(41);

  SECTION("rgb8") {
    ImageU8 img(23, 31, 3);
    for (auto& v : img.data) v = std::uint8_t(rng.uniform_int(0, 255));
    const auto path = (tmp.path() / "a.png").string();
    write_png_rgb8(path, img);
    const ImageU8 back = read_png_rgb8(path);
    REQUIRE(back.height == img.height);
    REQUIRE(back.width == img.width);
    CHECK(back.data == img.data);
    CHECK(!std::filesystem::exists(path + ".tmp"));
  }

  SECTION("gray8") {
    ImageU8 img(17, 9, 1);
    for (auto& v : img.data) v = std::uint8_t(rng.uniform_int(0, 255));
    const auto path = (tmp.path() / "g.png").string();
    write_png_gray8(path, img);
    CHECK(read_png_gray8(path).data == img.data);
  }

  SECTION("gray16 keeps the full value range") {
    ImageU16 img(5, 7, 1);
    img.data = {0, 1, 255, 256, 13579, 32768, 65534, 65535};
    img.data.resize(35);
    for (std::size_t i = 8; i < img.data.size(); ++i)
      img.data[i] = std::uint16_t(rng.uniform_int(0, 65535));
    const auto path = (tmp.path() / "d.png").string();
    write_png_gray16(path, img);
    CHECK(read_png_gray16(path).data == img.data);
  }

  SECTION("failure modes") {
    CHECK_THROWS_AS(read_png_rgb8((tmp.path() / "missing.png").string()),
                    IoError);
    spew(tmp.path() / "junk.png", "this is not a png");
    CHECK_THROWS_AS(read_png_rgb8((tmp.path() / "junk.png").string()),
                    IoError);

    ImageU8 rgb(4, 4, 3);
    write_png_rgb8((tmp.path() / "rgb.png").string(), rgb);
    CHECK_THROWS_AS(read_png_gray8((tmp.path() / "rgb.png").string()),
                    IoError);
    ImageU8 g8(4, 4, 1);
    write_png_gray8((tmp.path() / "g8.png").string(), g8);
    CHECK_THROWS_AS(read_png_gray16((tmp.path() / "g8.png").string()),
                    IoError);
    CHECK_THROWS_AS(write_png_rgb8((tmp.path() / "x.png").string(), g8),
                    DomainError);
  }
}

TEST_CASE("json pose and intrinsics records reload bit-exact") {
  Rng rng(42);
  for (int i = 0; i < 100; ++i) {
    Pose p;
    p.R = random_rotation(rng);
    p.T = {rng.uniform(-500, 500), rng.uniform(-500, 500),
           rng.uniform(100, 3000)};
    // through text: dump uses shortest-round-trip decimals
    const Json j = Json::parse(pose_to_json(p, i).dump());
    const Pose q = pose_from_json(j);
    CHECK(q.R == p.R);
    CHECK(q.T == p.T);
  }

  const CameraIntrinsics k{241.5, 239.25, 127.5, 128.0078125};
  const CameraIntrinsics k2 =
      intrinsics_from_json(Json::parse(intrinsics_to_json(k).dump()));
  CHECK(k2.fx == k.fx);
  CHECK(k2.fy == k.fy);
  CHECK(k2.cx == k.cx);
  CHECK(k2.cy == k.cy);

  Json bad = pose_to_json(Pose{}, 0);
  bad["R"][0] = 2.0;
  CHECK_THROWS_AS(pose_from_json(bad), ValidationError);
}

TEST_CASE("schema validation reports the failing path") {
  const Json schema = Json{
      {"type", "object"},
      {"additionalProperties", false},
      {"required", Json::array({"name", "items"})},
      {"properties",
       Json{{"name",
             Json{{"type", "string"},
                  {"enum", Json::array({"alpha", "beta"})}}},
            {"count", Json{{"type", "integer"}, {"minimum", 0}, {"maximum", 10}}},
            {"items",
             Json{{"type", "array"},
                  {"minItems", 1},
                  {"maxItems", 3},
                  {"items", Json{{"type", "object"},
                                 {"required", Json::array({"v"})},
                                 {"properties",
                                  Json{{"v", Json{{"type", "number"}}}}}}}}}}}};

  const Json good = Json{{"name", "alpha"},
                         {"count", 3},
                         {"items", Json::array({Json{{"v", 1.5}}})}};
  CHECK_NOTHROW(validate_schema(good, schema));

  const auto message_of = [&](const Json& doc) {
    try {
      validate_schema(doc, schema);
    } catch (const ValidationError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };

  Json d = good;
  d.erase("items");
  CHECK(message_of(d).find("missing required field \"items\"") !=
        std::string::npos);

  d = good;
  d["count"] = 2.5;
  CHECK(message_of(d).find("$.count") != std::string::npos);

  d = good;
  d["count"] = 11;
  CHECK(message_of(d).find("above maximum") != std::string::npos);

  d = good;
  d["name"] = "gamma";
  CHECK(message_of(d).find("not in enum") != std::string::npos);

  d = good;
  d["stray"] = 1;
  CHECK(message_of(d).find("unexpected field \"stray\"") != std::string::npos);

  d = good;
  d["items"] = Json::array();
  CHECK(message_of(d).find("too few items") != std::string::npos);

  d = good;
  d["items"] = Json::array({Json{{"v", 1}}, Json{{"v", "x"}}});
  CHECK(message_of(d).find("$.items[1].v") != std::string::npos);

  // integers pass as numbers but not the other way round
  CHECK_NOTHROW(validate_schema(Json(3), Json{{"type", "number"}}));
  CHECK_THROWS_AS(validate_schema(Json(3.5), Json{{"type", "integer"}}),
                  ValidationError);
}

TEST_CASE("shipped schema files match the built-in schemas byte for byte") {
  const std::filesystem::path docs =
      std::filesystem::path(TRACK6D_SOURCE_DIR) / "docs" / "schemas";
  for (const auto& [name, schema] : schemas::all()) {
    INFO("schema " << name);
    CHECK(slurp(docs / (name + ".schema.json")) == schema->dump(2) + "\n");
  }
}

TEST_CASE("flow archives round trip bitwise and reject corruption") {
  testutil::TmpDir tmp("flow");
  Rng rng(5);
  FlowField f(11, 13, 4, 5);
  for (auto& v : f.grid.data) v = float(rng.normal(0, 3));
  const auto path = (tmp.path() / "f.bin").string();
  write_flow_bin(path, f);

  const FlowField back = read_flow_bin(path);
  CHECK(back.grid.height == 11);
  CHECK(back.grid.width == 13);
  CHECK(back.from_index == 4);
  CHECK(back.to_index == 5);
  CHECK(back.grid.data == f.grid.data);

  std::string bytes = slurp(path);
  bytes[0] = 'X';
  spew(tmp.path() / "bad_magic.bin", bytes);
  CHECK_THROWS_AS(read_flow_bin((tmp.path() / "bad_magic.bin").string()),
                  IoError);

  spew(tmp.path() / "short.bin", slurp(path).substr(0, 30));
  CHECK_THROWS_AS(read_flow_bin((tmp.path() / "short.bin").string()), IoError);
}

TEST_CASE("sequence directories round trip and flag what they carry") {
  testutil::TmpDir tmp("seq");
  const SyntheticSequence seq = make_sequence(tiny_spec(902));

  SECTION("full write") {
    write_sequence(tmp.path() / "s", seq);
    const LoadedSequence back = read_sequence(tmp.path() / "s");

    CHECK(back.spec.length == 4);
    CHECK(back.spec.seed == 902);
    CHECK(back.has_depth);
    CHECK(back.has_masks);
    CHECK(back.has_flow);
    CHECK(back.has_object);
    REQUIRE(back.images.size() == 4);
    REQUIRE(back.poses.size() == 4);
    REQUIRE(back.depths.size() == 4);
    REQUIRE(back.masks.size() == 4);
    REQUIRE(back.flows.size() == 3);

    for (int t = 0; t < 4; ++t) {
      const auto st = std::size_t(t);
      CHECK(back.images[st].data == seq.frames[st].image.data);
      CHECK(back.poses[st].R == seq.frames[st].gt_pose.R);
      CHECK(back.poses[st].T == seq.frames[st].gt_pose.T);
      CHECK(back.masks[st].grid.data == seq.frames[st].instance_mask.grid.data);
      CHECK(back.masks[st].frame_index == t);
      // depth is stored as whole millimeters; zero must stay exactly zero
      for (std::size_t p = 0; p < back.depths[st].data.size(); ++p) {
        const float orig = seq.frames[st].depth.data[p];
        if (orig == 0.0f)
          CHECK(back.depths[st].data[p] == 0.0f);
        else
          CHECK(std::abs(back.depths[st].data[p] - orig) <= 0.5f);
      }
    }
    for (int t = 0; t < 3; ++t) {
      CHECK(back.flows[std::size_t(t)].from_index == t);
      CHECK(back.flows[std::size_t(t)].grid.data ==
            seq.frames[std::size_t(t)].gt_flow_to_next->grid.data);
    }
    CHECK(back.object.points == seq.object.points);
    CHECK(back.object.colors == seq.object.colors);
    CHECK(back.object.splat_radius == seq.object.splat_radius);
  }

  SECTION("images-only write") {
    SequenceWriteOptions opt;
    opt.depth = false;
    opt.masks = false;
    opt.flow = false;
    write_sequence(tmp.path() / "lean", seq, opt);
    const LoadedSequence back = read_sequence(tmp.path() / "lean");
    CHECK(!back.has_depth);
    CHECK(!back.has_masks);
    CHECK(!back.has_flow);
    CHECK(back.depths.empty());
    CHECK(back.masks.empty());
    CHECK(back.flows.empty());
    CHECK(back.images.size() == 4);
  }
}

TEST_CASE("a sequence directory with tampered contents is rejected") {
  testutil::TmpDir tmp("tamper");
  const auto dir = tmp.path() / "s";
  write_sequence(dir, make_sequence(tiny_spec(31)));

  SECTION("no meta.json means not a sequence") {
    std::filesystem::remove(dir / "meta.json");
    CHECK_THROWS_AS(read_sequence(dir), IoError);
  }

  SECTION("meta missing a field") {
    Json meta = load_json((dir / "meta.json").string());
    meta.erase("has_flow");
    save_json((dir / "meta.json").string(), meta);
    CHECK_THROWS_AS(read_sequence(dir), ValidationError);
  }

  SECTION("pose count mismatch") {
    Json poses = load_json((dir / "poses.json").string());
    poses["poses"].erase(3);
    save_json((dir / "poses.json").string(), poses);
    CHECK_THROWS_AS(read_sequence(dir), ValidationError);
  }

  SECTION("corrupt frame image") {
    spew(dir / "frames" / "000001.png", "garbage");
    CHECK_THROWS_AS(read_sequence(dir), IoError);
  }

  SECTION("flow header out of step") {
    FlowField f = read_flow_bin((dir / "flow" / "000002.bin").string());
    f.from_index = 7;
    write_flow_bin((dir / "flow" / "000002.bin").string(), f);
    CHECK_THROWS_AS(read_sequence(dir), ValidationError);
  }
}

TEST_CASE("trajectories and reports reload with full fidelity") {
  testutil::TmpDir tmp("results");
  Rng rng(77);

  Trajectory traj;
  for (int i = 0; i < 6; ++i) {
    TrackedFrame f;
    f.pose = testutil::random_pose(rng);
    const Projection pr = project(CameraIntrinsics{100, 100, 64, 64}, f.pose.T);
    f.u = pr.u;
    f.v = pr.v;
    f.z = pr.z;
    f.code.du = rng.normal(0, 0.1);
    f.code.dv = rng.normal(0, 0.1);
    f.code.s = rng.normal(0, 0.05);
    f.code.omega = {rng.normal(0, 0.2), rng.normal(0, 0.2), rng.normal(0, 0.2)};
    f.crop = CropSpec::make(testutil::random_box(rng, 128, 128), 96, 96);
    traj.frames.push_back(f);
  }

  SECTION("trajectory") {
    const Json run = Json{{"note", "unit"}, {"input_size", 96}};
    save_trajectory(tmp.path() / "t.json", traj, run);
    const Json raw = load_json((tmp.path() / "t.json").string());
    CHECK(raw.at("run") == run);

    const Trajectory back = load_trajectory(tmp.path() / "t.json");
    REQUIRE(back.frames.size() == traj.frames.size());
    for (std::size_t i = 0; i < traj.frames.size(); ++i) {
      const TrackedFrame& a = traj.frames[i];
      const TrackedFrame& b = back.frames[i];
      CHECK(b.pose.R == a.pose.R);
      CHECK(b.pose.T == a.pose.T);
      CHECK(b.u == a.u);
      CHECK(b.v == a.v);
      CHECK(b.z == a.z);
      CHECK(b.code.du == a.code.du);
      CHECK(b.code.dv == a.code.dv);
      CHECK(b.code.s == a.code.s);
      CHECK(b.code.omega == a.code.omega);
      CHECK(b.crop.box == a.crop.box);
      // alpha comes back from the same division, hence bitwise equal
      CHECK(b.crop.alpha_u == a.crop.alpha_u);
      CHECK(b.crop.alpha_v == a.crop.alpha_v);
    }

    Json bad = trajectory_to_json(traj);
    bad["frames"][2]["frame"] = 5;
    CHECK_THROWS_AS(trajectory_from_json(bad), ValidationError);
  }

  SECTION("report") {
    std::vector<Pose> gt, pred;
    PointSet pts;
    for (int i = 0; i < 40; ++i)
      pts.push_back({rng.uniform(-60, 60), rng.uniform(-60, 60),
                     rng.uniform(-60, 60)});
    Pose p = testutil::random_pose(rng);
    for (int i = 0; i < 16; ++i) {
      p.R = rot_z(0.02) * p.R;
      p.T += Eigen::Vector3d(1.5, -0.5, 3.0);
      gt.push_back(p);
      Pose q = p;
      q.R = rot_x(rng.normal(0, 0.01)) * q.R;
      q.T += Eigen::Vector3d(rng.normal(0, 2), rng.normal(0, 2),
                             rng.normal(0, 2));
      pred.push_back(q);
    }
    const MetricReport r =
        evaluate_trajectory(pred, gt, pts, CameraIntrinsics{100, 100, 64, 64});
    REQUIRE(r.segments.size() == 1);

    save_report(tmp.path() / "r.json", r);
    const MetricReport back = load_report(tmp.path() / "r.json");

    CHECK(back.diameter_mm == r.diameter_mm);
    CHECK(back.config.segment_len == r.config.segment_len);
    REQUIRE(back.frames.size() == r.frames.size());
    for (std::size_t i = 0; i < r.frames.size(); ++i) {
      CHECK(back.frames[i].rot_deg == r.frames[i].rot_deg);
      CHECK(back.frames[i].trans_mm == r.frames[i].trans_mm);
      CHECK(back.frames[i].add_mm == r.frames[i].add_mm);
      CHECK(back.frames[i].add_s_mm == r.frames[i].add_s_mm);
      CHECK(back.frames[i].proj2d_px == r.frames[i].proj2d_px);
      CHECK(back.frames[i].rot_axis_deg == r.frames[i].rot_axis_deg);
      CHECK(back.frames[i].trans_axis_mm == r.frames[i].trans_axis_mm);
      CHECK(back.frames[i].correct_pose == r.frames[i].correct_pose);
    }
    CHECK(back.mean_rot_deg == r.mean_rot_deg);
    CHECK(back.mean_trans_mm == r.mean_trans_mm);
    CHECK(back.mean_add_mm == r.mean_add_mm);
    CHECK(back.mean_add_s_mm == r.mean_add_s_mm);
    CHECK(back.mean_proj2d_px == r.mean_proj2d_px);
    CHECK(back.frac_correct_pose == r.frac_correct_pose);
    CHECK(back.auc_add == r.auc_add);
    CHECK(back.auc_add_s == r.auc_add_s);
    REQUIRE(back.segments.size() == 1);
    CHECK(back.segments[0].start == 0);
    CHECK(back.segments[0].last == 14);
    CHECK(back.segments[0].rot_deg == r.segments[0].rot_deg);
    CHECK(back.segments[0].gt_trans_mm == r.segments[0].gt_trans_mm);
    CHECK(back.segment_summary.mean_rot_deg == r.segment_summary.mean_rot_deg);
    CHECK(back.segment_summary.base_trans_mm ==
          r.segment_summary.base_trans_mm);
  }
}

TEST_CASE("dataset generation is reproducible byte for byte") {
  testutil::TmpDir tmp("dataset");
  DatasetSpec spec;
  spec.base = tiny_spec(0);
  spec.base.length = 3;
  spec.count = 3;
  spec.seed = 77;

  const Json manifest = generate_dataset(spec, tmp.path() / "a");
  CHECK_NOTHROW(validate_schema(manifest, schemas::dataset_manifest()));
  CHECK(load_dataset_manifest(tmp.path() / "a") == manifest);

  std::set<std::uint64_t> seeds;
  for (const auto& s : manifest.at("sequences"))
    seeds.insert(s.at("seed").get<std::uint64_t>());
  CHECK(seeds.size() == 3);

  generate_dataset(spec, tmp.path() / "b");
  CHECK(slurp(tmp.path() / "a" / "manifest.json") ==
        slurp(tmp.path() / "b" / "manifest.json"));
  for (const char* rel : {"seq_000000/meta.json", "seq_000001/frames/000002.png",
                          "seq_000002/flow/000000.bin",
                          "seq_000002/object.json"})
    CHECK(slurp(tmp.path() / "a" / rel) == slurp(tmp.path() / "b" / rel));

  // the manifest alone rebuilds a sequence: base spec + recorded child seed
  SequenceSpec third = sequence_spec_from_json(manifest.at("base"));
  third.seed = manifest.at("sequences").at(2).at("seed").get<std::uint64_t>();
  write_sequence(tmp.path() / "c", make_sequence(third));
  for (const char* rel : {"frames/000001.png", "poses.json", "masks/000002.png"})
    CHECK(slurp(tmp.path() / "c" / rel) ==
          slurp(tmp.path() / "a" / "seq_000002" / rel));

  // child seeds do not collide at dataset scale
  std::set<std::uint64_t> many;
  for (std::uint64_t i = 0; i < 10000; ++i)
    many.insert(Rng::child_seed(77, i));
  CHECK(many.size() == 10000);
}
