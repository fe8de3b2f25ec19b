#include <catch2/catch_amalgamated.hpp>
#include <cstdlib>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include "testutil.hpp"
#include "track6d/cli/cli.hpp"

using namespace track6d;

namespace {

int cli(std::initializer_list<std::string> args) {
  return run_cli(std::vector<std::string>(args));
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(bool(in));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Small enough to render, train, and track in well under a second.
std::vector<std::string> tiny_gen_args(const std::filesystem::path& out,
                                       int count, int length,
                                       std::uint64_t seed) {
  return {"synth-gen",      "--out",    out.string(),
          "--count",        std::to_string(count),
          "--length",       std::to_string(length),
          "--seed",         std::to_string(seed),
          "--width",        "64",
          "--height",       "64",
          "--fx",           "60",
          "--fy",           "60",
          "--points",       "64"};
}

// setenv/unsetenv bracket so a test cannot leak the variable into the rest
// of the suite.
class EnvGuard {
 public:
  EnvGuard(const char* name, const std::string& value) : name_(name) {
    ::setenv(name, value.c_str(), 1);
  }
  ~EnvGuard() { ::unsetenv(name_); }

 private:
  const char* name_;
};

}  // namespace

TEST_CASE("the command line pipeline runs end to end") {
  testutil::TmpDir tmp("cli");
  const auto ds = tmp.path() / "ds";
  const auto seq0 = ds / "seq_000000";

  REQUIRE(run_cli(tiny_gen_args(ds, 2, 6, 7)) == kExitOk);
  REQUIRE(std::filesystem::exists(ds / "manifest.json"));
  REQUIRE(std::filesystem::exists(seq0 / "meta.json"));

  const auto ckpt = tmp.path() / "model.ckpt";
  REQUIRE(cli({"train", "--data", ds.string(), "--out", ckpt.string(),
               "--preset", "tiny", "--kind", "two_frame", "--steps", "5",
               "--batch", "4", "--seed", "3"}) == kExitOk);
  const Json header = checkpoint_header(ckpt);
  CHECK(header.at("model").at("kind") == "two_frame");
  CHECK(header.at("step") == 5);

  // Loss curve: commented JSON header naming the run, then step,loss rows.
  const std::string csv = slurp(ckpt.string() + ".loss.csv");
  REQUIRE(csv.rfind("# {", 0) == 0);
  const Json run_echo = Json::parse(csv.substr(2, csv.find('\n') - 2));
  CHECK(run_echo.at("command") == "train");
  CHECK(run_echo.at("samples") == 10);  // 2 sequences x 5 windows
  CHECK(csv.find("\nstep,loss\n0,") != std::string::npos);

  const LoadedSequence gt = read_sequence(seq0);

  const auto traj_model = tmp.path() / "traj_model.json";
  REQUIRE(cli({"track", "--data", seq0.string(), "--model", ckpt.string(),
               "--out", traj_model.string()}) == kExitOk);
  const Trajectory tm = load_trajectory(traj_model);
  REQUIRE(tm.frames.size() == 6);
  // Ground-truth gauge: frame 0 matches the true pose up to projection
  // round-off.
  CHECK(rotation_error_deg(tm.frames[0].pose, gt.poses[0]) < 1e-9);
  CHECK(translation_error_mm(tm.frames[0].pose, gt.poses[0]) < 1e-9);
  CHECK(load_json(traj_model.string()).at("run").at("command") == "track");

  const auto traj_oracle = tmp.path() / "traj_oracle.json";
  REQUIRE(cli({"track", "--data", seq0.string(), "--oracle", "--out",
               traj_oracle.string()}) == kExitOk);
  const Trajectory to = load_trajectory(traj_oracle);
  REQUIRE(to.frames.size() == 6);
  // The 1e-5 rotation bound is the arccos noise floor near zero, not real
  // drift; translation has no such conditioning problem.
  for (std::size_t i = 0; i < to.frames.size(); ++i) {
    CHECK(rotation_error_deg(to.frames[i].pose, gt.poses[i]) < 1e-5);
    CHECK(translation_error_mm(to.frames[i].pose, gt.poses[i]) < 1e-6);
  }

  const auto report = tmp.path() / "report.json";
  REQUIRE(cli({"eval", "--traj", traj_oracle.string(), "--data",
               seq0.string(), "--out", report.string()}) == kExitOk);
  const MetricReport r = load_report(report);
  REQUIRE(r.frames.size() == 6);
  CHECK(r.mean_rot_deg < 1e-5);
  CHECK(r.mean_trans_mm < 1e-6);
  CHECK(r.auc_add > 0.999);
  CHECK(r.segment_summary.segments == 0);  // 6 frames < one 15-frame segment
  CHECK(load_json(report.string()).at("run").at("command") == "eval");

  const auto plots = tmp.path() / "plots";
  REQUIRE(cli({"plot", "--report", report.string(), "--out-dir",
               plots.string()}) == kExitOk);
  for (const char* name :
       {"rotation_axes.png", "translation_axes.png", "rotation_error.png",
        "translation_error.png", "add.png"}) {
    const ImageU8 img = read_png_rgb8((plots / name).string());
    CHECK(img.width == 640);
    CHECK(img.height == 360);
  }
}

TEST_CASE("bad invocations exit with the usage code") {
  testutil::TmpDir tmp("cli_usage");
  const std::string out = (tmp.path() / "x").string();

  CHECK(cli({}) == kExitUsage);
  CHECK(cli({"frobnicate"}) == kExitUsage);
  CHECK(cli({"synth-gen", "--bogus"}) == kExitUsage);
  CHECK(cli({"synth-gen"}) == kExitUsage);  // --out missing
  CHECK(cli({"synth-gen", "--out", out, "--protocol", "imagenet"}) ==
        kExitUsage);
  CHECK(cli({"synth-gen", "--out", out, "--shape", "torus"}) == kExitUsage);
  CHECK(cli({"synth-gen", "--out", out, "--length", "1"}) == kExitUsage);
  CHECK(cli({"synth-gen", "--out", out, "--length", "-3"}) == kExitUsage);
  CHECK(cli({"train", "--data", out, "--out", out, "--kind", "two_frame",
             "--window", "3"}) == kExitUsage);
  CHECK(cli({"train", "--data", out, "--out", out, "--preset", "huge"}) ==
        kExitUsage);
  CHECK(cli({"track", "--data", out, "--out", out}) == kExitUsage);
  CHECK(cli({"track", "--data", out, "--out", out, "--oracle", "--model",
             "m.ckpt"}) == kExitUsage);
  CHECK(cli({"track", "--data", out, "--out", out, "--oracle", "--z0",
             "-50"}) == kExitUsage);
  CHECK(cli({"track", "--data", out, "--out", out, "--oracle", "--z0",
             "soon"}) == kExitUsage);
  CHECK(cli({"track", "--data", out, "--out", out, "--oracle", "--r0",
             "up"}) == kExitUsage);
  CHECK(cli({"eval", "--traj", out, "--data", out, "--out", out,
             "--segment-len", "1"}) == kExitUsage);
  CHECK(cli({"plot", "--report", out, "--out-dir", out, "--width", "20"}) ==
        kExitUsage);
  CHECK(cli({"--help"}) == kExitOk);
  CHECK(cli({"synth-gen", "--help"}) == kExitOk);
  CHECK(cli({"--version"}) == kExitOk);
}

TEST_CASE("runtime failures exit with the runtime code") {
  testutil::TmpDir tmp("cli_runtime");
  const std::string missing = (tmp.path() / "nope").string();
  const std::string out = (tmp.path() / "out.json").string();

  CHECK(cli({"train", "--data", missing, "--out", out}) == kExitRuntime);
  CHECK(cli({"track", "--data", missing, "--oracle", "--out", out}) ==
        kExitRuntime);
  CHECK(cli({"plot", "--report", missing, "--out-dir", out}) == kExitRuntime);

  // A dataset root is not a sequence directory: no meta.json at that level.
  const auto ds = tmp.path() / "ds";
  REQUIRE(run_cli(tiny_gen_args(ds, 1, 4, 1)) == kExitOk);
  CHECK(cli({"track", "--data", ds.string(), "--oracle", "--out", out}) ==
        kExitRuntime);

  // Checkpoint path exists but holds junk.
  const auto junk = tmp.path() / "junk.ckpt";
  std::ofstream(junk) << "not a checkpoint";
  CHECK(cli({"track", "--data", (ds / "seq_000000").string(), "--model",
             junk.string(), "--out", out}) == kExitRuntime);

  // Trajectory length differs from the ground-truth sequence length.
  const auto traj = tmp.path() / "traj.json";
  REQUIRE(cli({"track", "--data", (ds / "seq_000000").string(), "--oracle",
               "--out", traj.string()}) == kExitOk);
  const auto ds6 = tmp.path() / "ds6";
  REQUIRE(run_cli(tiny_gen_args(ds6, 1, 6, 2)) == kExitOk);
  CHECK(cli({"eval", "--traj", traj.string(), "--data",
             (ds6 / "seq_000000").string(), "--out", out}) == kExitRuntime);
}

TEST_CASE("config files fill in what flags leave unset") {
  testutil::TmpDir tmp("cli_config");
  const auto cfg_path = tmp.path() / "gen.json";
  std::ofstream(cfg_path) << Json{{"length", 4}, {"seed", 11},  {"fx", 60},
                                  {"fy", 60},    {"width", 64}, {"height", 64},
                                  {"points", 64}}
                                 .dump();

  // --seed on the command line beats the config value; everything else comes
  // from the file.
  const auto ds = tmp.path() / "ds";
  REQUIRE(cli({"synth-gen", "--out", ds.string(), "--config",
               cfg_path.string(), "--seed", "12"}) == kExitOk);
  const Json manifest = load_dataset_manifest(ds);
  CHECK(manifest.at("seed") == 12);
  CHECK(manifest.at("base").at("length") == 4);
  CHECK(manifest.at("base").at("width") == 64);
  CHECK(manifest.at("base").at("intrinsics").at("fx") == 60.0);

  const auto bad_key = tmp.path() / "bad_key.json";
  std::ofstream(bad_key) << R"({"lenght": 4})";
  CHECK(cli({"synth-gen", "--out", ds.string(), "--config",
             bad_key.string()}) == kExitUsage);

  const auto bad_type = tmp.path() / "bad_type.json";
  std::ofstream(bad_type) << R"({"length": "four"})";
  CHECK(cli({"synth-gen", "--out", ds.string(), "--config",
             bad_type.string()}) == kExitUsage);

  const auto not_object = tmp.path() / "list.json";
  std::ofstream(not_object) << "[1, 2]";
  CHECK(cli({"synth-gen", "--out", ds.string(), "--config",
             not_object.string()}) == kExitUsage);
}

TEST_CASE("relative paths resolve against the data root variable") {
  testutil::TmpDir tmp("cli_root");
  EnvGuard guard("TRACK6D_DATA_ROOT", tmp.path().string());

  REQUIRE(run_cli(tiny_gen_args("envds", 1, 4, 5)) == kExitOk);
  REQUIRE(std::filesystem::exists(tmp.path() / "envds" / "manifest.json"));

  REQUIRE(cli({"track", "--data", "envds/seq_000000", "--oracle", "--out",
               "traj.json"}) == kExitOk);
  CHECK(std::filesystem::exists(tmp.path() / "traj.json"));

  // Absolute paths are taken as-is even while the variable is set.
  const auto abs_out = tmp.path() / "abs_traj.json";
  REQUIRE(cli({"track", "--data", "envds/seq_000000", "--oracle", "--out",
               abs_out.string()}) == kExitOk);
  CHECK(std::filesystem::exists(abs_out));
}
