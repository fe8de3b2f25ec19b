#pragma once

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "track6d/io.hpp"
#include "track6d/metrics.hpp"
#include "track6d/models.hpp"
#include "track6d/plot.hpp"
#include "track6d/segmask.hpp"
#include "track6d/synth/dataset.hpp"
#include "track6d/tracker.hpp"

namespace track6d {

// Exit codes of the command-line surface: 0 done, 2 the invocation was wrong
// (bad flag, bad config, invalid combination), 3 the work itself failed
// (missing file, lost track, diverged training).
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitRuntime = 3;

// Relative paths resolve against TRACK6D_DATA_ROOT when it is set, so
// scripted runs do not depend on the current directory.
inline std::filesystem::path resolve_path(const std::string& p) {
  std::filesystem::path path(p);
  if (path.is_absolute()) return path;
  if (const char* root = std::getenv("TRACK6D_DATA_ROOT"); root && *root)
    return std::filesystem::path(root) / path;
  return path;
}

namespace cli_detail {

// A value a --config file may supply. Precedence is flag > file > default:
// the file only writes targets whose flag was not given on the command line.
struct ConfigBinding {
  std::string key;
  std::function<void(const Json&)> apply;
};

template <typename T>
ConfigBinding bind(const char* key, T* out) {
  return {key, [key, out](const Json& v) {
            try {
              v.get_to(*out);
            } catch (const nlohmann::json::exception&) {
              throw ValidationError(std::string("config key \"") + key +
                                    "\": wrong type");
            }
          }};
}

// "--" plus the key with underscores flipped to dashes; flags are registered
// under exactly this spelling so count() lookups stay mechanical.
inline std::string flag_of(const std::string& key) {
  std::string f = "--" + key;
  for (char& c : f)
    if (c == '_') c = '-';
  return f;
}

inline void apply_config(const CLI::App& sub, const std::string& config_path,
                         const std::vector<ConfigBinding>& binds) {
  if (config_path.empty()) return;
  const std::string path = resolve_path(config_path).string();
  const Json cfg = load_json(path);
  if (!cfg.is_object())
    throw ValidationError(path + ": config must be a JSON object");
  for (const auto& [key, value] : cfg.items()) {
    const ConfigBinding* hit = nullptr;
    for (const ConfigBinding& b : binds)
      if (b.key == key) {
        hit = &b;
        break;
      }
    if (!hit)
      throw ValidationError(path + ": unknown config key \"" + key + "\"");
    if (sub.count(flag_of(key)) == 0) hit->apply(value);
  }
}

// Config invariants violated by user-supplied numbers are usage errors, not
// runtime faults; remap so the exit code says which.
template <typename F>
void validate_usage(F&& f) {
  try {
    f();
  } catch (const DomainError& e) {
    throw ValidationError(e.what());
  }
}

inline void need(const std::string& value, const char* what) {
  if (value.empty())
    throw ValidationError(std::string(what) +
                          " is required (flag or config key)");
}

// "gt" means take the ground-truth value; anything else must parse fully as
// a positive number of millimetres.
inline double parse_z0_value(const std::string& s) {
  double v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || v <= 0)
    throw ValidationError("--z0 must be \"gt\" or a positive depth in mm");
  return v;
}

// A dataset directory (manifest.json) yields every sequence it lists; a bare
// sequence directory yields itself.
inline std::vector<LoadedSequence> load_sequences(
    const std::filesystem::path& dir) {
  std::vector<LoadedSequence> out;
  if (std::filesystem::exists(dir / "manifest.json")) {
    const Json manifest = load_dataset_manifest(dir);
    for (const Json& s : manifest.at("sequences"))
      out.push_back(read_sequence(dir / s.at("name").get<std::string>()));
  } else {
    out.push_back(read_sequence(dir));
  }
  return out;
}

struct SynthGenOpts {
  std::string out, config;
  int count = 1;
  std::uint64_t seed = 0;
  std::string protocol = "shapenet_video";
  int length = 0;  // 0: protocol default (100 video frames, 2 for pairs)
  int width = 128, height = 128;
  double fx = 120, fy = 120;
  double cx = -1, cy = -1;  // negative: image center
  int points = 400;
  std::string shape = "mixed";
  double splat_radius = 2.0;
  double min_half_extent = 50.0, max_half_extent = 110.0;
  bool no_depth = false, no_masks = false, no_flow = false;
};

inline void run_synth_gen(const CLI::App& sub, SynthGenOpts& o,
                          const std::vector<ConfigBinding>& binds) {
  apply_config(sub, o.config, binds);
  need(o.out, "synth-gen: --out");

  if (o.length < 0)
    throw ValidationError("synth-gen: --length must be at least 2");
  DatasetSpec spec;
  spec.count = o.count;
  spec.seed = o.seed;
  SequenceSpec& b = spec.base;
  b.protocol = protocol_from_string(o.protocol);
  b.length = o.length > 0
                 ? o.length
                 : (b.protocol == Protocol::modelnet_pair ? 2 : 100);
  b.width = o.width;
  b.height = o.height;
  b.intrinsics = CameraIntrinsics(o.fx, o.fy,
                                  o.cx >= 0 ? o.cx : o.width / 2.0,
                                  o.cy >= 0 ? o.cy : o.height / 2.0);
  b.object.n_points = o.points;
  b.object.shape = object_shape_from_string(o.shape);
  b.object.splat_radius = o.splat_radius;
  b.object.min_half_extent = o.min_half_extent;
  b.object.max_half_extent = o.max_half_extent;
  validate_usage([&] { spec.validate(); });

  SequenceWriteOptions w;
  w.depth = !o.no_depth;
  w.masks = !o.no_masks;
  w.flow = !o.no_flow;
  const std::filesystem::path out = resolve_path(o.out);
  generate_dataset(spec, out, w);
  std::printf("wrote %d sequence%s of %d frames under %s\n", spec.count,
              spec.count == 1 ? "" : "s", b.length, out.string().c_str());
}

inline void add_synth_gen(CLI::App& app) {
  auto o = std::make_shared<SynthGenOpts>();
  auto binds = std::make_shared<std::vector<ConfigBinding>>();
  CLI::App* sub = app.add_subcommand(
      "synth-gen", "Render a dataset of synthetic sequences to a directory");
  sub->add_option("--out", o->out, "Dataset output directory");
  sub->add_option("--config", o->config, "JSON file with per-flag defaults");
  sub->add_option("--count", o->count, "Number of sequences");
  sub->add_option("--seed", o->seed, "Master seed; per-sequence seeds derive");
  sub->add_option("--protocol", o->protocol,
                  "Motion protocol: shapenet_video or modelnet_pair");
  sub->add_option("--length", o->length, "Frames per sequence");
  sub->add_option("--width", o->width, "Image width");
  sub->add_option("--height", o->height, "Image height");
  sub->add_option("--fx", o->fx, "Focal length x (px)");
  sub->add_option("--fy", o->fy, "Focal length y (px)");
  sub->add_option("--cx", o->cx, "Principal point x (default: center)");
  sub->add_option("--cy", o->cy, "Principal point y (default: center)");
  sub->add_option("--points", o->points, "Points per object");
  sub->add_option("--shape", o->shape, "Object shape: mixed, box, ellipsoid");
  sub->add_option("--splat-radius", o->splat_radius, "Point splat radius (px)");
  sub->add_option("--min-half-extent", o->min_half_extent,
                  "Smallest object half extent (mm)");
  sub->add_option("--max-half-extent", o->max_half_extent,
                  "Largest object half extent (mm)");
  sub->add_flag("--no-depth", o->no_depth, "Skip the depth channel");
  sub->add_flag("--no-masks", o->no_masks, "Skip the mask channel");
  sub->add_flag("--no-flow", o->no_flow, "Skip the flow channel");
  *binds = {bind("out", &o->out),
            bind("count", &o->count),
            bind("seed", &o->seed),
            bind("protocol", &o->protocol),
            bind("length", &o->length),
            bind("width", &o->width),
            bind("height", &o->height),
            bind("fx", &o->fx),
            bind("fy", &o->fy),
            bind("cx", &o->cx),
            bind("cy", &o->cy),
            bind("points", &o->points),
            bind("shape", &o->shape),
            bind("splat_radius", &o->splat_radius),
            bind("min_half_extent", &o->min_half_extent),
            bind("max_half_extent", &o->max_half_extent),
            bind("no_depth", &o->no_depth),
            bind("no_masks", &o->no_masks),
            bind("no_flow", &o->no_flow)};
  sub->callback([o, binds, sub] { run_synth_gen(*sub, *o, *binds); });
}

struct TrainOpts {
  std::string data, out, csv, config;
  std::string kind = "two_frame";
  int window = 0;  // 0: kind default (2 two-frame, 4 multi-frame)
  std::string preset = "desk";
  int steps = 100, batch = 8;
  double lr = 1e-4, lambda = 1.0;
  std::uint64_t seed = 0;
};

inline void run_train(const CLI::App& sub, TrainOpts& o,
                      const std::vector<ConfigBinding>& binds) {
  apply_config(sub, o.config, binds);
  need(o.data, "train: --data");
  need(o.out, "train: --out");

  const ModelKind kind = model_kind_from_string(o.kind);
  if (kind == ModelKind::two_frame && o.window != 0 && o.window != 2)
    throw ValidationError("train: two_frame uses a fixed window of 2");
  const int window =
      o.window > 0 ? o.window : (kind == ModelKind::two_frame ? 2 : 4);
  ModelConfig mc;
  validate_usage([&] {
    if (o.preset == "desk")
      mc = ModelConfig::desk(kind, window);
    else if (o.preset == "full")
      mc = ModelConfig::full(kind, window);
    else if (o.preset == "tiny")
      mc = ModelConfig::tiny(kind, window);
    else
      throw ValidationError("unknown preset: " + o.preset);
  });

  const std::filesystem::path data = resolve_path(o.data);
  std::vector<TrainSample> samples;
  for (const LoadedSequence& s : load_sequences(data)) {
    if (!s.has_masks)
      throw ValidationError(data.string() +
                            ": training needs the mask channel");
    std::vector<TrainSample> w = build_training_windows(
        s.images, s.masks, s.poses, s.spec.intrinsics, mc.window,
        mc.encoder.input_size);
    samples.insert(samples.end(), std::make_move_iterator(w.begin()),
                   std::make_move_iterator(w.end()));
  }

  MotionModel<float> model(mc);
  Rng rng(o.seed);
  model.init(rng);
  TrainConfig tc;
  tc.window = mc.window;
  tc.batch = o.batch;
  tc.lr = o.lr;
  tc.steps = o.steps;
  tc.seed = o.seed;
  tc.lambda = o.lambda;
  validate_usage([&] { tc.validate(); });
  const TrainResult result = train(model, samples, tc);

  const std::filesystem::path out = resolve_path(o.out);
  if (out.has_parent_path())
    std::filesystem::create_directories(out.parent_path());
  save_checkpoint(out, model, CheckpointMeta{o.seed, std::int64_t(o.steps)});

  const Json run = {{"command", "train"},    {"data", o.data},
                    {"out", o.out},          {"kind", to_string(kind)},
                    {"preset", o.preset},    {"window", mc.window},
                    {"steps", o.steps},      {"batch", o.batch},
                    {"lr", o.lr},            {"lambda", o.lambda},
                    {"seed", o.seed},        {"samples", samples.size()}};
  std::string csv = "# " + run.dump() + "\nstep,loss\n";
  char line[64];
  for (std::size_t i = 0; i < result.losses.size(); ++i) {
    std::snprintf(line, sizeof line, "%zu,%.17g\n", i, result.losses[i]);
    csv += line;
  }
  const std::string csv_path =
      o.csv.empty() ? out.string() + ".loss.csv"
                    : resolve_path(o.csv).string();
  atomic_write_text(csv_path, csv);
  std::printf("trained %s/%s on %zu windows for %d steps, final loss %.6g\n",
              to_string(kind).c_str(), o.preset.c_str(), samples.size(),
              o.steps, result.losses.back());
  std::printf("checkpoint %s\nloss curve %s\n", out.string().c_str(),
              csv_path.c_str());
}

inline void add_train(CLI::App& app) {
  auto o = std::make_shared<TrainOpts>();
  auto binds = std::make_shared<std::vector<ConfigBinding>>();
  CLI::App* sub = app.add_subcommand(
      "train", "Fit a motion predictor on a rendered dataset");
  sub->add_option("--data", o->data, "Dataset or single sequence directory");
  sub->add_option("--out", o->out, "Checkpoint output path");
  sub->add_option("--csv", o->csv, "Loss curve path (default: <out>.loss.csv)");
  sub->add_option("--config", o->config, "JSON file with per-flag defaults");
  sub->add_option("--kind", o->kind, "two_frame or multi_frame");
  sub->add_option("--window", o->window, "Frames per window (multi_frame)");
  sub->add_option("--preset", o->preset, "Architecture: tiny, desk, full");
  sub->add_option("--steps", o->steps, "Optimization steps");
  sub->add_option("--batch", o->batch, "Windows per step");
  sub->add_option("--lr", o->lr, "Adam learning rate");
  sub->add_option("--lambda", o->lambda, "Translation loss weight");
  sub->add_option("--seed", o->seed, "Init and shuffle seed");
  *binds = {bind("data", &o->data),     bind("out", &o->out),
            bind("csv", &o->csv),       bind("kind", &o->kind),
            bind("window", &o->window), bind("preset", &o->preset),
            bind("steps", &o->steps),   bind("batch", &o->batch),
            bind("lr", &o->lr),         bind("lambda", &o->lambda),
            bind("seed", &o->seed)};
  sub->callback([o, binds, sub] { run_train(*sub, *o, *binds); });
}

struct TrackOpts {
  std::string data, model, out, config;
  bool oracle = false;
  int reinit_every = 0;
  std::string z0 = "gt", r0 = "gt";
  int window = 2;  // oracle predictor window
  double pad_frac = 0.1, margin = 0.0;
  int min_mask_px = 1;
};

inline void run_track(const CLI::App& sub, TrackOpts& o,
                      const std::vector<ConfigBinding>& binds) {
  apply_config(sub, o.config, binds);
  need(o.data, "track: --data");
  need(o.out, "track: --out");
  if (o.model.empty() && !o.oracle)
    throw ValidationError("track: pick a predictor: --model or --oracle");
  if (!o.model.empty() && o.oracle)
    throw ValidationError("track: --model and --oracle are exclusive");
  if (o.r0 != "gt" && o.r0 != "identity")
    throw ValidationError("--r0 must be \"gt\" or \"identity\"");
  const double z0_value = o.z0 == "gt" ? 0 : parse_z0_value(o.z0);

  const std::filesystem::path data = resolve_path(o.data);
  LoadedSequence seq = read_sequence(data);
  if (!seq.has_masks || !seq.has_flow)
    throw ValidationError(data.string() +
                          ": tracking needs the mask and flow channels");
  const CameraIntrinsics& k = seq.spec.intrinsics;

  std::optional<MotionModel<float>> model;
  std::unique_ptr<Predictor> pred;
  int input_size = 64;  // oracle ignores the crops; keep them cheap
  if (!o.model.empty()) {
    model.emplace(load_checkpoint<float>(resolve_path(o.model)));
    input_size = model->config().encoder.input_size;
    pred = std::make_unique<ModelPredictor<float>>(*model);
  } else {
    validate_usage([&] {
      pred = std::make_unique<OraclePredictor>(k, seq.poses, o.window);
    });
  }

  // The gauge choices: by default both are taken from ground truth so the
  // trajectory is directly comparable to it; override to see the freedom.
  const Projection p0 = project(k, seq.poses[0].T);
  TrackerInit init;
  init.u0 = p0.u;
  init.v0 = p0.v;
  init.z0 = o.z0 == "gt" ? p0.z : z0_value;
  init.R0 = o.r0 == "gt" ? seq.poses[0].R : Eigen::Matrix3d::Identity();
  init.box0 = mask_to_bbox_frac(seq.masks[0], o.pad_frac);

  TrackerConfig tc;
  tc.intrinsics = k;
  tc.input_size = input_size;
  tc.segmask = SegmaskConfig{o.pad_frac, o.margin, o.min_mask_px};
  tc.reinit_every = o.reinit_every;
  validate_usage([&] { tc.validate(); });

  ReinitSource reinit;
  const ReinitSource* rp = nullptr;
  if (o.reinit_every > 0) {
    reinit.poses = seq.poses;
    reinit.boxes.reserve(seq.masks.size());
    for (const Mask& m : seq.masks)
      reinit.boxes.push_back(mask_to_bbox_frac(m, o.pad_frac));
    rp = &reinit;
  }

  OracleFlowProvider flow(seq.flows);
  OracleMaskRefiner refiner(seq.masks);
  const Trajectory traj =
      track_sequence(seq.images, init, *pred, flow, refiner, tc, rp);

  Json run = {{"command", "track"},
              {"data", o.data},
              {"out", o.out},
              {"predictor", model ? "model" : "oracle"},
              {"window", pred->window()},
              {"input_size", input_size},
              {"reinit_every", o.reinit_every},
              {"z0", o.z0},
              {"r0", o.r0},
              {"pad_frac", o.pad_frac},
              {"margin", o.margin},
              {"min_mask_px", o.min_mask_px}};
  if (model) run["model"] = o.model;
  const std::filesystem::path out = resolve_path(o.out);
  if (out.has_parent_path())
    std::filesystem::create_directories(out.parent_path());
  save_trajectory(out, traj, run);
  std::printf("tracked %zu frames with the %s predictor -> %s\n",
              traj.frames.size(), model ? "learned" : "oracle",
              out.string().c_str());
}

inline void add_track(CLI::App& app) {
  auto o = std::make_shared<TrackOpts>();
  auto binds = std::make_shared<std::vector<ConfigBinding>>();
  CLI::App* sub = app.add_subcommand(
      "track", "Chain relative motions over a sequence into a trajectory");
  sub->add_option("--data", o->data, "Sequence directory");
  sub->add_option("--out", o->out, "Trajectory output path");
  sub->add_option("--config", o->config, "JSON file with per-flag defaults");
  sub->add_option("--model", o->model, "Checkpoint of a learned predictor");
  sub->add_flag("--oracle", o->oracle,
                "Use ground-truth relative motions instead of a model");
  sub->add_option("--window", o->window, "Oracle predictor window");
  sub->add_option("--reinit-every", o->reinit_every,
                  "Reset from ground truth every N frames (0: never)");
  sub->add_option("--z0", o->z0, "Initial depth in mm, or \"gt\"");
  sub->add_option("--r0", o->r0, "Initial rotation: \"gt\" or \"identity\"");
  sub->add_option("--pad-frac", o->pad_frac, "Box padding fraction");
  sub->add_option("--margin", o->margin, "Crop union margin");
  sub->add_option("--min-mask-px", o->min_mask_px,
                  "Mask pixels below which the target counts as lost");
  *binds = {bind("data", &o->data),
            bind("out", &o->out),
            bind("model", &o->model),
            bind("oracle", &o->oracle),
            bind("window", &o->window),
            bind("reinit_every", &o->reinit_every),
            bind("z0", &o->z0),
            bind("r0", &o->r0),
            bind("pad_frac", &o->pad_frac),
            bind("margin", &o->margin),
            bind("min_mask_px", &o->min_mask_px)};
  sub->callback([o, binds, sub] { run_track(*sub, *o, *binds); });
}

struct EvalOpts {
  std::string traj, data, out, config;
  double k_deg = 5, k_cm = 5, add_frac = 0.1, proj2d_px = 5, auc_max_mm = 100;
  int segment_len = 15;
};

inline void run_eval(const CLI::App& sub, EvalOpts& o,
                     const std::vector<ConfigBinding>& binds) {
  apply_config(sub, o.config, binds);
  need(o.traj, "eval: --traj");
  need(o.data, "eval: --data");
  need(o.out, "eval: --out");
  MetricConfig mc{o.k_deg,      o.k_cm,       o.add_frac,
                  o.proj2d_px,  o.auc_max_mm, o.segment_len};
  validate_usage([&] { mc.validate(); });

  const Trajectory traj = load_trajectory(resolve_path(o.traj));
  const std::filesystem::path data = resolve_path(o.data);
  const LoadedSequence seq = read_sequence(data);
  if (!seq.has_object)
    throw ValidationError(data.string() +
                          ": point metrics need the object channel");
  const MetricReport r = evaluate_trajectory(
      traj.poses(), seq.poses, seq.object.points, seq.spec.intrinsics, mc);

  const Json run = {{"command", "eval"}, {"traj", o.traj},
                    {"data", o.data},    {"out", o.out}};
  const std::filesystem::path out = resolve_path(o.out);
  if (out.has_parent_path())
    std::filesystem::create_directories(out.parent_path());
  save_report(out, r, run);

  std::printf("frames               %zu\n", r.frames.size());
  std::printf("model diameter (mm)  %.2f\n", r.diameter_mm);
  std::printf("mean rot (deg)       %.4f\n", r.mean_rot_deg);
  std::printf("mean trans (mm)      %.4f\n", r.mean_trans_mm);
  std::printf("mean ADD (mm)        %.4f\n", r.mean_add_mm);
  std::printf("mean ADD-S (mm)      %.4f\n", r.mean_add_s_mm);
  std::printf("mean Proj2D (px)     %.4f\n", r.mean_proj2d_px);
  std::printf("%g deg, %g cm        %.1f%%\n", mc.k_deg, mc.k_cm,
              100 * r.frac_correct_pose);
  std::printf("ADD <= %g d          %.1f%%\n", mc.add_frac,
              100 * r.frac_correct_add);
  std::printf("Proj2D <= %g px      %.1f%%\n", mc.proj2d_px,
              100 * r.frac_correct_proj2d);
  std::printf("AUC ADD / ADD-S      %.4f / %.4f\n", r.auc_add, r.auc_add_s);
  const SegmentSummary& ss = r.segment_summary;
  if (ss.segments > 0)
    std::printf(
        "segment ends (n=%d)  rot %.4f deg, trans %.4f mm "
        "(zero-motion baseline %.4f, %.4f)\n",
        ss.segments, ss.mean_rot_deg, ss.mean_trans_mm, ss.base_rot_deg,
        ss.base_trans_mm);
  std::printf("report %s\n", out.string().c_str());
}

inline void add_eval(CLI::App& app) {
  auto o = std::make_shared<EvalOpts>();
  auto binds = std::make_shared<std::vector<ConfigBinding>>();
  CLI::App* sub = app.add_subcommand(
      "eval", "Score a trajectory against its sequence's ground truth");
  sub->add_option("--traj", o->traj, "Trajectory file");
  sub->add_option("--data", o->data, "Sequence directory with ground truth");
  sub->add_option("--out", o->out, "Report output path");
  sub->add_option("--config", o->config, "JSON file with per-flag defaults");
  sub->add_option("--k-deg", o->k_deg, "Pose-correct rotation bound (deg)");
  sub->add_option("--k-cm", o->k_cm, "Pose-correct translation bound (cm)");
  sub->add_option("--add-frac", o->add_frac,
                  "ADD threshold as a fraction of the diameter");
  sub->add_option("--proj2d-px", o->proj2d_px, "Proj2D threshold (px)");
  sub->add_option("--auc-max-mm", o->auc_max_mm, "AUC integration ceiling");
  sub->add_option("--segment-len", o->segment_len,
                  "Frames per drift segment");
  *binds = {bind("traj", &o->traj),
            bind("data", &o->data),
            bind("out", &o->out),
            bind("k_deg", &o->k_deg),
            bind("k_cm", &o->k_cm),
            bind("add_frac", &o->add_frac),
            bind("proj2d_px", &o->proj2d_px),
            bind("auc_max_mm", &o->auc_max_mm),
            bind("segment_len", &o->segment_len)};
  sub->callback([o, binds, sub] { run_eval(*sub, *o, *binds); });
}

struct PlotOpts {
  std::string report, out_dir, config;
  int width = 640, height = 360;
};

inline void run_plot(const CLI::App& sub, PlotOpts& o,
                     const std::vector<ConfigBinding>& binds) {
  apply_config(sub, o.config, binds);
  need(o.report, "plot: --report");
  need(o.out_dir, "plot: --out-dir");
  if (o.width < 160 || o.height < 120)
    throw ValidationError("plot: charts need at least 160x120 pixels");

  const MetricReport r = load_report(resolve_path(o.report));
  const std::filesystem::path dir = resolve_path(o.out_dir);
  std::filesystem::create_directories(dir);
  const std::pair<const char*, LineChart> charts[] = {
      {"rotation_axes.png", rotation_axis_chart(r)},
      {"translation_axes.png", translation_axis_chart(r)},
      {"rotation_error.png", rotation_error_chart(r)},
      {"translation_error.png", translation_error_chart(r)},
      {"add.png", add_chart(r)},
  };
  for (const auto& [name, chart] : charts) {
    const std::string path = (dir / name).string();
    write_png_rgb8(path, chart.render(o.width, o.height));
    std::printf("%s\n", path.c_str());
  }
}

inline void add_plot(CLI::App& app) {
  auto o = std::make_shared<PlotOpts>();
  auto binds = std::make_shared<std::vector<ConfigBinding>>();
  CLI::App* sub =
      app.add_subcommand("plot", "Render error charts from a report");
  sub->add_option("--report", o->report, "Report file");
  sub->add_option("--out-dir", o->out_dir, "Directory for the chart PNGs");
  sub->add_option("--config", o->config, "JSON file with per-flag defaults");
  sub->add_option("--width", o->width, "Chart width (px)");
  sub->add_option("--height", o->height, "Chart height (px)");
  *binds = {bind("report", &o->report), bind("out_dir", &o->out_dir),
            bind("width", &o->width), bind("height", &o->height)};
  sub->callback([o, binds, sub] { run_plot(*sub, *o, *binds); });
}

}  // namespace cli_detail

// Entry point shared by the binary and the tests; args excludes the program
// name. Catches everything the library throws and turns it into an exit code.
inline int run_cli(std::vector<std::string> args) {
  CLI::App app{"synthetic 6-DoF object tracking from relative-motion codes"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "track6d 0.1.0");
  cli_detail::add_synth_gen(app);
  cli_detail::add_train(app);
  cli_detail::add_track(app);
  cli_detail::add_eval(app);
  cli_detail::add_plot(app);

  std::reverse(args.begin(), args.end());
  try {
    app.parse(std::move(args));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  } catch (const ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitRuntime;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitRuntime;
  }
  return kExitOk;
}

}  // namespace track6d
