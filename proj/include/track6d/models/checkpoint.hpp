#pragma once

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "track6d/common.hpp"
#include "track6d/models/motion_model.hpp"

namespace track6d {

// Config <-> JSON. Shared by checkpoints and the command-line config files.
inline nlohmann::json to_json(const EncoderConfig& c) {
  return {{"input_size", c.input_size},
          {"embed_dim", c.embed_dim},
          {"width_scale", c.width_scale},
          {"blocks_per_stage", c.blocks_per_stage}};
}

inline nlohmann::json to_json(const TransformerConfig& c) {
  return {{"layers", c.layers},
          {"heads", c.heads},
          {"ff_width", c.ff_width},
          {"max_window", c.max_window}};
}

inline nlohmann::json to_json(const RegressorConfig& c) {
  return {{"hidden", c.hidden}};
}

inline nlohmann::json to_json(const ModelConfig& c) {
  return {{"kind", to_string(c.kind)},
          {"window", c.window},
          {"encoder", to_json(c.encoder)},
          {"transformer", to_json(c.transformer)},
          {"regressor", to_json(c.regressor)}};
}

inline EncoderConfig encoder_config_from_json(const nlohmann::json& j) {
  EncoderConfig c;
  c.input_size = j.at("input_size").get<int>();
  c.embed_dim = j.at("embed_dim").get<int>();
  c.width_scale = j.at("width_scale").get<double>();
  c.blocks_per_stage = j.at("blocks_per_stage").get<int>();
  return c;
}

inline TransformerConfig transformer_config_from_json(const nlohmann::json& j) {
  TransformerConfig c;
  c.layers = j.at("layers").get<int>();
  c.heads = j.at("heads").get<int>();
  c.ff_width = j.at("ff_width").get<int>();
  c.max_window = j.at("max_window").get<int>();
  return c;
}

inline RegressorConfig regressor_config_from_json(const nlohmann::json& j) {
  RegressorConfig c;
  c.hidden = j.at("hidden").get<std::vector<int>>();
  return c;
}

inline ModelConfig model_config_from_json(const nlohmann::json& j) {
  ModelConfig c;
  c.kind = model_kind_from_string(j.at("kind").get<std::string>());
  c.window = j.at("window").get<int>();
  c.encoder = encoder_config_from_json(j.at("encoder"));
  c.transformer = transformer_config_from_json(j.at("transformer"));
  c.regressor = regressor_config_from_json(j.at("regressor"));
  c.validate();
  return c;
}

struct CheckpointMeta {
  std::uint64_t seed = 0;
  std::int64_t step = 0;
};

namespace detail {

constexpr char kCheckpointMagic[4] = {'T', '6', 'D', 'C'};
constexpr std::uint32_t kCheckpointVersion = 1;

template <typename T>
void write_pod(std::ostream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_pod(std::istream& is, const std::string& path) {
  T v;
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw IoError(path, "truncated checkpoint");
  return v;
}

}  // namespace detail

// Single-file archive: magic, version, JSON header (configs, metadata, the
// tensor directory), then raw float32 payloads in directory order. Values
// are stored in Eigen's column-major order. Reload is bit-exact at float32.
template <typename S>
inline void save_checkpoint(const std::filesystem::path& path,
                            MotionModel<S>& model, const CheckpointMeta& meta) {
  ParamList<S> params = model.params();
  nlohmann::json tensors = nlohmann::json::array();
  for (const Param<S>* p : params)
    tensors.push_back({{"name", p->name},
                       {"rows", std::int64_t(p->w.rows())},
                       {"cols", std::int64_t(p->w.cols())}});
  nlohmann::json header = {{"format", detail::kCheckpointVersion},
                           {"model", to_json(model.config())},
                           {"seed", meta.seed},
                           {"step", meta.step},
                           {"scalar", "f32"},
                           {"tensors", tensors}};
  const std::string header_str = header.dump();

  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError(tmp.string(), "cannot open for writing");
    os.write(detail::kCheckpointMagic, 4);
    detail::write_pod(os, detail::kCheckpointVersion);
    detail::write_pod(os, std::uint64_t(header_str.size()));
    os.write(header_str.data(), std::streamsize(header_str.size()));
    std::vector<float> buf;
    for (const Param<S>* p : params) {
      buf.resize(std::size_t(p->w.size()));
      for (Eigen::Index i = 0; i < p->w.size(); ++i)
        buf[std::size_t(i)] = float(p->w.data()[i]);
      os.write(reinterpret_cast<const char*>(buf.data()),
               std::streamsize(buf.size() * sizeof(float)));
    }
    if (!os) throw IoError(tmp.string(), "write failed");
  }
  std::filesystem::rename(tmp, path);
}

// Reads just the header; cheap way to recover the architecture.
inline nlohmann::json checkpoint_header(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError(path.string(), "cannot open");
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, detail::kCheckpointMagic, 4) != 0)
    throw IoError(path.string(), "not a checkpoint file");
  const auto version = detail::read_pod<std::uint32_t>(is, path.string());
  if (version != detail::kCheckpointVersion)
    throw IoError(path.string(),
                  "unsupported checkpoint version " + std::to_string(version));
  const auto len = detail::read_pod<std::uint64_t>(is, path.string());
  std::string header(len, '\0');
  is.read(header.data(), std::streamsize(len));
  if (!is) throw IoError(path.string(), "truncated header");
  try {
    return nlohmann::json::parse(header);
  } catch (const nlohmann::json::exception& e) {
    throw IoError(path.string(), std::string("bad header JSON: ") + e.what());
  }
}

template <typename S>
inline MotionModel<S> load_checkpoint(const std::filesystem::path& path,
                                      CheckpointMeta* meta = nullptr) {
  const nlohmann::json header = checkpoint_header(path);
  const ModelConfig cfg = model_config_from_json(header.at("model"));
  MotionModel<S> model(cfg);
  ParamList<S> params = model.params();
  const nlohmann::json& tensors = header.at("tensors");
  if (tensors.size() != params.size())
    throw IoError(path.string(), "tensor count does not match the model");

  // Re-walk the preamble rather than trusting a re-dump of the header to
  // reproduce the stored byte length.
  std::ifstream is(path, std::ios::binary);
  char magic[4];
  is.read(magic, 4);
  detail::read_pod<std::uint32_t>(is, path.string());
  const auto len = detail::read_pod<std::uint64_t>(is, path.string());
  is.seekg(std::streamoff(len), std::ios::cur);

  std::vector<float> buf;
  for (std::size_t i = 0; i < params.size(); ++i) {
    const nlohmann::json& t = tensors[i];
    Param<S>* p = params[i];
    if (t.at("name").get<std::string>() != p->name)
      throw IoError(path.string(), "tensor order mismatch at " + p->name);
    if (t.at("rows").get<std::int64_t>() != p->w.rows() ||
        t.at("cols").get<std::int64_t>() != p->w.cols())
      throw IoError(path.string(), "tensor shape mismatch at " + p->name);
    buf.resize(std::size_t(p->w.size()));
    is.read(reinterpret_cast<char*>(buf.data()),
            std::streamsize(buf.size() * sizeof(float)));
    if (!is) throw IoError(path.string(), "truncated tensor " + p->name);
    for (Eigen::Index j = 0; j < p->w.size(); ++j)
      p->w.data()[j] = S(buf[std::size_t(j)]);
  }
  if (meta) {
    meta->seed = header.at("seed").get<std::uint64_t>();
    meta->step = header.at("step").get<std::int64_t>();
  }
  return model;
}

}  // namespace track6d
