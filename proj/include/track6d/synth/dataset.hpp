#pragma once

#include <filesystem>
#include <string>

#include "track6d/io/sequence_io.hpp"

namespace track6d {

// A batch of independent sequences sharing one base spec. Each sequence gets
// a child seed derived from the master seed, so the manifest alone is enough
// to regenerate every byte.
struct DatasetSpec {
  SequenceSpec base;  // base.seed is ignored; child seeds take its place
  int count = 1;
  std::uint64_t seed = 0;

  void validate() const {
    base.validate();
    check(count >= 1, "DatasetSpec: count must be >= 1");
  }
};

inline std::string sequence_dir_name(int i) {
  return "seq_" + detail::frame_name(i);
}

// Writes out_dir/seq_NNNNNN/... for every sequence, then manifest.json last
// as the completeness marker. Returns the manifest.
inline Json generate_dataset(const DatasetSpec& spec,
                             const std::filesystem::path& out_dir,
                             const SequenceWriteOptions& opt = {}) {
  spec.validate();
  std::filesystem::create_directories(out_dir);
  Json seqs = Json::array();
  for (int i = 0; i < spec.count; ++i) {
    SequenceSpec s = spec.base;
    s.seed = Rng::child_seed(spec.seed, std::uint64_t(i));
    const std::string name = sequence_dir_name(i);
    write_sequence(out_dir / name, make_sequence(s), opt);
    seqs.push_back(Json{{"name", name}, {"seed", s.seed}});
  }
  const Json manifest{{"format", "track6d-dataset"},
                      {"version", 1},
                      {"seed", spec.seed},
                      {"count", spec.count},
                      {"base", to_json(spec.base)},
                      {"sequences", std::move(seqs)}};
  save_json((out_dir / "manifest.json").string(), manifest);
  return manifest;
}

inline Json load_dataset_manifest(const std::filesystem::path& dir) {
  return load_validated(dir / "manifest.json", schemas::dataset_manifest());
}

}  // namespace track6d
