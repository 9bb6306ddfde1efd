#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ambiaug/clip.hpp"
#include "ambiaug/labels.hpp"
#include "ambiaug/sampling.hpp"

namespace ambiaug {

enum class LambdaMode { Fixed, Beta };

// Mixup weighting policy. The default keeps lambda fixed at 0 (pure
// directional transform); beta mode draws lambda ~ Beta(alpha, beta) per
// variant.
struct MixupPolicy {
  LambdaMode lambda_mode = LambdaMode::Fixed;
  double lambda = 0.0;
  double alpha = 1.0;
  double beta = 1.0;
  bool transform_labels = false;
  int output_order = 1;

  void validate() const;
};

struct AugmentConfig {
  CapDistribution distribution = CapDistribution::soft();
  MixupPolicy policy;
  int grid_degree = 7;
  uint64_t seed = 0;
  // Probability that a variant is transformed at all; skipped variants pass
  // through unchanged. The skip draw is taken only when the probability is
  // below 1, so the default configuration spends no randomness on it.
  double apply_probability = 1.0;
  int variants_per_clip = 1;
  bool extended_labels = false;
  double frame_length_ms = 100.0;
  int jobs = 1;

  void validate() const;
};

// Parses a key=value configuration file ('#' starts a comment). Unknown keys
// are an error. See README for the schema.
AugmentConfig load_config(const std::filesystem::path& path);

// Applies one config key=value override onto an existing config.
void apply_config_entry(AugmentConfig& config, const std::string& key, const std::string& value);

// Everything needed to reproduce one output variant.
struct ProvenanceRecord {
  std::string clip_id;
  int variant = 0;
  bool applied = true;
  std::string audio_file;
  std::string label_file;
  std::optional<CapParams> cap;
  double lambda = 0.0;
  int grid_degree = 0;
  int order_in = 0;
  int order_out = 0;
  bool label_transform = false;
  uint64_t seed = 0;
  uint64_t substream = 0;
  std::vector<std::string> warnings;

  std::string to_json() const;
};

struct AugmentResult {
  AmbisonicClip clip;
  AccdoaFrameLabels labels;
  ProvenanceRecord record;
};

// Transforms one clip variant. Draw order on the stream: the skip draw (only
// when apply_probability < 1), then cap parameters, then lambda (only in
// beta mode). The grid must match config.grid_degree.
AugmentResult augment_clip(const AmbisonicClip& clip, const AccdoaFrameLabels& labels,
                           const AugmentConfig& config, const SphericalGrid& grid,
                           RandomStream& stream);

struct ManifestEntry {
  std::string clip_id;
  std::filesystem::path audio;
  std::filesystem::path labels;
};

// Pairs every *.wav in the directory with its same-stem .csv, sorted by clip
// id. A missing label file leaves the labels path empty; the pipeline
// reports it as a per-clip failure.
std::vector<ManifestEntry> scan_input_dir(const std::filesystem::path& dir);

// Reads a manifest of "audio_path,label_path" lines ('#' comments allowed).
// Relative paths resolve against the manifest's directory.
std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path);

struct DatasetReport {
  int clips = 0;
  int outputs = 0;
  int failures = 0;
  std::vector<std::string> errors;
};

// Processes every manifest entry: variants_per_clip outputs per clip, named
// <stem>_v<k>.wav / <stem>_v<k>.csv, plus provenance.jsonl sorted by
// (clip_id, variant). Clips are processed in parallel up to config.jobs;
// output bytes depend only on (seed, clip id, variant), never on scheduling.
// A failing clip is reported and skipped without aborting the batch.
DatasetReport augment_dataset(const std::vector<ManifestEntry>& entries,
                              const std::filesystem::path& out_dir, const AugmentConfig& config);

}  // namespace ambiaug
