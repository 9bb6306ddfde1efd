#include "ambiaug/augment.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <atomic>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "ambiaug/transform.hpp"
#include "ambiaug/wav_io.hpp"

namespace ambiaug {
namespace {

constexpr double kPi = 3.14159265358979323846;

bool parse_bool(const std::string& v, const std::string& key) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw std::invalid_argument("config: key '" + key + "' expects a boolean, got '" + v + "'");
}

double parse_double(const std::string& v, const std::string& key) {
  size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(v, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("config: key '" + key + "' expects a number, got '" + v + "'");
  }
  if (used != v.size()) {
    throw std::invalid_argument("config: key '" + key + "' expects a number, got '" + v + "'");
  }
  return out;
}

long parse_long(const std::string& v, const std::string& key) {
  size_t used = 0;
  long out = 0;
  try {
    out = std::stol(v, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("config: key '" + key + "' expects an integer, got '" + v + "'");
  }
  if (used != v.size()) {
    throw std::invalid_argument("config: key '" + key + "' expects an integer, got '" + v + "'");
  }
  return out;
}

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t");
  size_t e = s.find_last_not_of(" \t");
  if (b == std::string::npos) return "";
  return s.substr(b, e - b + 1);
}

}  // namespace

void MixupPolicy::validate() const {
  if (lambda < 0.0 || lambda > 1.0) {
    throw std::invalid_argument("MixupPolicy: lambda must be in [0, 1]");
  }
  if (lambda_mode == LambdaMode::Beta && (!(alpha > 0.0) || !(beta > 0.0))) {
    throw std::invalid_argument("MixupPolicy: alpha and beta must be > 0");
  }
  if (output_order < 0) {
    throw std::invalid_argument("MixupPolicy: output_order must be >= 0");
  }
  if (transform_labels && output_order != 1) {
    throw std::invalid_argument("MixupPolicy: label transform requires output_order 1");
  }
}

void AugmentConfig::validate() const {
  distribution.validate();
  policy.validate();
  if (apply_probability < 0.0 || apply_probability > 1.0) {
    throw std::invalid_argument("AugmentConfig: apply_probability must be in [0, 1]");
  }
  if (variants_per_clip < 1) {
    throw std::invalid_argument("AugmentConfig: variants_per_clip must be >= 1");
  }
  if (!(frame_length_ms > 0.0)) {
    throw std::invalid_argument("AugmentConfig: frame_length_ms must be > 0");
  }
  if (jobs < 1) throw std::invalid_argument("AugmentConfig: jobs must be >= 1");
  tdesign(grid_degree);  // rejects unsupported degrees
}

void apply_config_entry(AugmentConfig& config, const std::string& key, const std::string& value) {
  if (key == "regime") {
    const Interval az = config.distribution.azimuth;
    const Interval el = config.distribution.elevation;
    if (value == "soft") {
      config.distribution = CapDistribution::soft();
    } else if (value == "hard") {
      config.distribution = CapDistribution::hard();
    } else {
      throw std::invalid_argument("config: regime must be 'soft' or 'hard', got '" + value + "'");
    }
    config.distribution.azimuth = az;
    config.distribution.elevation = el;
  } else if (key == "azimuth_lo") {
    config.distribution.azimuth.lo = parse_double(value, key);
  } else if (key == "azimuth_hi") {
    config.distribution.azimuth.hi = parse_double(value, key);
  } else if (key == "elevation_lo") {
    config.distribution.elevation.lo = parse_double(value, key);
  } else if (key == "elevation_hi") {
    config.distribution.elevation.hi = parse_double(value, key);
  } else if (key == "grid_degree") {
    config.grid_degree = static_cast<int>(parse_long(value, key));
  } else if (key == "seed") {
    config.seed = static_cast<uint64_t>(std::stoull(value));
  } else if (key == "lambda_mode") {
    if (value == "fixed") {
      config.policy.lambda_mode = LambdaMode::Fixed;
    } else if (value == "beta") {
      config.policy.lambda_mode = LambdaMode::Beta;
    } else {
      throw std::invalid_argument("config: lambda_mode must be 'fixed' or 'beta'");
    }
  } else if (key == "lambda") {
    config.policy.lambda = parse_double(value, key);
  } else if (key == "alpha") {
    config.policy.alpha = parse_double(value, key);
  } else if (key == "beta") {
    config.policy.beta = parse_double(value, key);
  } else if (key == "transform_labels") {
    config.policy.transform_labels = parse_bool(value, key);
  } else if (key == "output_order") {
    config.policy.output_order = static_cast<int>(parse_long(value, key));
  } else if (key == "apply_probability") {
    config.apply_probability = parse_double(value, key);
  } else if (key == "variants_per_clip") {
    config.variants_per_clip = static_cast<int>(parse_long(value, key));
  } else if (key == "extended_labels") {
    config.extended_labels = parse_bool(value, key);
  } else if (key == "frame_length_ms") {
    config.frame_length_ms = parse_double(value, key);
  } else if (key == "jobs") {
    config.jobs = static_cast<int>(parse_long(value, key));
  } else {
    throw std::invalid_argument("config: unknown key '" + key + "'");
  }
}

AugmentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_config: cannot open " + path.string());

  AugmentConfig config;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const size_t eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config: " + path.filename().string() + " line " +
                                  std::to_string(line_no) + ": expected key=value");
    }
    try {
      apply_config_entry(config, trim(stripped.substr(0, eq)), trim(stripped.substr(eq + 1)));
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument(path.filename().string() + " line " + std::to_string(line_no) +
                                  ": " + e.what());
    }
  }
  return config;
}

std::string ProvenanceRecord::to_json() const {
  nlohmann::json j;
  j["clip"] = clip_id;
  j["variant"] = variant;
  j["applied"] = applied;
  j["audio_file"] = audio_file;
  j["label_file"] = label_file;
  j["lambda"] = lambda;
  j["grid_degree"] = grid_degree;
  j["order_in"] = order_in;
  j["order_out"] = order_out;
  j["label_transform"] = label_transform;
  j["seed"] = seed;
  j["substream"] = substream;
  if (cap) {
    j["cap"] = {{"azimuth", cap->azimuth},
                {"elevation", cap->elevation},
                {"width", cap->width},
                {"g1_db", cap->g1_db},
                {"g2_db", cap->g2_db}};
  }
  if (!warnings.empty()) j["warnings"] = warnings;
  return j.dump();
}

AugmentResult augment_clip(const AmbisonicClip& clip, const AccdoaFrameLabels& labels,
                           const AugmentConfig& config, const SphericalGrid& grid,
                           RandomStream& stream) {
  config.validate();
  if (grid.quadrature_degree != config.grid_degree) {
    throw std::invalid_argument("augment_clip: grid does not match config.grid_degree");
  }

  AugmentResult result;
  result.record.lambda = config.policy.lambda;
  result.record.grid_degree = config.grid_degree;
  result.record.order_in = clip.order;
  result.record.order_out = config.policy.output_order;
  result.record.label_transform = config.policy.transform_labels;
  result.record.seed = config.seed;

  bool apply = true;
  if (config.apply_probability < 1.0) {
    apply = stream.uniform() < config.apply_probability;
  }
  result.record.applied = apply;

  if (!apply) {
    result.clip = clip;
    result.labels = labels;
    return result;
  }

  const CapParams params = sample_cap_params(config.distribution, stream);
  result.record.cap = params;

  double lambda = config.policy.lambda;
  if (config.policy.lambda_mode == LambdaMode::Beta) {
    lambda = stream.beta(config.policy.alpha, config.policy.beta);
  }
  result.record.lambda = lambda;

  const DirectionalGains gains = cap_gains(params.to_cap(), grid);
  TransformOptions options;
  options.strict = false;
  const DirectionalTransform t =
      build_transform(grid, gains, clip.order, config.policy.output_order, options);
  result.record.warnings = t.provenance.warnings;

  result.clip = apply_spatial_mixup(clip, t, lambda);
  result.labels = config.policy.transform_labels ? transform_labels(labels, t, lambda) : labels;
  return result;
}

std::vector<ManifestEntry> scan_input_dir(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw std::runtime_error("scan_input_dir: not a directory: " + dir.string());
  }
  std::vector<ManifestEntry> entries;
  for (const auto& item : std::filesystem::directory_iterator(dir)) {
    if (!item.is_regular_file()) continue;
    const std::filesystem::path& p = item.path();
    if (p.extension() != ".wav") continue;
    ManifestEntry e;
    e.clip_id = p.stem().string();
    e.audio = p;
    std::filesystem::path csv = p;
    csv.replace_extension(".csv");
    if (std::filesystem::exists(csv)) e.labels = csv;
    entries.push_back(std::move(e));
  }
  std::sort(entries.begin(), entries.end(),
            [](const ManifestEntry& a, const ManifestEntry& b) { return a.clip_id < b.clip_id; });
  return entries;
}

std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_manifest: cannot open " + path.string());
  const std::filesystem::path base = path.parent_path();

  std::vector<ManifestEntry> entries;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const size_t comma = stripped.find(',');
    if (comma == std::string::npos) {
      throw std::runtime_error("read_manifest: line " + std::to_string(line_no) +
                               ": expected 'audio,labels'");
    }
    ManifestEntry e;
    std::filesystem::path audio = trim(stripped.substr(0, comma));
    std::filesystem::path labels = trim(stripped.substr(comma + 1));
    e.audio = audio.is_absolute() ? audio : base / audio;
    if (!labels.empty()) e.labels = labels.is_absolute() ? labels : base / labels;
    e.clip_id = e.audio.stem().string();
    entries.push_back(std::move(e));
  }
  return entries;
}

DatasetReport augment_dataset(const std::vector<ManifestEntry>& entries,
                              const std::filesystem::path& out_dir, const AugmentConfig& config) {
  config.validate();
  std::filesystem::create_directories(out_dir);
  const SphericalGrid grid = tdesign(config.grid_degree);

  struct ClipOutcome {
    std::vector<ProvenanceRecord> records;
    std::vector<std::string> errors;
    int outputs = 0;
  };
  std::vector<ClipOutcome> outcomes(entries.size());

  std::atomic<size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const size_t i = next.fetch_add(1);
      if (i >= entries.size()) return;
      const ManifestEntry& entry = entries[i];
      ClipOutcome& outcome = outcomes[i];
      try {
        if (entry.labels.empty()) {
          throw std::runtime_error("no label file for clip '" + entry.clip_id + "'");
        }
        const AmbisonicClip clip = read_audio(entry.audio);
        const AccdoaFrameLabels labels = read_labels(entry.labels);
        for (int v = 0; v < config.variants_per_clip; ++v) {
          RandomStream stream = RandomStream::for_clip(config.seed, entry.clip_id, v);
          AugmentResult result = augment_clip(clip, labels, config, grid, stream);
          const std::string stem = entry.clip_id + "_v" + std::to_string(v + 1);
          result.record.clip_id = entry.clip_id;
          result.record.variant = v;
          result.record.substream = RandomStream::substream_key(config.seed, entry.clip_id, v);
          result.record.audio_file = stem + ".wav";
          result.record.label_file = stem + ".csv";
          write_audio(result.clip, out_dir / result.record.audio_file);
          LabelWriteOptions label_options;
          label_options.extended_activity = config.extended_labels;
          write_labels(result.labels, out_dir / result.record.label_file, label_options);
          outcome.records.push_back(std::move(result.record));
          outcome.outputs += 2;
        }
      } catch (const std::exception& e) {
        outcome.errors.push_back(entry.clip_id + ": " + e.what());
      }
    }
  };

  const int n_threads = std::max(1, std::min<int>(config.jobs, static_cast<int>(entries.size())));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  DatasetReport report;
  report.clips = static_cast<int>(entries.size());
  std::vector<ProvenanceRecord> records;
  for (ClipOutcome& outcome : outcomes) {
    report.outputs += outcome.outputs;
    if (!outcome.errors.empty()) {
      report.failures += 1;
      report.errors.insert(report.errors.end(), outcome.errors.begin(), outcome.errors.end());
    }
    for (ProvenanceRecord& r : outcome.records) records.push_back(std::move(r));
  }
  std::sort(records.begin(), records.end(), [](const ProvenanceRecord& a, const ProvenanceRecord& b) {
    return std::tie(a.clip_id, a.variant) < std::tie(b.clip_id, b.variant);
  });

  std::ofstream prov(out_dir / "provenance.jsonl", std::ios::trunc);
  if (!prov) throw std::runtime_error("augment_dataset: cannot write provenance.jsonl");
  for (const ProvenanceRecord& r : records) prov << r.to_json() << '\n';

  return report;
}

}  // namespace ambiaug
