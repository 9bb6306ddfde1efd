#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "ambiaug/augment.hpp"
#include "ambiaug/transform.hpp"
#include "ambiaug/wav_io.hpp"

using namespace ambiaug;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = 3.14159265358979323846;

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "ambiaug_pipe_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::vector<uint8_t> slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  return std::vector<uint8_t>((std::istreambuf_iterator<char>(in)),
                              std::istreambuf_iterator<char>());
}

AmbisonicClip noise_clip(uint64_t seed, int frames = 240, SampleFormat fmt = SampleFormat::Float32) {
  std::mt19937_64 eng(seed);
  auto u = [&]() { return (eng() >> 11) * 0x1.0p-53; };
  AmbisonicClip clip;
  clip.order = 1;
  clip.sample_rate = 24000;
  clip.normalization = ShNormalization::N3d;
  clip.source_format = fmt;
  clip.samples = Eigen::MatrixXd::NullaryExpr(4, frames, [&]() { return 1.2 * u() - 0.6; });
  return clip;
}

AccdoaFrameLabels demo_labels() {
  AccdoaFrameLabels labels;
  labels.frames[0].push_back({2, 0, Direction(0.5, 0.1).unit()});
  labels.frames[3].push_back({7, 0, Direction(-1.8, -0.4).unit()});
  labels.frames[3].push_back({1, 1, Direction(2.9, 0.8).unit()});
  return labels;
}

// n_clips wav+csv pairs under dir; returns the manifest scan.
std::vector<ManifestEntry> make_dataset(const fs::path& dir, int n_clips) {
  for (int i = 0; i < n_clips; ++i) {
    const std::string stem = "clip" + std::to_string(i);
    AmbisonicClip clip = noise_clip(1000 + i, 240,
                                    i % 2 == 0 ? SampleFormat::Float32 : SampleFormat::Pcm16);
    write_audio(clip, dir / (stem + ".wav"));
    write_labels(demo_labels(), dir / (stem + ".csv"));
  }
  return scan_input_dir(dir);
}

// All regular files under dir, byte-compared against another directory.
void check_dirs_identical(const fs::path& a, const fs::path& b) {
  std::vector<std::string> names_a, names_b;
  for (const auto& e : fs::directory_iterator(a)) names_a.push_back(e.path().filename().string());
  for (const auto& e : fs::directory_iterator(b)) names_b.push_back(e.path().filename().string());
  std::sort(names_a.begin(), names_a.end());
  std::sort(names_b.begin(), names_b.end());
  REQUIRE(names_a == names_b);
  for (const std::string& name : names_a) {
    CAPTURE(name);
    CHECK(slurp(a / name) == slurp(b / name));
  }
}

}  // namespace

TEST_CASE("one variant is a pure function of seed, clip id, and index") {
  const SphericalGrid grid = tdesign(7);
  AugmentConfig config;
  config.seed = 99;
  const AmbisonicClip clip = noise_clip(5);
  const AccdoaFrameLabels labels = demo_labels();

  RandomStream s1 = RandomStream::for_clip(config.seed, "some_clip", 2);
  RandomStream s2 = RandomStream::for_clip(config.seed, "some_clip", 2);
  const AugmentResult r1 = augment_clip(clip, labels, config, grid, s1);
  const AugmentResult r2 = augment_clip(clip, labels, config, grid, s2);

  CHECK(r1.clip.samples == r2.clip.samples);
  REQUIRE(r1.record.cap.has_value());
  REQUIRE(r2.record.cap.has_value());
  CHECK(r1.record.cap->azimuth == r2.record.cap->azimuth);
  CHECK(r1.record.cap->g2_db == r2.record.cap->g2_db);

  RandomStream s3 = RandomStream::for_clip(config.seed, "some_clip", 3);
  const AugmentResult r3 = augment_clip(clip, labels, config, grid, s3);
  CHECK(r1.record.cap->azimuth != r3.record.cap->azimuth);
}

TEST_CASE("provenance record rebuilds the output exactly") {
  const SphericalGrid grid = tdesign(7);
  AugmentConfig config;
  config.seed = 7;
  config.policy.transform_labels = true;
  config.policy.lambda_mode = LambdaMode::Beta;
  config.policy.alpha = 2.0;
  config.policy.beta = 3.0;

  const AmbisonicClip clip = noise_clip(6);
  const AccdoaFrameLabels labels = demo_labels();
  RandomStream stream = RandomStream::for_clip(config.seed, "c", 0);
  const AugmentResult result = augment_clip(clip, labels, config, grid, stream);

  REQUIRE(result.record.cap.has_value());
  CHECK(result.record.lambda > 0.0);
  CHECK(result.record.lambda < 1.0);

  // Replay from the record alone: same cap, same lambda, same code path.
  const DirectionalGains gains = cap_gains(result.record.cap->to_cap(), grid);
  const DirectionalTransform t = build_transform(grid, gains, 1, 1);
  const AmbisonicClip replayed = apply_spatial_mixup(clip, t, result.record.lambda);
  CHECK(replayed.samples == result.clip.samples);

  const AccdoaFrameLabels replayed_labels = transform_labels(labels, t, result.record.lambda);
  for (const auto& [frame, events] : replayed_labels.frames) {
    const auto& got = result.labels.frames.at(frame);
    REQUIRE(got.size() == events.size());
    for (size_t i = 0; i < events.size(); ++i) CHECK(got[i].vec == events[i].vec);
  }
}

TEST_CASE("lambda 1 passes the signal through untouched") {
  const SphericalGrid grid = tdesign(7);
  AugmentConfig config;
  config.policy.lambda = 1.0;
  const AmbisonicClip clip = noise_clip(8);
  RandomStream stream = RandomStream::for_clip(0, "x", 0);
  const AugmentResult result = augment_clip(clip, demo_labels(), config, grid, stream);
  CHECK(result.clip.samples == clip.samples);
  CHECK(result.record.applied);
}

TEST_CASE("apply probability zero is a recorded passthrough") {
  const SphericalGrid grid = tdesign(7);
  AugmentConfig config;
  config.apply_probability = 0.0;
  const AmbisonicClip clip = noise_clip(9);
  RandomStream stream = RandomStream::for_clip(1, "x", 0);
  const AugmentResult result = augment_clip(clip, demo_labels(), config, grid, stream);
  CHECK_FALSE(result.record.applied);
  CHECK_FALSE(result.record.cap.has_value());
  CHECK(result.clip.samples == clip.samples);
}

TEST_CASE("soft caps keep every channel within the gain envelope") {
  // Orthogonal equal-power channels turn the per-channel RMS ratio into the
  // norm of one matrix row; for a symmetric mix matrix with spectrum inside
  // [g_min, g_max] that norm stays in the same interval. Soft regime:
  // [-6 dB, 0 dB].
  const SphericalGrid grid = tdesign(7);
  AugmentConfig config;
  config.seed = 1234;
  config.distribution = CapDistribution::soft();

  AmbisonicClip clip;
  clip.order = 1;
  clip.sample_rate = 24000;
  clip.normalization = ShNormalization::N3d;
  const int n = 480;
  clip.samples.resize(4, n);
  for (int ch = 0; ch < 4; ++ch) {
    for (int i = 0; i < n; ++i) {
      clip.samples(ch, i) = std::sin(2.0 * kPi * (ch + 3.0) * i / n);
    }
  }
  const double rms_in = std::sqrt(clip.samples.row(0).squaredNorm() / n);

  const double lo = std::pow(10.0, -6.0 / 20.0);
  for (int variant = 0; variant < 50; ++variant) {
    RandomStream stream = RandomStream::for_clip(config.seed, "rms", variant);
    const AugmentResult result = augment_clip(clip, demo_labels(), config, tdesign(7), stream);
    for (int ch = 0; ch < 4; ++ch) {
      const double rms = std::sqrt(result.clip.samples.row(ch).squaredNorm() / n);
      CHECK(rms / rms_in >= lo - 1e-9);
      CHECK(rms / rms_in <= 1.0 + 1e-9);
    }
  }
}

TEST_CASE("grid must match the configured degree") {
  AugmentConfig config;  // grid_degree = 7
  RandomStream stream(0);
  CHECK_THROWS_AS(augment_clip(noise_clip(1), demo_labels(), config, tdesign(3), stream),
                  std::invalid_argument);
}

TEST_CASE("config validation") {
  AugmentConfig config;
  config.apply_probability = 1.5;
  CHECK_THROWS_AS(config.validate(), std::invalid_argument);
  config = {};
  config.variants_per_clip = 0;
  CHECK_THROWS_AS(config.validate(), std::invalid_argument);
  config = {};
  config.grid_degree = 5;
  CHECK_THROWS_AS(config.validate(), std::invalid_argument);
  config = {};
  config.policy.lambda = -0.2;
  CHECK_THROWS_AS(config.validate(), std::invalid_argument);
  config = {};
  config.policy.transform_labels = true;
  config.policy.output_order = 2;
  CHECK_THROWS_AS(config.validate(), std::invalid_argument);
  config = {};
  config.jobs = 0;
  CHECK_THROWS_AS(config.validate(), std::invalid_argument);
}

TEST_CASE("config files load every key") {
  const fs::path dir = fresh_dir("config");
  const fs::path file = dir / "aug.conf";
  {
    std::ofstream out(file);
    out << "# full schema exercise\n"
        << "regime = hard\n"
        << "azimuth_lo = -1.5   # overrides survive the regime switch below\n"
        << "azimuth_hi = 1.5\n"
        << "elevation_lo = -0.5\n"
        << "elevation_hi = 0.5\n"
        << "grid_degree = 3\n"
        << "seed = 31337\n"
        << "lambda_mode = beta\n"
        << "lambda = 0.25\n"
        << "alpha = 1.5\n"
        << "beta = 2.5\n"
        << "transform_labels = true\n"
        << "output_order = 1\n"
        << "apply_probability = 0.75\n"
        << "variants_per_clip = 3\n"
        << "extended_labels = yes\n"
        << "frame_length_ms = 20\n"
        << "jobs = 4\n";
  }
  const AugmentConfig config = load_config(file);
  CHECK(config.distribution.regime == CapRegime::Hard);
  CHECK(config.distribution.azimuth.lo == -1.5);
  CHECK(config.distribution.azimuth.hi == 1.5);
  CHECK(config.distribution.elevation.lo == -0.5);
  CHECK(config.distribution.elevation.hi == 0.5);
  CHECK(config.distribution.g2_db.lo == -20.0);
  CHECK(config.grid_degree == 3);
  CHECK(config.seed == 31337);
  CHECK(config.policy.lambda_mode == LambdaMode::Beta);
  CHECK(config.policy.lambda == 0.25);
  CHECK(config.policy.alpha == 1.5);
  CHECK(config.policy.beta == 2.5);
  CHECK(config.policy.transform_labels);
  CHECK(config.apply_probability == 0.75);
  CHECK(config.variants_per_clip == 3);
  CHECK(config.extended_labels);
  CHECK(config.frame_length_ms == 20.0);
  CHECK(config.jobs == 4);

  SUBCASE("regime switch keeps angle overrides") {
    AugmentConfig c;
    apply_config_entry(c, "azimuth_lo", "-2.0");
    apply_config_entry(c, "regime", "hard");
    CHECK(c.distribution.azimuth.lo == -2.0);
    CHECK(c.distribution.g2_db.lo == -20.0);
  }

  SUBCASE("unknown keys and malformed lines carry the line number") {
    const fs::path bad = dir / "bad.conf";
    {
      std::ofstream out(bad);
      out << "seed = 1\nno_such_key = 2\n";
    }
    CHECK_THROWS_WITH_AS(load_config(bad), doctest::Contains("line 2"), std::invalid_argument);
    {
      std::ofstream out(bad);
      out << "seed\n";
    }
    CHECK_THROWS_WITH_AS(load_config(bad), doctest::Contains("line 1"), std::invalid_argument);
    {
      std::ofstream out(bad);
      out << "jobs = many\n";
    }
    CHECK_THROWS_WITH_AS(load_config(bad), doctest::Contains("expects an integer"),
                         std::invalid_argument);
  }
}

TEST_CASE("dataset runs are byte-identical across reruns, thread counts, and entry order") {
  const fs::path in_dir = fresh_dir("det_in");
  std::vector<ManifestEntry> entries = make_dataset(in_dir, 4);

  AugmentConfig config;
  config.seed = 2025;
  config.variants_per_clip = 2;
  config.policy.transform_labels = true;
  config.extended_labels = true;

  const fs::path out1 = fresh_dir("det_out1");
  const fs::path out2 = fresh_dir("det_out2");
  const fs::path out3 = fresh_dir("det_out3");

  config.jobs = 1;
  const DatasetReport r1 = augment_dataset(entries, out1, config);
  CHECK(r1.clips == 4);
  CHECK(r1.outputs == 4 * 2 * 2);
  CHECK(r1.failures == 0);

  config.jobs = 4;
  const DatasetReport r2 = augment_dataset(entries, out2, config);
  CHECK(r2.outputs == r1.outputs);

  std::reverse(entries.begin(), entries.end());
  config.jobs = 3;
  augment_dataset(entries, out3, config);

  check_dirs_identical(out1, out2);
  check_dirs_identical(out1, out3);

  // Expected file population: per clip, _v1/_v2 wav+csv.
  CHECK(fs::exists(out1 / "clip0_v1.wav"));
  CHECK(fs::exists(out1 / "clip0_v2.csv"));
  CHECK(fs::exists(out1 / "clip3_v2.wav"));
  CHECK(fs::exists(out1 / "provenance.jsonl"));
}

TEST_CASE("provenance lines are sorted, parseable, and sufficient to replay") {
  const fs::path in_dir = fresh_dir("prov_in");
  const std::vector<ManifestEntry> entries = make_dataset(in_dir, 3);

  AugmentConfig config;
  config.seed = 404;
  config.variants_per_clip = 2;

  const fs::path out = fresh_dir("prov_out");
  augment_dataset(entries, out, config);

  std::ifstream prov(out / "provenance.jsonl");
  REQUIRE(prov.good());
  std::vector<nlohmann::json> records;
  std::string line;
  while (std::getline(prov, line)) records.push_back(nlohmann::json::parse(line));
  REQUIRE(records.size() == 6);

  std::vector<std::pair<std::string, int>> keys;
  for (const auto& j : records) keys.emplace_back(j.at("clip").get<std::string>(), j.at("variant").get<int>());
  CHECK(std::is_sorted(keys.begin(), keys.end()));

  // Replay row 3 (clip1, variant 1) from its record.
  const nlohmann::json& j = records[3];
  CHECK(j.at("clip") == "clip1");
  CHECK(j.at("variant") == 1);
  CHECK(j.at("seed") == 404);
  CHECK(j.at("substream") == RandomStream::substream_key(404, "clip1", 1));
  CHECK(j.at("applied") == true);
  CHECK(j.at("order_in") == 1);
  CHECK(j.at("order_out") == 1);
  CHECK(j.at("label_transform") == false);

  CapParams cap;
  cap.azimuth = j.at("cap").at("azimuth").get<double>();
  cap.elevation = j.at("cap").at("elevation").get<double>();
  cap.width = j.at("cap").at("width").get<double>();
  cap.g1_db = j.at("cap").at("g1_db").get<double>();
  cap.g2_db = j.at("cap").at("g2_db").get<double>();

  const SphericalGrid grid = tdesign(j.at("grid_degree").get<int>());
  const AmbisonicClip original = read_audio(in_dir / "clip1.wav");
  const DirectionalTransform t = build_transform(grid, cap_gains(cap.to_cap(), grid), 1, 1);
  const AmbisonicClip replayed =
      apply_spatial_mixup(original, t, j.at("lambda").get<double>());

  const fs::path replay_wav = fresh_dir("prov_replay") / "replay.wav";
  write_audio(replayed, replay_wav);
  CHECK(slurp(replay_wav) == slurp(out / j.at("audio_file").get<std::string>()));
}

TEST_CASE("a broken clip fails alone") {
  const fs::path in_dir = fresh_dir("fail_in");
  std::vector<ManifestEntry> entries = make_dataset(in_dir, 3);

  // clip1 loses its labels, clip2's audio gets corrupted.
  fs::remove(in_dir / "clip1.csv");
  entries = scan_input_dir(in_dir);
  {
    std::ofstream out(in_dir / "clip2.wav", std::ios::binary | std::ios::trunc);
    out << "not audio";
  }

  AugmentConfig config;
  config.jobs = 2;
  const fs::path out = fresh_dir("fail_out");
  const DatasetReport report = augment_dataset(entries, out, config);

  CHECK(report.clips == 3);
  CHECK(report.failures == 2);
  CHECK(report.outputs == 2);  // only clip0 went through
  REQUIRE(report.errors.size() == 2);
  CHECK(report.errors[0].find("clip1") != std::string::npos);
  CHECK(report.errors[1].find("clip2") != std::string::npos);
  CHECK(fs::exists(out / "clip0_v1.wav"));
  CHECK_FALSE(fs::exists(out / "clip1_v1.wav"));

  // Failed clips leave no provenance rows.
  std::ifstream prov(out / "provenance.jsonl");
  int lines = 0;
  std::string line;
  while (std::getline(prov, line)) ++lines;
  CHECK(lines == 1);
}

TEST_CASE("empty input set still produces a well-formed run") {
  const fs::path out = fresh_dir("empty_out");
  const DatasetReport report = augment_dataset({}, out, AugmentConfig{});
  CHECK(report.clips == 0);
  CHECK(report.outputs == 0);
  CHECK(report.failures == 0);
  CHECK(fs::exists(out / "provenance.jsonl"));
  CHECK(fs::file_size(out / "provenance.jsonl") == 0);
}

TEST_CASE("manifest files resolve relative paths and skip comments") {
  const fs::path in_dir = fresh_dir("manifest_in");
  make_dataset(in_dir, 2);
  const fs::path manifest = in_dir / "list.txt";
  {
    std::ofstream out(manifest);
    out << "# two clips, relative paths\n"
        << "clip0.wav,clip0.csv\n"
        << "\n"
        << "clip1.wav,clip1.csv\n";
  }
  const std::vector<ManifestEntry> entries = read_manifest(manifest);
  REQUIRE(entries.size() == 2);
  CHECK(entries[0].clip_id == "clip0");
  CHECK(entries[0].audio == in_dir / "clip0.wav");
  CHECK(entries[1].labels == in_dir / "clip1.csv");

  const fs::path bad = in_dir / "bad.txt";
  {
    std::ofstream out(bad);
    out << "only_audio_no_comma.wav\n";
  }
  CHECK_THROWS_WITH_AS(read_manifest(bad), doctest::Contains("line 1"), std::runtime_error);
}

TEST_CASE("label transform shows up in extended output labels") {
  const fs::path in_dir = fresh_dir("label_in");
  make_dataset(in_dir, 1);

  AugmentConfig config;
  config.seed = 5150;
  config.distribution = CapDistribution::hard();
  config.policy.transform_labels = true;
  config.extended_labels = true;

  const fs::path out = fresh_dir("label_out");
  const DatasetReport report = augment_dataset(scan_input_dir(in_dir), out, config);
  REQUIRE(report.failures == 0);

  const AccdoaFrameLabels after = read_labels(out / "clip0_v1.csv");
  const AccdoaFrameLabels before = read_labels(in_dir / "clip0.csv");
  REQUIRE(after.event_count() == before.event_count());
  // Hard caps attenuate: at least one event must have lost activity.
  bool attenuated = false;
  for (const auto& [frame, events] : after.frames) {
    for (const AccdoaEvent& e : events) {
      CHECK(e.vec.norm() <= 1.0 + 1e-9);
      if (e.vec.norm() < 0.999) attenuated = true;
    }
  }
  CHECK(attenuated);

  // Without the label transform the label file reproduces its input rows.
  config.policy.transform_labels = false;
  config.extended_labels = false;
  const fs::path out2 = fresh_dir("label_out2");
  augment_dataset(scan_input_dir(in_dir), out2, config);
  CHECK(slurp(out2 / "clip0_v1.csv") == slurp(in_dir / "clip0.csv"));
}
