// Command line tool for directional-loudness augmentation of ambisonic
// recordings: dataset augmentation, polar pattern dumps, grid inspection,
// and SELD error aggregation. Angles cross this boundary in degrees and are
// radians everywhere inside. The last stdout line of every successful
// command is a single JSON object for machine consumption.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "ambiaug/augment.hpp"
#include "ambiaug/metrics.hpp"
#include "ambiaug/rng.hpp"
#include "ambiaug/sampling.hpp"
#include "ambiaug/transform.hpp"
#include "ambiaug/wav_io.hpp"

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr int kExitSuccess = 0;
constexpr int kExitPartialFailure = 1;
constexpr int kExitUsage = 2;

double deg2rad(double d) { return d * kPi / 180.0; }
double rad2deg(double r) { return r * 180.0 / kPi; }

struct AugmentArgs {
  std::string in_dir;
  std::string manifest;
  std::string out_dir;
  std::string config_file;
  std::vector<std::string> overrides;
};

int run_augment(const AugmentArgs& args) {
  ambiaug::AugmentConfig config;
  if (!args.config_file.empty()) config = ambiaug::load_config(args.config_file);
  for (const std::string& kv : args.overrides) {
    const size_t eq = kv.find('=');
    if (eq == std::string::npos) {
      throw CLI::ValidationError("--set expects key=value, got '" + kv + "'");
    }
    ambiaug::apply_config_entry(config, kv.substr(0, eq), kv.substr(eq + 1));
  }
  config.validate();

  std::vector<ambiaug::ManifestEntry> entries;
  if (!args.manifest.empty()) {
    entries = ambiaug::read_manifest(args.manifest);
  } else {
    entries = ambiaug::scan_input_dir(args.in_dir);
  }

  const ambiaug::DatasetReport report = ambiaug::augment_dataset(entries, args.out_dir, config);
  for (const std::string& err : report.errors) {
    std::cerr << "error: " << err << "\n";
  }

  nlohmann::json summary;
  summary["command"] = "augment";
  summary["clips"] = report.clips;
  summary["outputs"] = report.outputs;
  summary["failures"] = report.failures;
  summary["out_dir"] = args.out_dir;
  summary["seed"] = config.seed;
  std::cout << summary.dump() << std::endl;
  return report.failures == 0 ? kExitSuccess : kExitPartialFailure;
}

struct PatternArgs {
  std::string out_file;
  int grid_degree = 7;
  double step_deg = 5.0;
  int channel = 0;
  // Fixed-cap mode.
  std::optional<double> azimuth_deg;
  std::optional<double> elevation_deg;
  std::optional<double> width_deg;
  double g1_db = 0.0;
  double g2_db = 0.0;
  // Sampled mode.
  std::string regime;
  int samples = 0;
  uint64_t seed = 0;
};

ambiaug::DirectionalTransform cap_transform(const ambiaug::SphericalGrid& grid,
                                            const ambiaug::SphericalCap& cap) {
  return ambiaug::build_transform(grid, ambiaug::cap_gains(cap, grid), 1, 1);
}

int run_pattern(const PatternArgs& args) {
  const bool fixed_mode = args.azimuth_deg.has_value();
  if (fixed_mode && (!args.elevation_deg || !args.width_deg)) {
    throw CLI::ValidationError("fixed cap mode needs --azimuth, --elevation and --width");
  }
  if (!fixed_mode && args.regime.empty()) {
    throw CLI::ValidationError("give either a fixed cap (--azimuth/--elevation/--width) or --regime");
  }
  if (!(args.step_deg > 0.0)) throw CLI::ValidationError("--step must be positive");

  const ambiaug::SphericalGrid grid = ambiaug::tdesign(args.grid_degree);
  std::vector<ambiaug::DirectionalTransform> transforms;

  if (fixed_mode) {
    ambiaug::SphericalCap cap;
    cap.center = ambiaug::Direction(deg2rad(*args.azimuth_deg), deg2rad(*args.elevation_deg));
    cap.width = deg2rad(*args.width_deg);
    cap.gain_inside_db = args.g1_db;
    cap.gain_outside_db = args.g2_db;
    transforms.push_back(cap_transform(grid, cap));
  } else {
    ambiaug::CapDistribution dist;
    if (args.regime == "soft") {
      dist = ambiaug::CapDistribution::soft();
    } else if (args.regime == "hard") {
      dist = ambiaug::CapDistribution::hard();
    } else {
      throw CLI::ValidationError("--regime must be 'soft' or 'hard'");
    }
    if (args.samples < 1) throw CLI::ValidationError("--samples must be >= 1 in sampled mode");
    ambiaug::RandomStream stream(args.seed);
    for (int i = 0; i < args.samples; ++i) {
      transforms.push_back(cap_transform(grid, ambiaug::sample_cap(dist, stream)));
    }
  }

  std::ofstream out(args.out_file, std::ios::trunc);
  if (!out) throw std::runtime_error("pattern: cannot open " + args.out_file);
  out << "azimuth_deg";
  if (transforms.size() == 1) {
    out << ",response";
  } else {
    for (size_t i = 1; i <= transforms.size(); ++i) out << ",pattern_" << i;
  }
  out << "\n";

  char buf[64];
  int angles = 0;
  for (double az = -180.0; az < 180.0 - 1e-9; az += args.step_deg) {
    ++angles;
    const ambiaug::Direction probe(deg2rad(az), 0.0);
    std::snprintf(buf, sizeof buf, "%.12g", az);
    out << buf;
    for (const auto& t : transforms) {
      std::snprintf(buf, sizeof buf, "%.12g", ambiaug::directivity_response(t, args.channel, probe));
      out << ',' << buf;
    }
    out << "\n";
  }
  if (!out) throw std::runtime_error("pattern: write failed for " + args.out_file);

  nlohmann::json summary;
  summary["command"] = "pattern";
  summary["patterns"] = transforms.size();
  summary["angles"] = angles;
  summary["grid_degree"] = args.grid_degree;
  summary["out"] = args.out_file;
  std::cout << summary.dump() << std::endl;
  return kExitSuccess;
}

// Largest deviation of the discrete quadrature from the analytic inner
// product over all basis pairs with total degree within the design's budget.
double quadrature_residual(const ambiaug::SphericalGrid& grid) {
  const int t = grid.quadrature_degree;
  const int max_order = t;  // pair (n, 0) with n <= t is constrained
  const Eigen::MatrixXd y = ambiaug::build_sh_matrix(grid, max_order);
  const Eigen::MatrixXd gram = (4.0 * kPi / grid.size()) * y * y.transpose();
  double worst = 0.0;
  const int rows = static_cast<int>(gram.rows());
  for (int a = 0; a < rows; ++a) {
    const int degree_a = static_cast<int>(std::floor(std::sqrt(static_cast<double>(a)) + 1e-9));
    for (int b = 0; b < rows; ++b) {
      const int degree_b = static_cast<int>(std::floor(std::sqrt(static_cast<double>(b)) + 1e-9));
      if (degree_a + degree_b > t) continue;
      const double expected = a == b ? 1.0 : 0.0;
      worst = std::max(worst, std::abs(gram(a, b) - expected));
    }
  }
  return worst;
}

int run_grid(int degree) {
  const ambiaug::SphericalGrid grid = ambiaug::tdesign(degree);
  std::printf("# azimuth_deg elevation_deg x y z\n");
  for (const ambiaug::Direction& d : grid.directions) {
    const Eigen::Vector3d u = d.unit();
    std::printf("%10.4f %10.4f   %12.9f %12.9f %12.9f\n", rad2deg(d.azimuth()),
                rad2deg(d.elevation()), u.x(), u.y(), u.z());
  }
  const double residual = quadrature_residual(grid);

  nlohmann::json summary;
  summary["command"] = "grid";
  summary["degree"] = degree;
  summary["points"] = grid.size();
  summary["max_quadrature_residual"] = residual;
  std::cout << summary.dump() << std::endl;
  return kExitSuccess;
}

int run_seld_error(double er, double f, double le_deg, double lr) {
  const ambiaug::SeldComponents c = ambiaug::SeldComponents::from_table(er, f, le_deg, lr);
  const double e = ambiaug::seld_error(c);

  nlohmann::json summary;
  summary["command"] = "seld-error";
  summary["error_rate"] = c.error_rate;
  summary["f_score"] = c.f_score;
  summary["localization_error_deg"] = rad2deg(c.localization_error);
  summary["localization_recall"] = c.localization_recall;
  summary["seld_error"] = e;
  std::cout << summary.dump() << std::endl;
  return kExitSuccess;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Directional-loudness augmentation for ambisonic SELD datasets"};
  app.require_subcommand(1);

  AugmentArgs augment_args;
  CLI::App* augment = app.add_subcommand("augment", "Augment a dataset of WAV/CSV clip pairs");
  auto* in_opt = augment->add_option("--in", augment_args.in_dir, "Input directory of WAV+CSV pairs");
  auto* manifest_opt =
      augment->add_option("--manifest", augment_args.manifest, "Manifest of audio,label lines");
  augment->add_option("--out", augment_args.out_dir, "Output directory")->required();
  augment->add_option("--config", augment_args.config_file, "key=value config file");
  augment->add_option("--set", augment_args.overrides,
                      "Config override key=value (repeatable, wins over --config)");
  in_opt->excludes(manifest_opt);
  // Common knobs as direct flags; they map onto config keys.
  for (const char* key : {"regime", "grid-degree", "seed", "lambda", "lambda-mode", "alpha",
                          "beta", "transform-labels", "output-order", "apply-probability",
                          "variants", "extended-labels", "jobs"}) {
    const std::string name = std::string("--") + key;
    std::string config_key = key;
    for (char& c : config_key) {
      if (c == '-') c = '_';
    }
    if (config_key == "variants") config_key = "variants_per_clip";
    if (config_key == "grid_degree") config_key = "grid_degree";
    augment
        ->add_option_function<std::string>(
            name,
            [&augment_args, config_key](const std::string& v) {
              augment_args.overrides.push_back(config_key + "=" + v);
            },
            "Sets config key " + config_key)
        ->expected(1);
  }

  PatternArgs pattern_args;
  CLI::App* pattern =
      app.add_subcommand("pattern", "Dump polar pattern cross-sections of cap transforms as CSV");
  pattern->add_option("--out", pattern_args.out_file, "Output CSV path")->required();
  pattern->add_option("--grid-degree", pattern_args.grid_degree, "Spherical design degree");
  pattern->add_option("--step", pattern_args.step_deg, "Azimuth step in degrees");
  pattern->add_option("--channel", pattern_args.channel, "Output channel to probe");
  double az_tmp = 0.0, el_tmp = 0.0, width_tmp = 0.0;
  auto* az_opt = pattern->add_option("--azimuth", az_tmp, "Cap center azimuth (degrees)");
  auto* el_opt = pattern->add_option("--elevation", el_tmp, "Cap center elevation (degrees)");
  auto* width_opt = pattern->add_option("--width", width_tmp, "Cap width (degrees)");
  pattern->add_option("--g1", pattern_args.g1_db, "Gain inside the cap (dB)");
  pattern->add_option("--g2", pattern_args.g2_db, "Gain outside the cap (dB)");
  pattern->add_option("--regime", pattern_args.regime, "soft|hard randomized sampling");
  pattern->add_option("--samples", pattern_args.samples, "Number of randomized patterns");
  pattern->add_option("--seed", pattern_args.seed, "Sampling seed");

  int grid_degree = 3;
  CLI::App* grid_cmd = app.add_subcommand("grid", "Print a spherical design and its residual");
  grid_cmd->add_option("--degree", grid_degree, "Design degree")->required();

  std::vector<double> seld_values;
  CLI::App* seld = app.add_subcommand("seld-error", "Aggregate ER, F, LE(deg), LR into one error");
  seld->add_option("values", seld_values, "ER F LE_degrees LR")->expected(4);

  CLI11_PARSE(app, argc, argv);

  try {
    if (augment->parsed()) {
      if (augment_args.in_dir.empty() && augment_args.manifest.empty()) {
        std::cerr << "augment: one of --in or --manifest is required\n";
        return kExitUsage;
      }
      return run_augment(augment_args);
    }
    if (pattern->parsed()) {
      if (az_opt->count()) pattern_args.azimuth_deg = az_tmp;
      if (el_opt->count()) pattern_args.elevation_deg = el_tmp;
      if (width_opt->count()) pattern_args.width_deg = width_tmp;
      return run_pattern(pattern_args);
    }
    if (grid_cmd->parsed()) return run_grid(grid_degree);
    if (seld->parsed()) {
      return run_seld_error(seld_values[0], seld_values[1], seld_values[2], seld_values[3]);
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitPartialFailure;
  }
  return kExitUsage;
}
