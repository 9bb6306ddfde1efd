// Hot-path timings: basis evaluation, transform construction, the sample
// mix itself, parameter sampling, and one full clip variant.

#include <benchmark/benchmark.h>

#include "ambiaug/augment.hpp"
#include "ambiaug/metrics.hpp"
#include "ambiaug/rng.hpp"
#include "ambiaug/sampling.hpp"
#include "ambiaug/transform.hpp"

using namespace ambiaug;

namespace {

AmbisonicClip make_clip(int frames) {
  RandomStream stream(7);
  AmbisonicClip clip;
  clip.order = 1;
  clip.sample_rate = 24000;
  clip.normalization = ShNormalization::N3d;
  clip.samples = Eigen::MatrixXd::NullaryExpr(4, frames,
                                              [&]() { return stream.uniform(-0.8, 0.8); });
  return clip;
}

void bm_eval_sh(benchmark::State& state) {
  const int order = static_cast<int>(state.range(0));
  const Direction d(0.7, -0.3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(eval_sh(d, order));
  }
}
BENCHMARK(bm_eval_sh)->Arg(1)->Arg(3)->Arg(7);

void bm_build_transform(benchmark::State& state) {
  const SphericalGrid grid = tdesign(static_cast<int>(state.range(0)));
  const SphericalCap cap{Direction(0.4, 0.2), 1.3, -1.0, -12.0};
  const DirectionalGains gains = cap_gains(cap, grid);
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_transform(grid, gains, 1, 1));
  }
}
BENCHMARK(bm_build_transform)->Arg(3)->Arg(7);

void bm_spatial_mixup(benchmark::State& state) {
  const SphericalGrid grid = tdesign(7);
  const SphericalCap cap{Direction(0.4, 0.2), 1.3, -1.0, -12.0};
  const DirectionalTransform t = build_transform(grid, cap_gains(cap, grid), 1, 1);
  const AmbisonicClip clip = make_clip(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(apply_spatial_mixup(clip, t, 0.25));
  }
  state.SetItemsProcessed(state.iterations() * clip.frames());
}
BENCHMARK(bm_spatial_mixup)->Arg(24000)->Arg(24000 * 60);

void bm_sample_cap_params(benchmark::State& state) {
  const CapDistribution dist = CapDistribution::hard();
  RandomStream stream(11);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample_cap_params(dist, stream));
  }
}
BENCHMARK(bm_sample_cap_params);

void bm_augment_clip(benchmark::State& state) {
  const SphericalGrid grid = tdesign(7);
  AugmentConfig config;
  config.seed = 3;
  config.policy.transform_labels = true;
  const AmbisonicClip clip = make_clip(24000);
  AccdoaFrameLabels labels;
  labels.frames[0].push_back({1, 0, Direction(0.4, 0.1).unit()});
  int variant = 0;
  for (auto _ : state) {
    RandomStream stream = RandomStream::for_clip(config.seed, "bench", variant++);
    benchmark::DoNotOptimize(augment_clip(clip, labels, config, grid, stream));
  }
}
BENCHMARK(bm_augment_clip);

void bm_seld_error(benchmark::State& state) {
  const SeldComponents c = SeldComponents::from_table(0.689, 40.5, 20.7, 44.4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(seld_error(c));
  }
}
BENCHMARK(bm_seld_error);

}  // namespace

BENCHMARK_MAIN();
