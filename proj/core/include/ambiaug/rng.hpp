#pragma once

#include <cstdint>
#include <random>
#include <string>

namespace ambiaug {

// Deterministic random stream with hand-rolled distributions. The standard
// library's distribution objects are implementation-defined, so sampling
// through them would break cross-platform reproducibility; only the
// mt19937_64 engine itself is fully specified and used here.
//
// Substream rule: the stream for a clip variant is seeded with
//   mix(mix(mix(seed) ^ fnv1a64(clip_id)) + variant)
// where mix is the splitmix64 finalizer and fnv1a64 hashes the clip id
// bytes. Identical (seed, clip_id, variant) triples produce identical
// streams on every platform.
class RandomStream {
public:
  explicit RandomStream(uint64_t key);

  static RandomStream for_clip(uint64_t seed, const std::string& clip_id, int variant);
  static uint64_t substream_key(uint64_t seed, const std::string& clip_id, int variant);

  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  // Uniform on [lo, hi).
  double uniform(double lo, double hi);
  // Standard exponential (rate 1).
  double exponential();
  // Standard normal via Box-Muller; consumes exactly two uniforms per call.
  double normal();
  // Gamma(shape, 1) via Marsaglia-Tsang squeeze.
  double gamma(double shape);
  // Beta(a, b) as X/(X+Y) of two gammas.
  double beta(double a, double b);

private:
  std::mt19937_64 engine_;
};

uint64_t splitmix64(uint64_t x);
uint64_t fnv1a64(const std::string& s);

}  // namespace ambiaug
