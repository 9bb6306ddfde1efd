#include "ambiaug/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace ambiaug {

uint64_t splitmix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

uint64_t fnv1a64(const std::string& s) {
  uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

RandomStream::RandomStream(uint64_t key) : engine_(key) {}

uint64_t RandomStream::substream_key(uint64_t seed, const std::string& clip_id, int variant) {
  return splitmix64(splitmix64(splitmix64(seed) ^ fnv1a64(clip_id)) +
                    static_cast<uint64_t>(variant));
}

RandomStream RandomStream::for_clip(uint64_t seed, const std::string& clip_id, int variant) {
  return RandomStream(substream_key(seed, clip_id, variant));
}

double RandomStream::uniform() {
  return (engine_() >> 11) * 0x1.0p-53;
}

double RandomStream::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform();
}

double RandomStream::exponential() {
  // -log(1 - u); u < 1 keeps the argument positive.
  return -std::log1p(-uniform());
}

double RandomStream::normal() {
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
}

double RandomStream::gamma(double shape) {
  if (!(shape > 0.0)) throw std::invalid_argument("RandomStream::gamma: shape must be > 0");
  if (shape < 1.0) {
    // Boost a draw at shape+1 down with a uniform power.
    const double g = gamma(shape + 1.0);
    const double u = 1.0 - uniform();  // avoid pow(0, ...)
    return g * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x = normal();
    double t = 1.0 + c * x;
    if (t <= 0.0) continue;
    const double v = t * t * t;
    const double u = uniform();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (u > 0.0 && std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double RandomStream::beta(double a, double b) {
  const double x = gamma(a);
  const double y = gamma(b);
  return x / (x + y);
}

}  // namespace ambiaug
