#include "ambiaug/sampling.hpp"

#include <algorithm>
#include <stdexcept>

namespace ambiaug {
namespace {

constexpr double kPi = 3.14159265358979323846;

}  // namespace

CapDistribution CapDistribution::soft() {
  CapDistribution d;
  d.regime = CapRegime::Soft;
  d.width = {kPi / 4.0, kPi};
  d.g1_db = {-3.0, 0.0};
  d.g2_db = {-6.0, -3.0};
  return d;
}

CapDistribution CapDistribution::hard() {
  CapDistribution d;
  d.regime = CapRegime::Hard;
  d.width = {kPi / 4.0, kPi / 2.0};
  d.g1_db = {-6.0, 0.0};
  d.g2_db = {-20.0, -6.0};
  return d;
}

void CapDistribution::validate() const {
  const Interval* ivs[] = {&azimuth, &elevation, &width, &g1_db, &g2_db};
  for (const Interval* iv : ivs) {
    if (!(iv->lo <= iv->hi)) {
      throw std::invalid_argument("CapDistribution: interval with lo > hi");
    }
  }
  if (!(width.lo > 0.0) || width.hi > kPi) {
    throw std::invalid_argument("CapDistribution: width range must lie in (0, pi]");
  }
  if (g1_db.hi > 0.0 || g2_db.hi > 0.0) {
    throw std::invalid_argument("CapDistribution: dB ranges must be non-positive");
  }
}

SphericalCap CapParams::to_cap() const {
  SphericalCap cap;
  cap.center = Direction(azimuth, elevation);
  cap.width = width;
  cap.gain_inside_db = g1_db;
  cap.gain_outside_db = g2_db;
  return cap;
}

CapParams sample_cap_params(const CapDistribution& dist, RandomStream& stream) {
  dist.validate();
  CapParams p;
  p.azimuth = stream.uniform(dist.azimuth.lo, dist.azimuth.hi);
  p.elevation = stream.uniform(dist.elevation.lo, dist.elevation.hi);
  p.width = stream.uniform(dist.width.lo, dist.width.hi);
  p.g1_db = dist.g1_db.hi - dist.g1_db.span() * std::min(stream.exponential(), 1.0);
  p.g2_db = stream.uniform(dist.g2_db.lo, dist.g2_db.hi);
  return p;
}

SphericalCap sample_cap(const CapDistribution& dist, RandomStream& stream) {
  return sample_cap_params(dist, stream).to_cap();
}

}  // namespace ambiaug
