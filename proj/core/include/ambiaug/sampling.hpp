#pragma once

#include "ambiaug/rng.hpp"
#include "ambiaug/transform.hpp"

namespace ambiaug {

// Closed interval of reals.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double span() const { return hi - lo; }
  bool contains(double v) const { return v >= lo && v <= hi; }
};

enum class CapRegime { Soft, Hard };

// Parameter ranges for randomized cap sampling. Azimuth and elevation ranges
// follow the reference hyperparameter table literally; elevations beyond
// +-pi/2 fold over the pole when the cap direction is constructed.
struct CapDistribution {
  CapRegime regime = CapRegime::Soft;
  Interval azimuth{0.0, 3.14159265358979323846};
  Interval elevation{-3.14159265358979323846, 3.14159265358979323846};
  Interval width{0.0, 0.0};
  Interval g1_db{0.0, 0.0};
  Interval g2_db{0.0, 0.0};

  static CapDistribution soft();
  static CapDistribution hard();

  void validate() const;
};

// Raw sampled parameters, kept before Direction canonicalization so
// provenance records exactly what was drawn.
struct CapParams {
  double azimuth = 0.0;
  double elevation = 0.0;
  double width = 0.0;
  double g1_db = 0.0;
  double g2_db = 0.0;

  SphericalCap to_cap() const;
};

// Draws one parameter set. Draw order is fixed (azimuth, elevation, width,
// g1, g2) so streams are reproducible. Azimuth, elevation, width and g2 are
// uniform on their ranges; g1 is a clipped standard exponential mapped onto
// its range with the mode at 0 dB:  g1 = hi - span * min(x, 1), x ~ Exp(1).
CapParams sample_cap_params(const CapDistribution& dist, RandomStream& stream);

SphericalCap sample_cap(const CapDistribution& dist, RandomStream& stream);

}  // namespace ambiaug
