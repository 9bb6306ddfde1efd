#pragma once

#include "ambiaug/sph.hpp"

namespace ambiaug {

// The four component metrics entering the aggregated SELD error.
// localization_error is in radians here; degree conversion belongs at the
// interface boundary.
struct SeldComponents {
  double error_rate = 0.0;
  double f_score = 0.0;
  double localization_error = 0.0;
  double localization_recall = 0.0;

  // Builds components from values as printed in result tables: F and LR may
  // be percentages (detected when > 1, rejected above 100); localization
  // error is given in degrees.
  static SeldComponents from_table(double er, double f, double le_degrees, double lr);

  void validate() const;
};

// (ER + (1 - F) + LE/pi + (1 - LR)) / 4.
double seld_error(const SeldComponents& c);

// Great-circle angle between two directions, in [0, pi].
double angular_distance(const Direction& a, const Direction& b);

}  // namespace ambiaug
