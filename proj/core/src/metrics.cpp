#include "ambiaug/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ambiaug {
namespace {

constexpr double kPi = 3.14159265358979323846;

double fraction_from_table(double v, const char* name) {
  if (v < 0.0) throw std::invalid_argument(std::string(name) + " must be non-negative");
  if (v > 1.0) {
    if (v > 100.0) {
      throw std::invalid_argument(std::string(name) + " above 100 is neither a fraction nor a percentage");
    }
    return v / 100.0;
  }
  return v;
}

}  // namespace

SeldComponents SeldComponents::from_table(double er, double f, double le_degrees, double lr) {
  SeldComponents c;
  c.error_rate = er;
  c.f_score = fraction_from_table(f, "f_score");
  c.localization_error = le_degrees * kPi / 180.0;
  c.localization_recall = fraction_from_table(lr, "localization_recall");
  c.validate();
  return c;
}

void SeldComponents::validate() const {
  if (error_rate < 0.0 || !std::isfinite(error_rate)) {
    throw std::invalid_argument("SeldComponents: error_rate must be finite and >= 0");
  }
  if (f_score < 0.0 || f_score > 1.0) {
    throw std::invalid_argument("SeldComponents: f_score must be in [0, 1]");
  }
  if (localization_error < 0.0 || !std::isfinite(localization_error)) {
    throw std::invalid_argument("SeldComponents: localization_error must be finite and >= 0");
  }
  if (localization_recall < 0.0 || localization_recall > 1.0) {
    throw std::invalid_argument("SeldComponents: localization_recall must be in [0, 1]");
  }
}

double seld_error(const SeldComponents& c) {
  c.validate();
  return (c.error_rate + (1.0 - c.f_score) + c.localization_error / kPi +
          (1.0 - c.localization_recall)) /
         4.0;
}

double angular_distance(const Direction& a, const Direction& b) {
  const double d = std::clamp(a.unit().dot(b.unit()), -1.0, 1.0);
  return std::acos(d);
}

}  // namespace ambiaug
