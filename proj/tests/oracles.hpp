// Test-local reference implementations, deliberately independent of the
// library: plain scalar code, no Eigen, no shared helpers. Expected values
// in the test suite come from these oracles (or from the published result
// tables), never from the code under test.
#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

namespace oracle {

inline constexpr double kPi = 3.14159265358979323846;

// ---------------------------------------------------------------------------
// Closed-form real orthonormal spherical harmonics for degrees 0 and 1,
// ACN order: [omni, dipole-y, dipole-z, dipole-x].
// ---------------------------------------------------------------------------
inline std::array<double, 4> sh1(double az, double el) {
  const double omni = 0.5 / std::sqrt(kPi);            // 1/(2 sqrt(pi))
  const double dip = std::sqrt(3.0 / (4.0 * kPi));     // dipole magnitude
  const double x = std::cos(el) * std::cos(az);
  const double y = std::cos(el) * std::sin(az);
  const double z = std::sin(el);
  return {omni, dip * y, dip * z, dip * x};
}

// ---------------------------------------------------------------------------
// Gauss-Legendre nodes and weights on [-1, 1], computed at runtime by Newton
// iteration on the Legendre recurrence.
// ---------------------------------------------------------------------------
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;

  explicit GaussLegendre(int n) {
    nodes.resize(n);
    weights.resize(n);
    for (int i = 0; i < n; ++i) {
      // Chebyshev-based initial guess for the i-th root.
      double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-15) break;
      }
      nodes[i] = x;
      weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
  }
};

// Integrates f(az, el) over the unit sphere with a Gauss-Legendre rule in
// sin(elevation) and a uniform product rule in azimuth. Exact (to machine
// precision) for spherical polynomials of degree < min(2*n_polar, n_az).
inline double integrate_sphere(const std::function<double(double, double)>& f, int n_polar = 48,
                               int n_az = 96) {
  static thread_local int cached_n = 0;
  static thread_local GaussLegendre* cached = nullptr;
  if (cached_n != n_polar) {
    delete cached;
    cached = new GaussLegendre(n_polar);
    cached_n = n_polar;
  }
  double sum = 0.0;
  for (int i = 0; i < n_polar; ++i) {
    const double el = std::asin(cached->nodes[i]);
    double ring = 0.0;
    for (int j = 0; j < n_az; ++j) {
      const double az = -kPi + 2.0 * kPi * (j + 0.5) / n_az;
      ring += f(az, el);
    }
    sum += cached->weights[i] * ring * (2.0 * kPi / n_az);
  }
  return sum;
}

// ---------------------------------------------------------------------------
// Dense-sphere directivity oracle. Models the directional loudness operation
// semantically for a first-order input plane wave from (az, el):
//   1. beamform to each grid direction:      b_i = (4 pi / n) y(g_i) . y(d)
//   2. apply the per-direction gain:         b_i <- gain_i * b_i
//   3. resynthesize the directivity pattern: F(w) = sum_i b_i  y(g_i) . y(w)
//   4. recover output coefficients by dense numerical integration of F
//      against the basis.
// Steps 1-3 use only the closed-form sh1 above; step 4 never assumes the
// discrete grid has any quadrature property.
// ---------------------------------------------------------------------------
struct PlaneWaveResponse {
  double omni_ratio;        // output omni coefficient / input omni coefficient
  std::array<double, 3> label_vec;  // transformed unit label as (x, y, z)
  double label_length;
};

inline PlaneWaveResponse directivity_plane_wave(const std::vector<std::array<double, 2>>& grid_azel,
                                                const std::vector<double>& gains, double az,
                                                double el) {
  const size_t n = grid_azel.size();
  const std::array<double, 4> yd = sh1(az, el);

  std::vector<double> b(n);
  for (size_t i = 0; i < n; ++i) {
    const std::array<double, 4> yg = sh1(grid_azel[i][0], grid_azel[i][1]);
    double dot = 0.0;
    for (int k = 0; k < 4; ++k) dot += yg[k] * yd[k];
    b[i] = gains[i] * (4.0 * kPi / static_cast<double>(n)) * dot;
  }

  auto field = [&](double waz, double wel) {
    const std::array<double, 4> yw = sh1(waz, wel);
    double v = 0.0;
    for (size_t i = 0; i < n; ++i) {
      const std::array<double, 4> yg = sh1(grid_azel[i][0], grid_azel[i][1]);
      double dot = 0.0;
      for (int k = 0; k < 4; ++k) dot += yg[k] * yw[k];
      v += b[i] * dot;
    }
    return v;
  };

  std::array<double, 4> out{};
  for (int k = 0; k < 4; ++k) {
    out[k] = integrate_sphere([&](double waz, double wel) {
      return field(waz, wel) * sh1(waz, wel)[k];
    });
  }

  PlaneWaveResponse r{};
  r.omni_ratio = out[0] / yd[0];
  const double dip = std::sqrt(3.0 / (4.0 * kPi));
  r.label_vec = {out[3] / dip, out[1] / dip, out[2] / dip};
  r.label_length = std::sqrt(r.label_vec[0] * r.label_vec[0] + r.label_vec[1] * r.label_vec[1] +
                             r.label_vec[2] * r.label_vec[2]);
  return r;
}

// Spherical-cap gains evaluated directly from the definition.
inline std::vector<double> cap_gains_ref(const std::vector<std::array<double, 2>>& grid_azel,
                                         double cap_az, double cap_el, double width, double g1_db,
                                         double g2_db) {
  auto unit = [](double az, double el) {
    return std::array<double, 3>{std::cos(el) * std::cos(az), std::cos(el) * std::sin(az),
                                 std::sin(el)};
  };
  const std::array<double, 3> c = unit(cap_az, cap_el);
  const double threshold = std::cos(width / 2.0);
  const double g1 = std::pow(10.0, g1_db / 20.0);
  const double g2 = std::pow(10.0, g2_db / 20.0);
  std::vector<double> g;
  g.reserve(grid_azel.size());
  for (const auto& p : grid_azel) {
    const std::array<double, 3> u = unit(p[0], p[1]);
    const double dot = c[0] * u[0] + c[1] * u[1] + c[2] * u[2];
    g.push_back(dot >= threshold ? g1 : g2);
  }
  return g;
}

}  // namespace oracle
