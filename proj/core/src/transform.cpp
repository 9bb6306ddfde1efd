#include "ambiaug/transform.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ambiaug {
namespace {

constexpr double kPi = 3.14159265358979323846;

// Dipole magnitude of the orthonormal basis, sqrt(3/(4*pi)). Dividing a
// transformed first-order coefficient triple by this recovers a Cartesian
// vector that equals the input direction under the identity transform.
const double kDipoleScale = std::sqrt(3.0 / (4.0 * kPi));

}  // namespace

void SphericalCap::validate() const {
  if (!(width > 0.0) || width > kPi) {
    throw std::invalid_argument("SphericalCap: width must be in (0, pi]");
  }
  if (gain_inside_db > 0.0 || gain_outside_db > 0.0) {
    throw std::invalid_argument("SphericalCap: gains must be <= 0 dB");
  }
}

double db_to_linear(double db) { return std::pow(10.0, db / 20.0); }

DirectionalGains cap_gains(const SphericalCap& cap, const SphericalGrid& grid) {
  cap.validate();
  const Eigen::Vector3d c = cap.center.unit();
  const double threshold = std::cos(cap.width / 2.0);
  const double g1 = db_to_linear(cap.gain_inside_db);
  const double g2 = db_to_linear(cap.gain_outside_db);

  DirectionalGains out;
  out.grid = grid;
  out.linear.resize(grid.size());
  for (int i = 0; i < grid.size(); ++i) {
    out.linear[i] = (c.dot(grid.directions[i].unit()) >= threshold) ? g1 : g2;
  }
  return out;
}

Eigen::MatrixXd build_beamformer(const SphericalGrid& grid, int order_in,
                                 BeamformerScaling scaling, bool strict) {
  if (order_in < 0) throw std::invalid_argument("build_beamformer: negative order");
  if (strict && grid.quadrature_degree < 2 * order_in) {
    throw std::invalid_argument(
        "build_beamformer: grid degree " + std::to_string(grid.quadrature_degree) +
        " is below 2*order_in = " + std::to_string(2 * order_in));
  }
  const double c = scaling == BeamformerScaling::Quadrature
                       ? 4.0 * kPi / grid.size()
                       : 1.0 / ((order_in + 1) * (order_in + 1));
  return c * build_sh_matrix(grid, order_in).transpose();
}

DirectionalTransform build_transform(const SphericalGrid& grid, const DirectionalGains& gains,
                                     int order_in, int order_out,
                                     const TransformOptions& options) {
  if (order_in < 0 || order_out < 0) {
    throw std::invalid_argument("build_transform: negative order");
  }
  if (!gains.grid.same_points_as(grid)) {
    throw std::invalid_argument("build_transform: gains were computed on a different grid");
  }
  if (gains.linear.size() != grid.size()) {
    throw std::invalid_argument("build_transform: gain count does not match grid size");
  }
  if (gains.linear.minCoeff() < 0.0) {
    throw std::invalid_argument("build_transform: negative linear gain");
  }
  if (options.rotation && order_in != 1) {
    throw std::invalid_argument("build_transform: rotation requires order_in == 1");
  }

  DirectionalTransform t;
  t.order_in = order_in;
  t.order_out = order_out;
  t.provenance.grid_degree = grid.quadrature_degree;
  t.provenance.n_grid = grid.size();
  t.provenance.gains.assign(gains.linear.data(), gains.linear.data() + gains.linear.size());
  t.provenance.scaling = options.scaling;
  t.provenance.rotated = options.rotation.has_value();

  const int needed = order_in + order_out;
  if (grid.quadrature_degree < needed) {
    const std::string msg = "grid degree " + std::to_string(grid.quadrature_degree) +
                            " below order_in + order_out = " + std::to_string(needed) +
                            "; transform deviates from the exact projection";
    if (options.strict) throw std::invalid_argument("build_transform: " + msg);
    t.provenance.warnings.push_back(msg);
  }

  const Eigen::MatrixXd w = build_beamformer(grid, order_in, options.scaling, options.strict);
  const Eigen::MatrixXd y_out = build_sh_matrix(grid, order_out);
  t.matrix = y_out * gains.linear.asDiagonal() * w;
  if (options.rotation) {
    // The soundfield is rotated before the directional gains act on it.
    t.matrix = t.matrix * first_order_rotation_matrix(*options.rotation);
  }
  return t;
}

DirectionalTransform identity_transform(int order) {
  if (order < 0) throw std::invalid_argument("identity_transform: negative order");
  const int n = (order + 1) * (order + 1);
  DirectionalTransform t;
  t.order_in = order;
  t.order_out = order;
  t.matrix = Eigen::MatrixXd::Identity(n, n);
  return t;
}

AmbisonicClip apply_spatial_mixup(const AmbisonicClip& clip, const DirectionalTransform& t,
                                  double lambda) {
  if (lambda < 0.0 || lambda > 1.0) {
    throw std::invalid_argument("apply_spatial_mixup: lambda must be in [0, 1]");
  }
  if (clip.normalization != ShNormalization::N3d) {
    throw std::invalid_argument("apply_spatial_mixup: clip must be N3D normalized");
  }
  const int ch_in = (t.order_in + 1) * (t.order_in + 1);
  const int ch_out = (t.order_out + 1) * (t.order_out + 1);
  if (clip.channels() != ch_in) {
    throw std::invalid_argument("apply_spatial_mixup: clip has " +
                                std::to_string(clip.channels()) + " channels, transform expects " +
                                std::to_string(ch_in));
  }

  // M = lambda * I_pad + (1 - lambda) * T, where I_pad injects or truncates
  // channels when the orders differ.
  Eigen::MatrixXd m = (1.0 - lambda) * t.matrix;
  const int common = std::min(ch_in, ch_out);
  for (int i = 0; i < common; ++i) m(i, i) += lambda;

  AmbisonicClip out = clip;
  out.order = t.order_out;
  out.samples = m * clip.samples;
  return out;
}

AccdoaFrameLabels transform_labels(const AccdoaFrameLabels& labels,
                                   const DirectionalTransform& t, double lambda) {
  if (!t.is_first_order()) {
    throw std::invalid_argument("transform_labels: transform must be first order in and out");
  }
  if (lambda < 0.0 || lambda > 1.0) {
    throw std::invalid_argument("transform_labels: lambda must be in [0, 1]");
  }

  AccdoaFrameLabels out;
  for (const auto& [frame, events] : labels.frames) {
    std::vector<AccdoaEvent> transformed;
    transformed.reserve(events.size());
    for (const AccdoaEvent& e : events) {
      AccdoaEvent ne = e;
      const double activity = e.vec.norm();
      if (activity > 0.0) {
        const ShVector y = eval_sh(Direction::from_unit(e.vec), 1);
        const Eigen::Vector4d v =
            lambda * y.coeffs + (1.0 - lambda) * (t.matrix * y.coeffs);
        // ACN channels 1..3 carry (y, z, x).
        const Eigen::Vector3d cart(v[3], v[1], v[2]);
        ne.vec = activity * cart / kDipoleScale;
      }
      transformed.push_back(ne);
    }
    out.frames.emplace(frame, std::move(transformed));
  }
  return out;
}

double directivity_response(const DirectionalTransform& t, int channel, const Direction& probe) {
  const int ch_out = (t.order_out + 1) * (t.order_out + 1);
  if (channel < 0 || channel >= ch_out) {
    throw std::invalid_argument("directivity_response: channel out of range");
  }
  const ShVector y = eval_sh(probe, t.order_in);
  return t.matrix.row(channel).dot(y.coeffs);
}

Eigen::MatrixXd regular_mixup(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, double lambda) {
  if (x.rows() != y.rows() || x.cols() != y.cols()) {
    throw std::invalid_argument("regular_mixup: shape mismatch");
  }
  return lambda * x + (1.0 - lambda) * y;
}

AmbisonicClip encode_plane_wave(const Eigen::VectorXd& signal, const Direction& d, int order,
                                int sample_rate) {
  const ShVector y = eval_sh(d, order);
  AmbisonicClip clip;
  clip.sample_rate = sample_rate;
  clip.order = order;
  clip.normalization = ShNormalization::N3d;
  clip.samples = y.coeffs * signal.transpose();
  return clip;
}

}  // namespace ambiaug
