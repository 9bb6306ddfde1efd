#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "ambiaug/clip.hpp"
#include "ambiaug/labels.hpp"
#include "ambiaug/sph.hpp"

namespace ambiaug {

// Spherical-cap gain shape: gain_inside_db applies to grid points within
// width/2 of the center (boundary points count as inside), gain_outside_db
// to the rest. Gains are attenuation-only.
struct SphericalCap {
  Direction center;
  double width = 0.0;
  double gain_inside_db = 0.0;
  double gain_outside_db = 0.0;

  void validate() const;
};

// Per-grid-point linear gains, the diagonal of the gain matrix.
struct DirectionalGains {
  SphericalGrid grid;
  Eigen::VectorXd linear;
};

double db_to_linear(double db);

DirectionalGains cap_gains(const SphericalCap& cap, const SphericalGrid& grid);

// Scaling of the beamforming matrix W = c * Y^T.
//   Quadrature:    c = 4*pi/n_grid. Unit gains reproduce the identity
//                  exactly whenever the grid degree covers order_in + order_out.
//   ChannelCount:  c = 1/(order_in+1)^2. Kept for compatibility with
//                  implementations that normalize by the channel count; unit
//                  gains then yield a scaled identity, not the identity.
enum class BeamformerScaling { Quadrature, ChannelCount };

// W maps coefficients to per-grid-point beam signals; shape n_grid x (order_in+1)^2.
// strict rejects grids whose quadrature degree is below 2*order_in; otherwise
// the condition is recorded as a warning on the caller's side.
Eigen::MatrixXd build_beamformer(const SphericalGrid& grid, int order_in,
                                 BeamformerScaling scaling = BeamformerScaling::Quadrature,
                                 bool strict = true);

struct TransformProvenance {
  int grid_degree = 0;
  int n_grid = 0;
  std::vector<double> gains;
  BeamformerScaling scaling = BeamformerScaling::Quadrature;
  bool rotated = false;
  std::vector<std::string> warnings;
};

// The directional-loudness matrix T = Y_out * diag(g) * W (optionally with a
// first-order rotation composed on the input side), with enough provenance
// to reproduce it.
struct DirectionalTransform {
  Eigen::MatrixXd matrix;
  int order_in = 1;
  int order_out = 1;
  TransformProvenance provenance;

  bool is_first_order() const { return order_in == 1 && order_out == 1; }
};

struct TransformOptions {
  BeamformerScaling scaling = BeamformerScaling::Quadrature;
  std::optional<Rotation3> rotation;
  // strict: grids too coarse for the requested orders are an error.
  // Otherwise the deficiency is recorded in provenance.warnings.
  bool strict = true;
};

DirectionalTransform build_transform(const SphericalGrid& grid, const DirectionalGains& gains,
                                     int order_in, int order_out,
                                     const TransformOptions& options = {});

// DirectionalTransform for the identity mapping at the given order.
DirectionalTransform identity_transform(int order);

// X_hat = lambda * X + (1 - lambda) * T * X, applied per sample frame. When
// the output order differs from the input order, the lambda * X term is
// zero-padded or truncated to the output channel count. The clip must be in
// N3D normalization.
AmbisonicClip apply_spatial_mixup(const AmbisonicClip& clip, const DirectionalTransform& t,
                                  double lambda);

// Applies the same mixup to ACCDOA label vectors: each event's unit DOA
// vector is encoded to first-order coefficients, passed through
// lambda * I + (1 - lambda) * T, and decoded back from the dipole channels.
// Decoding divides by the dipole magnitude of the basis so the identity
// transform returns labels exactly. Event activity (vector length) shrinks
// when the transform attenuates the event's direction.
AccdoaFrameLabels transform_labels(const AccdoaFrameLabels& labels,
                                   const DirectionalTransform& t, double lambda);

// Response of one output channel to a unit plane wave from the probe
// direction: (T * eval_sh(probe, order_in))[channel].
double directivity_response(const DirectionalTransform& t, int channel, const Direction& probe);

// lambda * x + (1 - lambda) * y elementwise; shapes must match.
Eigen::MatrixXd regular_mixup(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, double lambda);

// Synthesizes an order-N clip of the given mono signal arriving as a plane
// wave from direction d (N3D normalization).
AmbisonicClip encode_plane_wave(const Eigen::VectorXd& signal, const Direction& d, int order,
                                int sample_rate);

}  // namespace ambiaug
