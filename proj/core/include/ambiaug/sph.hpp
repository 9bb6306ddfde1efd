#pragma once

#include <Eigen/Dense>
#include <vector>

namespace ambiaug {

// A point on the unit sphere. Azimuth is measured counterclockwise from +x
// toward +y, elevation upward from the horizontal plane. Construction
// canonicalizes any (azimuth, elevation) pair to azimuth in (-pi, pi] and
// elevation in [-pi/2, pi/2]; angles beyond the elevation range fold over
// the pole onto the equivalent direction.
class Direction {
public:
  Direction() = default;
  Direction(double azimuth, double elevation);

  static Direction from_unit(const Eigen::Vector3d& v);

  double azimuth() const { return azimuth_; }
  double elevation() const { return elevation_; }
  Eigen::Vector3d unit() const;
  Direction antipode() const;

private:
  double azimuth_ = 0.0;
  double elevation_ = 0.0;
};

// Real orthonormal spherical-harmonic coefficients in ACN channel order:
// channel index n*n + n + m for degree n and order m.
struct ShVector {
  int order = 0;
  Eigen::VectorXd coeffs;
};

// Evaluates the real orthonormal spherical-harmonic basis at a direction.
// Channel 0 is the constant 1/(2*sqrt(pi)); channels 1..3 are the dipoles
// sqrt(3/(4*pi)) * (y, z, x) of the direction's unit vector.
ShVector eval_sh(const Direction& d, int order);

// Unit-sphere sampling directions whose equal-weight quadrature rule
// (weight 4*pi/n per point) integrates spherical-harmonic products exactly
// up to total degree quadrature_degree.
struct SphericalGrid {
  std::vector<Direction> directions;
  int quadrature_degree = 0;

  int size() const { return static_cast<int>(directions.size()); }
  bool same_points_as(const SphericalGrid& other, double tol = 1e-12) const;
};

// Returns the embedded spherical t-design for the given degree.
// Degree 3 is the 6-point octahedron; degree 7 a 24-point design. Both
// tables are validated by the quadrature tests rather than trusted.
SphericalGrid tdesign(int degree);

// Matrix whose column i is eval_sh(grid.directions[i], order);
// shape (order+1)^2 x n_grid.
Eigen::MatrixXd build_sh_matrix(const SphericalGrid& grid, int order);

// Proper rotation of 3-space. Construction validates orthogonality and
// determinant +1 to 1e-9.
class Rotation3 {
public:
  Rotation3();
  static Rotation3 identity();
  static Rotation3 axis_angle(const Eigen::Vector3d& axis, double angle);
  static Rotation3 from_matrix(const Eigen::Matrix3d& m);

  const Eigen::Matrix3d& matrix() const { return m_; }
  Rotation3 inverse() const;
  Eigen::Vector3d apply(const Eigen::Vector3d& v) const;
  Direction apply(const Direction& d) const;

private:
  explicit Rotation3(const Eigen::Matrix3d& m);
  Eigen::Matrix3d m_;
};

// Rotates a first-order coefficient vector so a plane wave from direction d
// maps to a plane wave from rot.apply(d). The omni channel is fixed; the
// dipole channels transform by the rotation matrix expressed in ACN (y,z,x)
// component order. Rejects orders other than 1.
ShVector rotate_first_order(const ShVector& v, const Rotation3& rot);

// The 4x4 first-order channel-space matrix of rotate_first_order.
Eigen::Matrix4d first_order_rotation_matrix(const Rotation3& rot);

}  // namespace ambiaug
