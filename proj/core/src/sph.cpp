#include "ambiaug/sph.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ambiaug {
namespace {

constexpr double kPi = 3.14159265358979323846;

// Wraps an angle to (-pi, pi].
double wrap_pi(double a) {
  double r = std::remainder(a, 2.0 * kPi);
  if (r <= -kPi) r += 2.0 * kPi;
  return r;
}

double factorial_ratio(int n, int m) {
  // (n - m)! / (n + m)! computed as a running product to avoid overflow.
  double r = 1.0;
  for (int k = n - m + 1; k <= n + m; ++k) r /= k;
  return r;
}

}  // namespace

Direction::Direction(double azimuth, double elevation) {
  double el = wrap_pi(elevation);
  double az = azimuth;
  if (el > kPi / 2.0) {
    el = kPi - el;
    az += kPi;
  } else if (el < -kPi / 2.0) {
    el = -kPi - el;
    az += kPi;
  }
  azimuth_ = wrap_pi(az);
  elevation_ = el;
}

Direction Direction::from_unit(const Eigen::Vector3d& v) {
  const double n = v.norm();
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw std::invalid_argument("Direction::from_unit: zero or non-finite vector");
  }
  const Eigen::Vector3d u = v / n;
  double z = u.z();
  if (z > 1.0) z = 1.0;
  if (z < -1.0) z = -1.0;
  return Direction(std::atan2(u.y(), u.x()), std::asin(z));
}

Eigen::Vector3d Direction::unit() const {
  const double ce = std::cos(elevation_);
  return {ce * std::cos(azimuth_), ce * std::sin(azimuth_), std::sin(elevation_)};
}

Direction Direction::antipode() const {
  return Direction(azimuth_ + kPi, -elevation_);
}

ShVector eval_sh(const Direction& d, int order) {
  if (order < 0) throw std::invalid_argument("eval_sh: order must be non-negative");

  const int n_ch = (order + 1) * (order + 1);
  ShVector out;
  out.order = order;
  out.coeffs.resize(n_ch);

  const double se = std::sin(d.elevation());
  const double ce = std::cos(d.elevation());

  // Associated Legendre values P(n, m) at sin(elevation), without the
  // Condon-Shortley phase, stored for m in [0, order].
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(order + 1, order + 1);
  P(0, 0) = 1.0;
  for (int m = 1; m <= order; ++m) {
    P(m, m) = P(m - 1, m - 1) * (2 * m - 1) * ce;
  }
  for (int m = 0; m < order; ++m) {
    P(m + 1, m) = (2 * m + 1) * se * P(m, m);
  }
  for (int m = 0; m <= order; ++m) {
    for (int n = m + 2; n <= order; ++n) {
      P(n, m) = ((2 * n - 1) * se * P(n - 1, m) - (n + m - 1) * P(n - 2, m)) / (n - m);
    }
  }

  for (int n = 0; n <= order; ++n) {
    for (int m = -n; m <= n; ++m) {
      const int am = std::abs(m);
      double k = (2 * n + 1) / (4.0 * kPi);
      if (am > 0) k *= 2.0 * factorial_ratio(n, am);
      const double norm = std::sqrt(k);
      double v = norm * P(n, am);
      if (m > 0) {
        v *= std::cos(m * d.azimuth());
      } else if (m < 0) {
        v *= std::sin(am * d.azimuth());
      }
      out.coeffs[n * n + n + m] = v;
    }
  }
  return out;
}

bool SphericalGrid::same_points_as(const SphericalGrid& other, double tol) const {
  if (directions.size() != other.directions.size()) return false;
  for (size_t i = 0; i < directions.size(); ++i) {
    if ((directions[i].unit() - other.directions[i].unit()).norm() > tol) return false;
  }
  return true;
}

SphericalGrid tdesign(int degree) {
  SphericalGrid grid;
  grid.quadrature_degree = degree;
  if (degree == 3) {
    const double pts[6][3] = {
        {1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1},
    };
    for (const auto& p : pts) {
      grid.directions.push_back(Direction::from_unit({p[0], p[1], p[2]}));
    }
    return grid;
  }
  if (degree == 7) {
    // 24-point orbit of the rotation group of the cube; the three squared
    // coordinates are the roots of t^3 - t^2 + t/5 - 1/105.
    const double pts[24][3] = {
        {0.26663540151670473, 0.42251865376111153, 0.86624681810782056},
        {0.26663540151670473, -0.42251865376111153, -0.86624681810782056},
        {-0.26663540151670473, 0.42251865376111153, -0.86624681810782056},
        {-0.26663540151670473, -0.42251865376111153, 0.86624681810782056},
        {0.42251865376111153, 0.86624681810782056, 0.26663540151670473},
        {0.42251865376111153, -0.86624681810782056, -0.26663540151670473},
        {-0.42251865376111153, 0.86624681810782056, -0.26663540151670473},
        {-0.42251865376111153, -0.86624681810782056, 0.26663540151670473},
        {0.86624681810782056, 0.26663540151670473, 0.42251865376111153},
        {0.86624681810782056, -0.26663540151670473, -0.42251865376111153},
        {-0.86624681810782056, 0.26663540151670473, -0.42251865376111153},
        {-0.86624681810782056, -0.26663540151670473, 0.42251865376111153},
        {-0.26663540151670473, -0.86624681810782056, -0.42251865376111153},
        {-0.26663540151670473, 0.86624681810782056, 0.42251865376111153},
        {0.26663540151670473, -0.86624681810782056, 0.42251865376111153},
        {0.26663540151670473, 0.86624681810782056, -0.42251865376111153},
        {-0.86624681810782056, -0.42251865376111153, -0.26663540151670473},
        {-0.86624681810782056, 0.42251865376111153, 0.26663540151670473},
        {0.86624681810782056, -0.42251865376111153, 0.26663540151670473},
        {0.86624681810782056, 0.42251865376111153, -0.26663540151670473},
        {-0.42251865376111153, -0.26663540151670473, -0.86624681810782056},
        {-0.42251865376111153, 0.26663540151670473, 0.86624681810782056},
        {0.42251865376111153, -0.26663540151670473, 0.86624681810782056},
        {0.42251865376111153, 0.26663540151670473, -0.86624681810782056},
    };
    for (const auto& p : pts) {
      grid.directions.push_back(Direction::from_unit({p[0], p[1], p[2]}));
    }
    return grid;
  }
  throw std::invalid_argument("tdesign: unsupported degree " + std::to_string(degree) +
                              " (supported degrees: 3, 7)");
}

Eigen::MatrixXd build_sh_matrix(const SphericalGrid& grid, int order) {
  const int n_ch = (order + 1) * (order + 1);
  Eigen::MatrixXd m(n_ch, grid.size());
  for (int i = 0; i < grid.size(); ++i) {
    m.col(i) = eval_sh(grid.directions[i], order).coeffs;
  }
  return m;
}

Rotation3::Rotation3() : m_(Eigen::Matrix3d::Identity()) {}

Rotation3::Rotation3(const Eigen::Matrix3d& m) : m_(m) {}

Rotation3 Rotation3::identity() { return Rotation3(); }

Rotation3 Rotation3::axis_angle(const Eigen::Vector3d& axis, double angle) {
  const double n = axis.norm();
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw std::invalid_argument("Rotation3::axis_angle: zero or non-finite axis");
  }
  return Rotation3(Eigen::AngleAxisd(angle, axis / n).toRotationMatrix());
}

Rotation3 Rotation3::from_matrix(const Eigen::Matrix3d& m) {
  const double ortho = (m.transpose() * m - Eigen::Matrix3d::Identity()).norm();
  if (ortho > 1e-9) {
    throw std::invalid_argument("Rotation3::from_matrix: matrix is not orthogonal");
  }
  if (std::abs(m.determinant() - 1.0) > 1e-9) {
    throw std::invalid_argument("Rotation3::from_matrix: determinant is not +1");
  }
  return Rotation3(m);
}

Rotation3 Rotation3::inverse() const { return Rotation3(m_.transpose().eval()); }

Eigen::Vector3d Rotation3::apply(const Eigen::Vector3d& v) const { return m_ * v; }

Direction Rotation3::apply(const Direction& d) const {
  return Direction::from_unit(m_ * d.unit());
}

Eigen::Matrix4d first_order_rotation_matrix(const Rotation3& rot) {
  // ACN dipole channels carry the (y, z, x) components of the direction, so
  // the channel-space block is the rotation matrix conjugated by that
  // coordinate permutation.
  static const int axis[3] = {1, 2, 0};
  Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
  m(0, 0) = 1.0;
  const Eigen::Matrix3d& r = rot.matrix();
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      m(1 + i, 1 + j) = r(axis[i], axis[j]);
    }
  }
  return m;
}

ShVector rotate_first_order(const ShVector& v, const Rotation3& rot) {
  if (v.order != 1) {
    throw std::invalid_argument("rotate_first_order: order must be exactly 1");
  }
  ShVector out;
  out.order = 1;
  out.coeffs = first_order_rotation_matrix(rot) * v.coeffs;
  return out;
}

}  // namespace ambiaug
