#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace sixdma {

template <typename Scalar>
using Vector3 = Eigen::Matrix<Scalar, 3, 1>;
template <typename Scalar>
using Matrix3 = Eigen::Matrix<Scalar, 3, 3>;

/// Point in the global frame, metres, CPU centre at the origin.
using Position3 = Eigen::Vector3d;
using RotationMatrix = Eigen::Matrix3d;

/// Rotation angles w.r.t. the global x, y and z axes, radians.
template <typename Scalar>
struct RotationAnglesT {
  Scalar alpha{0};
  Scalar beta{0};
  Scalar gamma{0};
};
using RotationAngles = RotationAnglesT<double>;

template <typename Scalar>
Scalar wrap_two_pi(Scalar angle) {
  constexpr Scalar two_pi = Scalar(2) * std::numbers::pi_v<Scalar>;
  Scalar wrapped = std::fmod(angle, two_pi);
  if (wrapped < Scalar(0)) wrapped += two_pi;
  // fmod of a tiny negative value can round up to exactly 2*pi
  if (wrapped >= two_pi) wrapped = Scalar(0);
  return wrapped;
}

/// Canonical form with every angle in [0, 2*pi).
template <typename Scalar>
RotationAnglesT<Scalar> normalized(const RotationAnglesT<Scalar>& u) {
  return {wrap_two_pi(u.alpha), wrap_two_pi(u.beta), wrap_two_pi(u.gamma)};
}

/// Rotation matrix of the 6DMA pose model. Entries follow the closed form
/// with R(1,3) = -sin(alpha); the columns are the local x', y', z' axes
/// expressed in the global frame.
template <typename Scalar>
Matrix3<Scalar> rotation_matrix(const RotationAnglesT<Scalar>& u) {
  using std::cos;
  using std::sin;
  const Scalar ca = cos(u.alpha), sa = sin(u.alpha);
  const Scalar cb = cos(u.beta), sb = sin(u.beta);
  const Scalar cg = cos(u.gamma), sg = sin(u.gamma);
  Matrix3<Scalar> r;
  r << ca * cg, ca * sg, -sa,
       sb * sa * cg - cb * sg, sb * sa * sg + cb * cg, ca * sb,
       cb * sa * cg + sb * sg, cb * sa * sg - sb * cg, ca * cb;
  return r;
}

template <typename Scalar>
struct EulerExtractionT {
  RotationAnglesT<Scalar> angles;
  /// |R(1,3)| == 1: alpha = +-pi/2 and only beta -/+ gamma is observable.
  bool degenerate{false};
};
using EulerExtraction = EulerExtractionT<double>;

/// Inverse of rotation_matrix. Angles come back normalized to [0, 2*pi).
/// At gimbal lock gamma is pinned to zero; the matrix still round-trips.
template <typename Scalar>
EulerExtractionT<Scalar> euler_angles(const Matrix3<Scalar>& r,
                                      Scalar gimbal_tolerance = Scalar(1e-9)) {
  using std::abs;
  using std::asin;
  using std::atan2;
  EulerExtractionT<Scalar> out;
  const Scalar r13 = r(0, 2);
  if (abs(abs(r13) - Scalar(1)) <= gimbal_tolerance) {
    out.degenerate = true;
    const Scalar half_pi = std::numbers::pi_v<Scalar> / Scalar(2);
    if (r13 < Scalar(0)) {
      // sin(alpha) = 1: R21 = sin(beta - gamma), R22 = cos(beta - gamma)
      out.angles = {half_pi, atan2(r(1, 0), r(1, 1)), Scalar(0)};
    } else {
      // sin(alpha) = -1: R21 = -sin(beta + gamma), R22 = cos(beta + gamma)
      out.angles = {-half_pi, atan2(-r(1, 0), r(1, 1)), Scalar(0)};
    }
  } else {
    Scalar s = -r13;
    if (s > Scalar(1)) s = Scalar(1);
    if (s < Scalar(-1)) s = Scalar(-1);
    out.angles = {asin(s), atan2(r(1, 2), r(2, 2)), atan2(r(0, 1), r(0, 0))};
  }
  out.angles = normalized(out.angles);
  return out;
}

/// Unit direction for elevation theta in [-pi/2, pi/2] and azimuth phi in
/// [-pi, pi]. Throws std::domain_error outside those ranges.
template <typename Scalar>
Vector3<Scalar> pointing_vector(Scalar theta, Scalar phi) {
  constexpr Scalar pi = std::numbers::pi_v<Scalar>;
  const Scalar slack = Scalar(1e-12);
  if (!(theta >= -pi / 2 - slack && theta <= pi / 2 + slack)) {
    throw std::domain_error("pointing_vector: elevation outside [-pi/2, pi/2]");
  }
  if (!(phi >= -pi - slack && phi <= pi + slack)) {
    throw std::domain_error("pointing_vector: azimuth outside [-pi, pi]");
  }
  using std::cos;
  using std::sin;
  return {cos(theta) * cos(phi), cos(theta) * sin(phi), sin(theta)};
}

/// Outward normal n(u) = R(u) * x'.
template <typename Scalar>
Vector3<Scalar> surface_normal(const RotationAnglesT<Scalar>& u) {
  return rotation_matrix(u).col(0);
}

/// Element positions of one surface in its local frame. The array lies in
/// the local y'-z' plane with the boresight along x'.
class AntennaLayout {
 public:
  AntennaLayout() = default;
  explicit AntennaLayout(Eigen::Matrix3Xd local_positions);

  /// rows x cols planar array, rows stacked along z', columns along y'.
  static AntennaLayout planar(int rows, int cols, double spacing);
  /// Near-square planar array for N elements (rows = largest divisor of N
  /// not exceeding sqrt(N)); 4 -> 2x2, 2 -> 1x2.
  static AntennaLayout upa(int n, double spacing);
  /// Vertical line array along z'.
  static AntennaLayout vertical_line(int n, double spacing);

  [[nodiscard]] int size() const { return static_cast<int>(local_.cols()); }
  [[nodiscard]] const Eigen::Matrix3Xd& local_positions() const { return local_; }

 private:
  Eigen::Matrix3Xd local_;
};

/// r_n = q + R * r̄_n for every element (one column per element).
Eigen::Matrix3Xd antenna_positions(const Position3& q, const RotationMatrix& r,
                                   const AntennaLayout& layout);
Eigen::Matrix3Xd antenna_positions(const Position3& q, const RotationAngles& u,
                                   const AntennaLayout& layout);

/// One surface's position and rotation with the rotation matrix cached.
struct SurfacePose {
  Position3 position{Position3::Zero()};
  RotationAngles angles{};
  RotationMatrix rotation{RotationMatrix::Identity()};

  static SurfacePose from_angles(const Position3& q, const RotationAngles& u);
  /// The angles are extracted from `r` and the cached matrix is rebuilt
  /// from them so both stay consistent.
  static SurfacePose from_matrix(const Position3& q, const RotationMatrix& r);

  [[nodiscard]] Eigen::Vector3d normal() const { return rotation.col(0); }
};

/// True when R^T R = I and det R = +1 within `tol`.
bool is_rotation(const RotationMatrix& r, double tol = 1e-9);

}  // namespace sixdma
