#include "sixdma/geometry.hpp"

#include <cmath>

namespace sixdma {

AntennaLayout::AntennaLayout(Eigen::Matrix3Xd local_positions)
    : local_(std::move(local_positions)) {
  if (local_.cols() < 1) throw std::invalid_argument("AntennaLayout: need at least one element");
}

AntennaLayout AntennaLayout::planar(int rows, int cols, double spacing) {
  if (rows < 1 || cols < 1) throw std::invalid_argument("AntennaLayout::planar: empty array");
  if (!(spacing > 0)) throw std::invalid_argument("AntennaLayout::planar: spacing must be positive");
  Eigen::Matrix3Xd p(3, rows * cols);
  const double y0 = 0.5 * (cols - 1) * spacing;
  const double z0 = 0.5 * (rows - 1) * spacing;
  int n = 0;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c, ++n) {
      p.col(n) << 0.0, c * spacing - y0, r * spacing - z0;
    }
  }
  return AntennaLayout(std::move(p));
}

AntennaLayout AntennaLayout::upa(int n, double spacing) {
  if (n < 1) throw std::invalid_argument("AntennaLayout::upa: N must be >= 1");
  int rows = 1;
  for (int d = 1; d * d <= n; ++d) {
    if (n % d == 0) rows = d;
  }
  return planar(rows, n / rows, spacing);
}

AntennaLayout AntennaLayout::vertical_line(int n, double spacing) {
  return planar(n, 1, spacing);
}

Eigen::Matrix3Xd antenna_positions(const Position3& q, const RotationMatrix& r,
                                   const AntennaLayout& layout) {
  Eigen::Matrix3Xd out = r * layout.local_positions();
  out.colwise() += q;
  return out;
}

Eigen::Matrix3Xd antenna_positions(const Position3& q, const RotationAngles& u,
                                   const AntennaLayout& layout) {
  return antenna_positions(q, rotation_matrix(u), layout);
}

SurfacePose SurfacePose::from_angles(const Position3& q, const RotationAngles& u) {
  return SurfacePose{q, u, rotation_matrix(u)};
}

SurfacePose SurfacePose::from_matrix(const Position3& q, const RotationMatrix& r) {
  const auto u = euler_angles(r).angles;
  return SurfacePose{q, u, rotation_matrix(u)};
}

bool is_rotation(const RotationMatrix& r, double tol) {
  const double ortho = (r.transpose() * r - RotationMatrix::Identity()).cwiseAbs().maxCoeff();
  return ortho <= tol && std::abs(r.determinant() - 1.0) <= tol;
}

}  // namespace sixdma
