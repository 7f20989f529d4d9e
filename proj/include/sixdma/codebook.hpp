#pragma once

#include "sixdma/geometry.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace sixdma {

/// Minimum centre distance for a square UPA of side `diagonal / sqrt(2)`:
/// the array diagonal plus half a wavelength.
inline double default_min_distance(double wavelength) {
  return std::sqrt(2.0) / 2.0 * wavelength + wavelength / 2.0;
}

enum class SiteKind { Cube, Sphere };

/// The BS site space C: a cube centred on the CPU or the sphere used by the
/// online codebook.
struct SiteSpace {
  SiteKind kind{SiteKind::Cube};
  double size{1.0};  ///< cube side or sphere radius, metres
};

/// Candidate (m, l): position m with its l-th rotation. Indices are 0-based.
struct PoseCandidate {
  int position_index{0};
  int rotation_index{0};
  SurfacePose pose;
};

/// M discrete positions times L rotations per position, stored m-major so
/// candidate (m, l) has flat index m * L + l.
class PoseCodebook {
 public:
  PoseCodebook(std::vector<Position3> positions,
               std::vector<std::vector<RotationAngles>> rotations,
               SiteSpace site, double min_distance, double wavelength);

  [[nodiscard]] int num_positions() const { return static_cast<int>(positions_.size()); }
  [[nodiscard]] int num_rotations() const { return rotations_per_position_; }
  [[nodiscard]] int size() const { return num_positions() * num_rotations(); }

  [[nodiscard]] const Position3& position(int m) const { return positions_.at(m); }
  [[nodiscard]] const std::vector<Position3>& positions() const { return positions_; }
  [[nodiscard]] const PoseCandidate& candidate(int m, int l) const {
    return candidates_.at(static_cast<std::size_t>(m) * rotations_per_position_ + l);
  }
  [[nodiscard]] const SurfacePose& pose(int m, int l) const { return candidate(m, l).pose; }
  [[nodiscard]] const std::vector<PoseCandidate>& candidates() const { return candidates_; }

  [[nodiscard]] const SiteSpace& site() const { return site_; }
  [[nodiscard]] double min_distance() const { return min_distance_; }
  [[nodiscard]] double wavelength() const { return wavelength_; }

 private:
  std::vector<Position3> positions_;
  int rotations_per_position_{0};
  std::vector<PoseCandidate> candidates_;
  SiteSpace site_;
  double min_distance_{0};
  double wavelength_{0};
};

/// Fibonacci lattice on a sphere centred at the origin. Point i has
/// z = (1 - 2(i + 1/2)/M) * radius and azimuth 2*pi*i/golden_ratio.
std::vector<Position3> fibonacci_positions(int count, double radius);

struct HullRotations {
  /// rotations[m] holds L matrices; entry 0 is the radial frame.
  std::vector<std::vector<RotationMatrix>> rotations;
  int skipped_facets{0};  ///< degenerate (collinear) facets ignored
};

/// Rotations for points on a convex surface: the radial frame plus one
/// frame per incident hull facet, x' along the outward facet normal.
/// Every position gets 1 + facets_per_position rotations: facets beyond that
/// count are dropped smallest-area first, missing ones are filled with the
/// radial frame. facets_per_position < 0 uses the smallest incident count.
HullRotations hull_rotations(const std::vector<Position3>& positions, int facets_per_position = -1);

/// Online codebook: Fibonacci positions on the sphere of `radius` with hull
/// rotations (L = 1 + facets_per_position).
PoseCodebook sphere_codebook(int positions, double radius, int facets_per_position,
                             double min_distance, double wavelength);

/// Per-axis rotation counts for the grid codebook. Each angle is sampled
/// uniformly from {0, 2pi/Z, ..., 2pi(Z-1)/Z}; L = alpha * beta * gamma.
struct GridRotations {
  int alpha{1};
  int beta{1};
  int gamma{1};

  static GridRotations cube(int z) { return {z, z, z}; }
  [[nodiscard]] int count() const { return alpha * beta * gamma; }
};

/// Offline codebook: uniform lattice inside the cube (the smallest n^3 >= M
/// lattice, cell-centred, truncated to the M points farthest from the
/// centre, ties by lattice order) with a product grid of rotation angles.
/// Throws std::invalid_argument when the lattice spacing is below d_min.
PoseCodebook grid_codebook(double cube_side, int positions, const GridRotations& rotations,
                           double min_distance, double wavelength);
PoseCodebook grid_codebook(double cube_side, int positions, int angles_per_axis,
                           double min_distance, double wavelength);

struct CodebookViolation {
  enum class Kind { Reflection, Blockage, MinDistance };
  Kind kind;
  int m;
  int l;      ///< -1 for min-distance entries
  int other;  ///< other position index, -1 for blockage entries
  double value;
};

struct ValidationReport {
  std::vector<CodebookViolation> violations;
  int reflection{0};
  int blockage{0};
  int min_distance{0};
  double smallest_distance{0};

  [[nodiscard]] bool ok() const { return violations.empty(); }
};

/// Checks every candidate pair at distinct positions against the
/// reflection rule n(u_l^(m))^T (q_m' - q_m) <= 0, every candidate against
/// blockage n(u_l^(m))^T q_m >= 0, and every position pair against d_min.
/// A reflection violation does not depend on the rotation chosen at m', so
/// it is reported once per (m, l, m').
ValidationReport validate(const PoseCodebook& codebook, double tolerance = 1e-7);

std::string to_string(CodebookViolation::Kind kind);

/// Text format: `key value` header lines, then one row per candidate
/// `m l qx qy qz alpha beta gamma` with 1-based indices and 9 decimals.
void write_codebook(std::ostream& out, const PoseCodebook& codebook);
PoseCodebook read_codebook(std::istream& in);

}  // namespace sixdma
