#include "sixdma/codebook.hpp"

#include "sixdma/hull.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <numbers>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace sixdma {

PoseCodebook::PoseCodebook(std::vector<Position3> positions,
                           std::vector<std::vector<RotationAngles>> rotations, SiteSpace site,
                           double min_distance, double wavelength)
    : positions_(std::move(positions)), site_(site), min_distance_(min_distance),
      wavelength_(wavelength) {
  if (positions_.empty()) throw std::invalid_argument("PoseCodebook: no positions");
  if (rotations.size() != positions_.size()) {
    throw std::invalid_argument("PoseCodebook: need one rotation list per position");
  }
  rotations_per_position_ = static_cast<int>(rotations.front().size());
  if (rotations_per_position_ < 1) throw std::invalid_argument("PoseCodebook: L must be >= 1");
  candidates_.reserve(positions_.size() * rotations_per_position_);
  for (std::size_t m = 0; m < positions_.size(); ++m) {
    if (static_cast<int>(rotations[m].size()) != rotations_per_position_) {
      throw std::invalid_argument("PoseCodebook: L differs between positions");
    }
    for (int l = 0; l < rotations_per_position_; ++l) {
      candidates_.push_back({static_cast<int>(m), l,
                             SurfacePose::from_angles(positions_[m], normalized(rotations[m][l]))});
    }
  }
}

std::vector<Position3> fibonacci_positions(int count, double radius) {
  if (count < 2) throw std::invalid_argument("fibonacci_positions: need M >= 2");
  if (!(radius > 0)) throw std::invalid_argument("fibonacci_positions: radius must be positive");
  const double golden = std::numbers::phi;
  std::vector<Position3> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    const double z = (1.0 - 2.0 * (i + 0.5) / count) * radius;
    const double azimuth = 2.0 * std::numbers::pi * i / golden;
    const double rho = std::sqrt(std::max(radius * radius - z * z, 0.0));
    out.emplace_back(rho * std::cos(azimuth), rho * std::sin(azimuth), z);
  }
  return out;
}

namespace {

RotationMatrix radial_frame(const Position3& q) {
  const double r = q.norm();
  const double polar = std::acos(std::clamp(q.z() / r, -1.0, 1.0));
  const double azimuth = std::atan2(q.y(), q.x());
  const double sp = std::sin(polar), cp = std::cos(polar);
  const double sa = std::sin(azimuth), ca = std::cos(azimuth);
  const Eigen::Vector3d a_r(sp * ca, sp * sa, cp);
  const Eigen::Vector3d a_azimuth(-sa, ca, 0.0);
  const Eigen::Vector3d a_polar(cp * ca, cp * sa, -sp);
  RotationMatrix frame;
  // [a_r, a_azimuth, a_polar] is left-handed; flipping the last axis keeps
  // x' radial with det = +1.
  frame << a_r, a_azimuth, -a_polar;
  return frame;
}

struct FacetFrame {
  RotationMatrix frame;
  double area;
};

}  // namespace

HullRotations hull_rotations(const std::vector<Position3>& positions, int facets_per_position) {
  const int count = static_cast<int>(positions.size());
  const auto facets = convex_hull(positions);

  double scale = 0;
  for (const auto& q : positions) scale = std::max(scale, q.norm());
  const double eps = 1e-12 * std::max(scale * scale, 1e-30);

  HullRotations out;
  std::vector<std::vector<FacetFrame>> incident(count);
  for (const auto& f : facets) {
    for (int k = 0; k < 3; ++k) {
      const int m = f[k];
      int prev = f[(k + 2) % 3];
      int next = f[(k + 1) % 3];
      Eigen::Vector3d n = (positions[m] - positions[prev]).cross(positions[next] - positions[m]);
      if (n.norm() <= eps) {
        ++out.skipped_facets;
        continue;
      }
      if (n.dot(positions[m]) < 0) {
        std::swap(prev, next);
        n = -n;
      }
      n.normalize();
      const Eigen::Vector3d y = (positions[next] - positions[prev]).normalized();
      RotationMatrix frame;
      frame << n, y, n.cross(y);
      incident[m].push_back({frame, facet_area(positions, f)});
    }
  }

  int keep = facets_per_position;
  if (keep < 0) {
    keep = std::numeric_limits<int>::max();
    for (const auto& list : incident) keep = std::min(keep, static_cast<int>(list.size()));
  }

  out.rotations.resize(count);
  for (int m = 0; m < count; ++m) {
    auto& list = incident[m];
    std::stable_sort(list.begin(), list.end(),
                     [](const FacetFrame& a, const FacetFrame& b) { return a.area > b.area; });
    const RotationMatrix radial = radial_frame(positions[m]);
    auto& rot = out.rotations[m];
    rot.push_back(radial);
    for (int k = 0; k < keep; ++k) {
      rot.push_back(k < static_cast<int>(list.size()) ? list[k].frame : radial);
    }
  }
  return out;
}

PoseCodebook sphere_codebook(int positions, double radius, int facets_per_position,
                             double min_distance, double wavelength) {
  auto points = fibonacci_positions(positions, radius);
  const auto hull = hull_rotations(points, facets_per_position);
  std::vector<std::vector<RotationAngles>> angles(points.size());
  for (std::size_t m = 0; m < points.size(); ++m) {
    for (const auto& r : hull.rotations[m]) angles[m].push_back(euler_angles(r).angles);
  }
  return PoseCodebook(std::move(points), std::move(angles), {SiteKind::Sphere, radius},
                      min_distance, wavelength);
}

PoseCodebook grid_codebook(double cube_side, int positions, const GridRotations& rotations,
                           double min_distance, double wavelength) {
  if (positions < 1) throw std::invalid_argument("grid_codebook: M must be >= 1");
  if (rotations.alpha < 1 || rotations.beta < 1 || rotations.gamma < 1) {
    throw std::invalid_argument("grid_codebook: angle counts must be >= 1");
  }
  if (!(cube_side > 0)) throw std::invalid_argument("grid_codebook: cube side must be positive");
  int n = 1;
  while (n * n * n < positions) ++n;
  const double spacing = cube_side / n;
  if (positions > 1 && spacing < min_distance) {
    std::ostringstream msg;
    msg << "grid_codebook: cube side " << cube_side << " m cannot hold " << positions
        << " positions at d_min = " << min_distance << " m (lattice spacing " << spacing << " m)";
    throw std::invalid_argument(msg.str());
  }

  std::vector<Position3> lattice;
  lattice.reserve(n * n * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        lattice.emplace_back(spacing * (i + 0.5) - cube_side / 2, spacing * (j + 0.5) - cube_side / 2,
                             spacing * (k + 0.5) - cube_side / 2);
      }
    }
  }
  std::vector<int> order(lattice.size());
  std::iota(order.begin(), order.end(), 0);
  // Radii of lattice points are compared on the integer grid to keep ties exact.
  auto grid_radius2 = [n](int idx) {
    const int i = idx / (n * n), j = (idx / n) % n, k = idx % n;
    auto c = [n](int a) { return (2 * a + 1 - n) * (2 * a + 1 - n); };
    return c(i) + c(j) + c(k);
  };
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return grid_radius2(a) > grid_radius2(b); });

  std::vector<Position3> chosen;
  chosen.reserve(positions);
  for (int i = 0; i < positions; ++i) chosen.push_back(lattice[order[i]]);

  std::vector<RotationAngles> angles;
  const double two_pi = 2.0 * std::numbers::pi;
  for (int a = 0; a < rotations.alpha; ++a) {
    for (int b = 0; b < rotations.beta; ++b) {
      for (int g = 0; g < rotations.gamma; ++g) {
        angles.push_back({two_pi * a / rotations.alpha, two_pi * b / rotations.beta,
                          two_pi * g / rotations.gamma});
      }
    }
  }
  std::vector<std::vector<RotationAngles>> per_position(chosen.size(), angles);
  return PoseCodebook(std::move(chosen), std::move(per_position), {SiteKind::Cube, cube_side},
                      min_distance, wavelength);
}

PoseCodebook grid_codebook(double cube_side, int positions, int angles_per_axis,
                           double min_distance, double wavelength) {
  return grid_codebook(cube_side, positions, GridRotations::cube(angles_per_axis), min_distance,
                       wavelength);
}

ValidationReport validate(const PoseCodebook& codebook, double tolerance) {
  ValidationReport report;
  const int M = codebook.num_positions();
  const int L = codebook.num_rotations();
  report.smallest_distance = std::numeric_limits<double>::infinity();
  for (int m = 0; m < M; ++m) {
    for (int m2 = m + 1; m2 < M; ++m2) {
      const double d = (codebook.position(m) - codebook.position(m2)).norm();
      report.smallest_distance = std::min(report.smallest_distance, d);
      if (d < codebook.min_distance() - tolerance) {
        report.violations.push_back({CodebookViolation::Kind::MinDistance, m, -1, m2, d});
        ++report.min_distance;
      }
    }
  }
  for (int m = 0; m < M; ++m) {
    const Position3& q = codebook.position(m);
    for (int l = 0; l < L; ++l) {
      const Eigen::Vector3d n = codebook.pose(m, l).normal();
      const double blockage = n.dot(q);
      if (blockage < -tolerance) {
        report.violations.push_back({CodebookViolation::Kind::Blockage, m, l, -1, blockage});
        ++report.blockage;
      }
      for (int m2 = 0; m2 < M; ++m2) {
        if (m2 == m) continue;
        const double reflection = n.dot(codebook.position(m2) - q);
        if (reflection > tolerance) {
          report.violations.push_back({CodebookViolation::Kind::Reflection, m, l, m2, reflection});
          ++report.reflection;
        }
      }
    }
  }
  return report;
}

std::string to_string(CodebookViolation::Kind kind) {
  switch (kind) {
    case CodebookViolation::Kind::Reflection: return "reflection";
    case CodebookViolation::Kind::Blockage: return "blockage";
    case CodebookViolation::Kind::MinDistance: return "min_distance";
  }
  return "unknown";
}

void write_codebook(std::ostream& out, const PoseCodebook& codebook) {
  out << "# sixdma pose codebook v1\n";
  out << std::fixed << std::setprecision(9);
  out << "positions " << codebook.num_positions() << '\n';
  out << "rotations " << codebook.num_rotations() << '\n';
  out << "wavelength " << codebook.wavelength() << '\n';
  out << "d_min " << codebook.min_distance() << '\n';
  out << "site " << (codebook.site().kind == SiteKind::Cube ? "cube" : "sphere") << ' '
      << codebook.site().size << '\n';
  out << "# m l qx qy qz alpha beta gamma\n";
  for (const auto& c : codebook.candidates()) {
    const auto& p = c.pose.position;
    const auto& u = c.pose.angles;
    out << c.position_index + 1 << ' ' << c.rotation_index + 1 << ' ' << p.x() << ' ' << p.y()
        << ' ' << p.z() << ' ' << u.alpha << ' ' << u.beta << ' ' << u.gamma << '\n';
  }
}

PoseCodebook read_codebook(std::istream& in) {
  int M = -1, L = -1;
  double wavelength = -1, d_min = -1;
  SiteSpace site;
  bool have_site = false;
  std::vector<Position3> positions;
  std::vector<std::vector<RotationAngles>> rotations;
  std::string line;
  int line_no = 0;
  auto fail = [&](const std::string& what) {
    throw std::runtime_error("codebook line " + std::to_string(line_no) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream row(line);
    if (std::isdigit(static_cast<unsigned char>(line[0]))) {
      if (M < 1 || L < 1) fail("candidate row before positions/rotations header");
      if (positions.empty()) {
        positions.assign(M, Position3::Constant(std::numeric_limits<double>::quiet_NaN()));
        rotations.assign(M, std::vector<RotationAngles>(L));
      }
      int m = 0, l = 0;
      Position3 q;
      RotationAngles u;
      if (!(row >> m >> l >> q.x() >> q.y() >> q.z() >> u.alpha >> u.beta >> u.gamma)) {
        fail("expected 8 columns");
      }
      if (m < 1 || m > M || l < 1 || l > L) fail("index out of range");
      positions[m - 1] = q;
      rotations[m - 1][l - 1] = u;
      continue;
    }
    std::string key;
    row >> key;
    if (key == "positions") {
      row >> M;
    } else if (key == "rotations") {
      row >> L;
    } else if (key == "wavelength") {
      row >> wavelength;
    } else if (key == "d_min") {
      row >> d_min;
    } else if (key == "site") {
      std::string kind;
      row >> kind >> site.size;
      if (kind == "cube") {
        site.kind = SiteKind::Cube;
      } else if (kind == "sphere") {
        site.kind = SiteKind::Sphere;
      } else {
        fail("unknown site kind '" + kind + "'");
      }
      have_site = true;
    } else {
      fail("unknown header key '" + key + "'");
    }
    if (row.fail()) fail("malformed value for '" + key + "'");
  }
  if (M < 1 || L < 1 || wavelength <= 0 || d_min < 0 || !have_site) {
    throw std::runtime_error("codebook: incomplete header");
  }
  if (positions.empty()) throw std::runtime_error("codebook: no candidate rows");
  for (const auto& q : positions) {
    if (!q.allFinite()) throw std::runtime_error("codebook: missing candidate rows");
  }
  return PoseCodebook(std::move(positions), std::move(rotations), site, d_min, wavelength);
}

}  // namespace sixdma
