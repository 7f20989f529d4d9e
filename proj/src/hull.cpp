#include "sixdma/hull.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <utility>

namespace sixdma {

namespace {

struct Face {
  HullFacet v;
  Eigen::Vector3d normal;
  double offset;  // normal . x = offset on the plane
};

Face make_face(const std::vector<Position3>& p, int a, int b, int c) {
  Face f{{a, b, c}, (p[b] - p[a]).cross(p[c] - p[a]), 0.0};
  const double len = f.normal.norm();
  if (len > 0) f.normal /= len;
  f.offset = f.normal.dot(p[a]);
  return f;
}

}  // namespace

std::vector<HullFacet> convex_hull(const std::vector<Position3>& points) {
  const int n = static_cast<int>(points.size());
  if (n < 4) throw std::invalid_argument("convex_hull: need at least 4 points");

  double scale = 0;
  for (const auto& q : points) scale = std::max(scale, q.cwiseAbs().maxCoeff());
  const double eps = 1e-12 * std::max(scale, 1.0);

  // Initial tetrahedron: two far-apart points, then the farthest from their
  // line, then the farthest from that plane.
  int i0 = 0, i1 = -1, i2 = -1, i3 = -1;
  double best = eps;
  for (int i = 1; i < n; ++i) {
    const double d = (points[i] - points[i0]).norm();
    if (d > best) best = d, i1 = i;
  }
  if (i1 < 0) throw std::invalid_argument("convex_hull: points coincide");
  const Eigen::Vector3d dir = (points[i1] - points[i0]).normalized();
  best = eps;
  for (int i = 0; i < n; ++i) {
    const Eigen::Vector3d w = points[i] - points[i0];
    const double d = (w - w.dot(dir) * dir).norm();
    if (d > best) best = d, i2 = i;
  }
  if (i2 < 0) throw std::invalid_argument("convex_hull: points are collinear");
  const Eigen::Vector3d plane_n = (points[i1] - points[i0]).cross(points[i2] - points[i0]).normalized();
  best = eps;
  for (int i = 0; i < n; ++i) {
    const double d = std::abs(plane_n.dot(points[i] - points[i0]));
    if (d > best) best = d, i3 = i;
  }
  if (i3 < 0) throw std::invalid_argument("convex_hull: points are coplanar");

  const Eigen::Vector3d interior = 0.25 * (points[i0] + points[i1] + points[i2] + points[i3]);
  std::vector<Face> faces;
  auto add_oriented = [&](int a, int b, int c) {
    Face f = make_face(points, a, b, c);
    if (f.normal.dot(interior) - f.offset > 0) f = make_face(points, a, c, b);
    faces.push_back(f);
  };
  add_oriented(i0, i1, i2);
  add_oriented(i0, i1, i3);
  add_oriented(i0, i2, i3);
  add_oriented(i1, i2, i3);

  for (int p = 0; p < n; ++p) {
    if (p == i0 || p == i1 || p == i2 || p == i3) continue;
    std::vector<char> visible(faces.size(), 0);
    bool any = false;
    for (std::size_t k = 0; k < faces.size(); ++k) {
      if (faces[k].normal.dot(points[p]) - faces[k].offset > eps) visible[k] = 1, any = true;
    }
    if (!any) continue;

    // Horizon: directed edges of visible faces whose twin is not visible.
    std::map<std::pair<int, int>, int> edges;
    for (std::size_t k = 0; k < faces.size(); ++k) {
      if (!visible[k]) continue;
      const auto& v = faces[k].v;
      for (int e = 0; e < 3; ++e) edges[{v[e], v[(e + 1) % 3]}] += 1;
    }
    std::vector<Face> next;
    next.reserve(faces.size() + 4);
    for (std::size_t k = 0; k < faces.size(); ++k) {
      if (!visible[k]) next.push_back(faces[k]);
    }
    for (const auto& [edge, count] : edges) {
      (void)count;
      if (edges.count({edge.second, edge.first})) continue;
      next.push_back(make_face(points, edge.first, edge.second, p));
    }
    faces = std::move(next);
  }

  std::vector<HullFacet> out;
  out.reserve(faces.size());
  for (const auto& f : faces) out.push_back(f.v);
  return out;
}

Eigen::Vector3d facet_normal(const std::vector<Position3>& points, const HullFacet& f) {
  return (points[f[1]] - points[f[0]]).cross(points[f[2]] - points[f[0]]).normalized();
}

double facet_area(const std::vector<Position3>& points, const HullFacet& f) {
  return 0.5 * (points[f[1]] - points[f[0]]).cross(points[f[2]] - points[f[0]]).norm();
}

}  // namespace sixdma
