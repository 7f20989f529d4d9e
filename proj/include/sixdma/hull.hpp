#pragma once

#include "sixdma/geometry.hpp"

#include <array>
#include <vector>

namespace sixdma {

/// Triangle of point indices, counter-clockwise seen from outside.
using HullFacet = std::array<int, 3>;

/// Incremental 3D convex hull. Needs at least four non-coplanar points;
/// throws std::invalid_argument otherwise. Interior points are ignored.
std::vector<HullFacet> convex_hull(const std::vector<Position3>& points);

/// Outward unit normal and area of a facet.
Eigen::Vector3d facet_normal(const std::vector<Position3>& points, const HullFacet& f);
double facet_area(const std::vector<Position3>& points, const HullFacet& f);

}  // namespace sixdma
