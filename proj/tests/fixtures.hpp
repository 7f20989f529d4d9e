#pragma once

#include "sixdma/codebook.hpp"

#include <numbers>

namespace sixdma::testing {

// Four positions on the x axis, each facing +x (l = 0) or -x (l = 1).
// Every constraint class rules out some selections.
inline PoseCodebook line_codebook(double wavelength = 0.125) {
  std::vector<Position3> q{{-0.3, 0, 0}, {0.1, 0, 0}, {0.4, 0, 0}, {0.5, 0, 0}};
  const std::vector<RotationAngles> faces{{0, 0, 0}, {0, 0, std::numbers::pi}};
  return PoseCodebook(q, std::vector<std::vector<RotationAngles>>(4, faces), SiteSpace{},
                      default_min_distance(wavelength), wavelength);
}

}  // namespace sixdma::testing
