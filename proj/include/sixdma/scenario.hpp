#pragma once

#include "sixdma/geometry.hpp"

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace sixdma {

/// Spherical hotspot. `weight` sets its share of the hotspot users.
struct Hotspot {
  Position3 center{Position3::Zero()};
  double radius{0};
  double weight{1};

  static Hotspot at(double distance, double azimuth_deg, double elevation_deg, double radius,
                    double weight);
};

/// Non-homogeneous Poisson user model on a spherical annulus around the CPU.
/// Background density rho_0 covers the whole annulus; hotspot v adds rho_v
/// inside its sphere.
struct ScenarioConfig {
  double mean_users{40};
  double inner_radius{30};
  double outer_radius{200};
  std::vector<Hotspot> hotspots;
  double regular_fraction{0.2};  ///< xi: background share of the mean count

  /// 30-200 m annulus, hotspots 40/60/100 m out with radii 5/10/15 m and
  /// weights 1:2:3, xi = 0.2, mu = 40. Directions are fixed at azimuths
  /// 30/150/270 deg and elevations -10/-15/-20 deg (below the BS).
  static ScenarioConfig defaults();

  /// Throws std::invalid_argument on overlapping hotspots, hotspots leaving
  /// the annulus, or out-of-range parameters.
  void validate() const;
};

struct Densities {
  double background{0};         ///< rho_0, users / m^3
  std::vector<double> hotspot;  ///< rho_v, users / m^3
};

double annulus_volume(const ScenarioConfig& cfg);
double sphere_volume(double radius);

/// rho_0 = xi mu / |annulus| and rho_v |L_v| = (1 - xi) mu w_v / sum(w).
Densities densities(const ScenarioConfig& cfg);

/// rho(point). Throws std::domain_error outside the annulus.
double density(const Position3& point, const ScenarioConfig& cfg);

struct UserRealization {
  std::vector<Position3> users;
  /// Generating component per user: 0 background, v >= 1 hotspot v.
  std::vector<int> component;
  std::uint64_t seed{0};

  [[nodiscard]] int size() const { return static_cast<int>(users.size()); }
};

/// K ~ Poisson(mu); each user picks background or a hotspot with
/// probability proportional to that component's mean count, then lands
/// uniformly inside it. Deterministic in `seed`.
UserRealization sample_realization(const ScenarioConfig& cfg, std::uint64_t seed);

/// `user,x,y,z` rows, 1-based user ids.
void write_realization_csv(std::ostream& out, const UserRealization& realization);

}  // namespace sixdma
