#include "sixdma/scenario.hpp"

#include "sixdma/random.hpp"

#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <stdexcept>

namespace sixdma {

Hotspot Hotspot::at(double distance, double azimuth_deg, double elevation_deg, double radius,
                    double weight) {
  const double deg = std::numbers::pi / 180.0;
  return {distance * pointing_vector(elevation_deg * deg, std::remainder(azimuth_deg, 360.0) * deg),
          radius, weight};
}

ScenarioConfig ScenarioConfig::defaults() {
  ScenarioConfig cfg;
  cfg.hotspots = {Hotspot::at(40, 30, -10, 5, 1), Hotspot::at(60, 150, -15, 10, 2),
                  Hotspot::at(100, 270, -20, 15, 3)};
  return cfg;
}

void ScenarioConfig::validate() const {
  if (!(mean_users >= 0)) throw std::invalid_argument("scenario: mean user count must be >= 0");
  if (!(inner_radius >= 0 && outer_radius > inner_radius)) {
    throw std::invalid_argument("scenario: need 0 <= inner radius < outer radius");
  }
  if (!(regular_fraction >= 0 && regular_fraction <= 1)) {
    throw std::invalid_argument("scenario: xi must lie in [0, 1]");
  }
  if (hotspots.empty() && regular_fraction < 1) {
    throw std::invalid_argument("scenario: xi < 1 needs at least one hotspot");
  }
  for (std::size_t v = 0; v < hotspots.size(); ++v) {
    const auto& h = hotspots[v];
    if (!(h.radius > 0) || !(h.weight > 0)) {
      throw std::invalid_argument("scenario: hotspot radius and weight must be positive");
    }
    const double d = h.center.norm();
    if (d - h.radius < inner_radius || d + h.radius > outer_radius) {
      throw std::invalid_argument("scenario: hotspot " + std::to_string(v + 1) +
                                  " leaves the annulus");
    }
    for (std::size_t w = v + 1; w < hotspots.size(); ++w) {
      if ((h.center - hotspots[w].center).norm() < h.radius + hotspots[w].radius) {
        throw std::invalid_argument("scenario: hotspots " + std::to_string(v + 1) + " and " +
                                    std::to_string(w + 1) + " overlap");
      }
    }
  }
}

double sphere_volume(double radius) { return 4.0 / 3.0 * std::numbers::pi * radius * radius * radius; }

double annulus_volume(const ScenarioConfig& cfg) {
  return sphere_volume(cfg.outer_radius) - sphere_volume(cfg.inner_radius);
}

Densities densities(const ScenarioConfig& cfg) {
  Densities d;
  d.background = cfg.regular_fraction * cfg.mean_users / annulus_volume(cfg);
  double total_weight = 0;
  for (const auto& h : cfg.hotspots) total_weight += h.weight;
  for (const auto& h : cfg.hotspots) {
    const double count = (1.0 - cfg.regular_fraction) * cfg.mean_users * h.weight / total_weight;
    d.hotspot.push_back(count / sphere_volume(h.radius));
  }
  return d;
}

double density(const Position3& point, const ScenarioConfig& cfg) {
  const double r = point.norm();
  if (r < cfg.inner_radius || r > cfg.outer_radius) {
    throw std::domain_error("density: point outside the coverage annulus");
  }
  const Densities d = densities(cfg);
  double rho = d.background;
  for (std::size_t v = 0; v < cfg.hotspots.size(); ++v) {
    if ((point - cfg.hotspots[v].center).norm() <= cfg.hotspots[v].radius) rho += d.hotspot[v];
  }
  return rho;
}

namespace {

Eigen::Vector3d uniform_direction(Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double z = 2.0 * unit(rng) - 1.0;
  const double azimuth = 2.0 * std::numbers::pi * unit(rng);
  const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
  return {rho * std::cos(azimuth), rho * std::sin(azimuth), z};
}

// Uniform in volume between two radii.
double shell_radius(double inner, double outer, Rng& rng) {
  std::uniform_real_distribution<double> cube(inner * inner * inner, outer * outer * outer);
  return std::cbrt(cube(rng));
}

}  // namespace

UserRealization sample_realization(const ScenarioConfig& cfg, std::uint64_t seed) {
  Rng rng(seed);
  UserRealization out;
  out.seed = seed;
  const int users = cfg.mean_users > 0 ? std::poisson_distribution<int>(cfg.mean_users)(rng) : 0;

  std::vector<double> weights;
  weights.push_back(cfg.regular_fraction);
  double total_weight = 0;
  for (const auto& h : cfg.hotspots) total_weight += h.weight;
  for (const auto& h : cfg.hotspots) {
    weights.push_back((1.0 - cfg.regular_fraction) * h.weight / total_weight);
  }
  std::discrete_distribution<int> pick(weights.begin(), weights.end());

  out.users.reserve(users);
  out.component.reserve(users);
  for (int k = 0; k < users; ++k) {
    const int c = pick(rng);
    Position3 p;
    if (c == 0) {
      p = shell_radius(cfg.inner_radius, cfg.outer_radius, rng) * uniform_direction(rng);
    } else {
      const auto& h = cfg.hotspots[c - 1];
      p = h.center + shell_radius(0.0, h.radius, rng) * uniform_direction(rng);
    }
    out.users.push_back(p);
    out.component.push_back(c);
  }
  return out;
}

void write_realization_csv(std::ostream& out, const UserRealization& realization) {
  out << "user,x,y,z\n" << std::fixed << std::setprecision(6);
  for (int k = 0; k < realization.size(); ++k) {
    const auto& p = realization.users[k];
    out << k + 1 << ',' << p.x() << ',' << p.y() << ',' << p.z() << '\n';
  }
}

}  // namespace sixdma
