#include "sixdma/scenario.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace sixdma;

TEST_SUITE("scenario") {

TEST_CASE("default scenario") {
  const auto cfg = ScenarioConfig::defaults();
  CHECK_NOTHROW(cfg.validate());
  CHECK(cfg.mean_users == 40);
  CHECK(cfg.regular_fraction == 0.2);
  REQUIRE(cfg.hotspots.size() == 3);
  const double distance[] = {40, 60, 100}, radius[] = {5, 10, 15};
  for (int v = 0; v < 3; ++v) {
    CHECK(cfg.hotspots[v].center.norm() == doctest::Approx(distance[v]));
    CHECK(cfg.hotspots[v].radius == radius[v]);
    CHECK(cfg.hotspots[v].weight == v + 1);
    CHECK(cfg.hotspots[v].center.z() < 0);
  }
  // Centres at least 60 degrees apart in azimuth.
  for (int v = 0; v < 3; ++v) {
    for (int w = v + 1; w < 3; ++w) {
      const Eigen::Vector2d a = cfg.hotspots[v].center.head<2>().normalized();
      const Eigen::Vector2d b = cfg.hotspots[w].center.head<2>().normalized();
      CHECK(std::acos(a.dot(b)) >= M_PI / 3 - 1e-12);
    }
  }
}

TEST_CASE("density is piecewise constant and integrates to mu") {
  const auto cfg = ScenarioConfig::defaults();
  const auto d = densities(cfg);
  CHECK(density(Position3(0, 0, 150), cfg) == doctest::Approx(d.background));
  CHECK(density(cfg.hotspots[1].center, cfg) == doctest::Approx(d.background + d.hotspot[1]));

  double integral = d.background * annulus_volume(cfg);
  for (int v = 0; v < 3; ++v) integral += d.hotspot[v] * sphere_volume(cfg.hotspots[v].radius);
  CHECK(integral == doctest::Approx(cfg.mean_users).epsilon(1e-12));
  CHECK(d.hotspot[2] * sphere_volume(15) == doctest::Approx(3 * d.hotspot[0] * sphere_volume(5)));

  auto all_regular = cfg;
  all_regular.regular_fraction = 1.0;
  for (double h : densities(all_regular).hotspot) CHECK(h == 0.0);
  CHECK(density(all_regular.hotspots[0].center, all_regular) ==
        doctest::Approx(density(Position3(0, 0, -150), all_regular)));

  CHECK_THROWS_AS(density(Position3(1, 0, 0), cfg), std::domain_error);
  CHECK_THROWS_AS(density(Position3(0, 300, 0), cfg), std::domain_error);
}

TEST_CASE("validate rejects bad layouts") {
  auto cfg = ScenarioConfig::defaults();
  cfg.hotspots.push_back(Hotspot::at(40, 32, -10, 5, 1));
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = ScenarioConfig::defaults();
  cfg.hotspots[0] = Hotspot::at(32, 30, 0, 5, 1);
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = ScenarioConfig::defaults();
  cfg.regular_fraction = 1.5;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = ScenarioConfig::defaults();
  cfg.hotspots.clear();
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.regular_fraction = 1.0;
  CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("sampling is deterministic and inside the region") {
  const auto cfg = ScenarioConfig::defaults();
  const auto a = sample_realization(cfg, 42);
  const auto b = sample_realization(cfg, 42);
  REQUIRE(a.size() == b.size());
  for (int k = 0; k < a.size(); ++k) CHECK(a.users[k] == b.users[k]);
  CHECK(a.seed == 42);
  for (int s = 0; s < 50; ++s) {
    const auto r = sample_realization(cfg, s);
    for (int k = 0; k < r.size(); ++k) {
      CHECK(r.users[k].norm() >= cfg.inner_radius);
      CHECK(r.users[k].norm() <= cfg.outer_radius);
      const int c = r.component[k];
      if (c > 0) CHECK((r.users[k] - cfg.hotspots[c - 1].center).norm() <= cfg.hotspots[c - 1].radius);
    }
  }
  std::ostringstream csv;
  write_realization_csv(csv, a);
  CHECK(csv.str().rfind("user,x,y,z\n1,", 0) == 0);
}

TEST_CASE("xi = 0 puts everyone in a hotspot") {
  auto cfg = ScenarioConfig::defaults();
  cfg.regular_fraction = 0.0;
  for (int s = 0; s < 200; ++s) {
    const auto r = sample_realization(cfg, s);
    for (int k = 0; k < r.size(); ++k) {
      bool inside = false;
      for (const auto& h : cfg.hotspots) inside = inside || (r.users[k] - h.center).norm() <= h.radius;
      CHECK(inside);
    }
  }
}

TEST_CASE("Poisson count and location statistics") {
  const auto cfg = ScenarioConfig::defaults();
  const auto d = densities(cfg);
  constexpr int n = 20000;
  long long total = 0;
  int zero = 0;
  std::vector<long long> in_sphere(3, 0);
  auto tiny = cfg;
  tiny.mean_users = 1.5;
  for (int s = 0; s < n; ++s) {
    const auto r = sample_realization(cfg, 1000 + s);
    total += r.size();
    for (const auto& p : r.users) {
      for (int v = 0; v < 3; ++v) in_sphere[v] += (p - cfg.hotspots[v].center).norm() <= cfg.hotspots[v].radius;
    }
    zero += sample_realization(tiny, s).size() == 0;
  }
  const double mean = static_cast<double>(total) / n;
  CHECK(std::abs(mean - 40) < 4 * std::sqrt(40.0 / n));
  const double p0 = static_cast<double>(zero) / n;
  CHECK(std::abs(p0 - std::exp(-1.5)) < 4 * std::sqrt(std::exp(-1.5) / n));
  for (int v = 0; v < 3; ++v) {
    // Geometric oracle: the integral of rho over the hotspot sphere.
    const double expected = (d.background + d.hotspot[v]) * sphere_volume(cfg.hotspots[v].radius);
    CHECK(static_cast<double>(in_sphere[v]) / n == doctest::Approx(expected).epsilon(0.02));
  }
}

TEST_CASE("mu = 0 gives empty realizations") {
  auto cfg = ScenarioConfig::defaults();
  cfg.mean_users = 0;
  CHECK(sample_realization(cfg, 3).size() == 0);
}

}
