#include "sixdma/benchmarks.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace sixdma;

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

std::vector<UserRealization> draws(int omega, double mu, std::uint64_t seed) {
  auto scenario = ScenarioConfig::defaults();
  scenario.mean_users = mu;
  std::vector<UserRealization> out;
  for (int w = 0; w < omega; ++w) out.push_back(sample_realization(scenario, seed + w));
  return out;
}

SystemConfig small_system() {
  SystemConfig sys;
  sys.antennas_per_surface = 2;
  sys.surfaces = 3;
  return sys;
}

}  // namespace

TEST_SUITE("benchmarks") {

TEST_CASE("kind names") {
  CHECK(parse_benchmark_kind("fpa") == BenchmarkKind::Fpa);
  CHECK(parse_benchmark_kind("circular") == BenchmarkKind::CircularPositions);
  CHECK(parse_benchmark_kind("rotations") == BenchmarkKind::RotationsOnly);
  CHECK(to_string(BenchmarkKind::RotationsOnly) == "rotations");
  CHECK_THROWS_AS(parse_benchmark_kind("FPA"), std::invalid_argument);
}

TEST_CASE("fixed sector layout") {
  BenchmarkConfig cfg;
  for (int s = 0; s < 3; ++s) {
    const auto pose = benchmark_pose(cfg, s, 0);
    const double az = 120.0 * s * kDeg;
    const Eigen::Vector3d expected(std::cos(15 * kDeg) * std::cos(az), std::cos(15 * kDeg) * std::sin(az),
                                   -std::sin(15 * kDeg));
    CHECK((pose.normal() - expected).norm() < 1e-12);
    CHECK(is_rotation(pose.rotation));
    CHECK(pose.position.norm() == doctest::Approx(0.5));
    CHECK(pose.position.normalized().dot(Eigen::Vector3d(std::cos(az), std::sin(az), 0)) ==
          doctest::Approx(1));
  }
  CHECK(cfg.elements(small_system()) == 2);
  SystemConfig big;
  CHECK(cfg.elements(big) == 22);  // ceil(4 * 16 / 3)
  cfg.antennas_per_sector = 5;
  CHECK(cfg.elements(big) == 5);
  CHECK(benchmark_options(cfg) == 1);
  cfg.kind = BenchmarkKind::CircularPositions;
  CHECK(benchmark_options(cfg) == cfg.positions);

  const auto p = sector_pose(0.0, 0.0, 1.0, 2.0, std::numbers::pi / 2);
  CHECK((p.normal() - Eigen::Vector3d::UnitX()).norm() < 1e-12);
  CHECK((p.position - Eigen::Vector3d(0, 1, 2)).norm() < 1e-12);
}

TEST_CASE("validation") {
  BenchmarkConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.sectors = 0;
  CHECK_THROWS(cfg.validate());
  cfg = {};
  cfg.positions = 0;
  CHECK_THROWS(cfg.validate());
  cfg = {};
  CHECK_THROWS(run_benchmark(cfg, {}, small_system()));
}

TEST_CASE("movable benchmarks never lose to FPA") {
  const auto users = draws(4, 10, 21);
  const auto sys = small_system();
  BenchmarkConfig fpa;
  const auto base = run_benchmark(fpa, users, sys);
  CHECK(base.capacity > 0);
  CHECK(base.capacity == base.fpa_capacity);
  CHECK(base.evaluations == 1);
  CHECK(base.poses.size() == 3);

  for (auto kind : {BenchmarkKind::CircularPositions, BenchmarkKind::RotationsOnly}) {
    BenchmarkConfig cfg;
    cfg.kind = kind;
    cfg.positions = 6;
    cfg.rotations = 6;
    const auto r = run_benchmark(cfg, users, sys);
    CHECK(r.fpa_capacity == base.capacity);
    CHECK(r.capacity >= base.capacity);
    CHECK(r.evaluations > 1);
    const auto again = run_benchmark(cfg, users, sys);
    CHECK(again.capacity == r.capacity);
    CHECK(again.options == r.options);
  }

  // One-point grids collapse to FPA.
  BenchmarkConfig one;
  one.kind = BenchmarkKind::CircularPositions;
  one.positions = 1;
  CHECK(run_benchmark(one, users, sys).capacity == base.capacity);
}

}
