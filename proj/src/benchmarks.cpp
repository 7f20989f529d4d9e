#include "sixdma/benchmarks.hpp"

#include "sixdma/capacity.hpp"
#include "sixdma/parallel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sixdma {

std::string to_string(BenchmarkKind kind) {
  switch (kind) {
    case BenchmarkKind::Fpa: return "fpa";
    case BenchmarkKind::CircularPositions: return "circular";
    case BenchmarkKind::RotationsOnly: return "rotations";
  }
  return "unknown";
}

BenchmarkKind parse_benchmark_kind(const std::string& name) {
  if (name == "fpa") return BenchmarkKind::Fpa;
  if (name == "circular") return BenchmarkKind::CircularPositions;
  if (name == "rotations") return BenchmarkKind::RotationsOnly;
  throw std::invalid_argument("unknown benchmark kind '" + name + "' (fpa|circular|rotations)");
}

int BenchmarkConfig::elements(const SystemConfig& sys) const {
  if (antennas_per_sector > 0) return antennas_per_sector;
  const int total = sys.antennas_per_surface * sys.surfaces;
  return (total + sectors - 1) / sectors;
}

void BenchmarkConfig::validate() const {
  if (sectors < 1) throw std::invalid_argument("benchmark: sectors must be >= 1");
  if (positions < 1 || rotations < 1) throw std::invalid_argument("benchmark: grids must be >= 1");
  if (sweeps < 1) throw std::invalid_argument("benchmark: sweeps must be >= 1");
  if (!(radius >= 0)) throw std::invalid_argument("benchmark: radius must be >= 0");
}

SurfacePose sector_pose(double azimuth, double downtilt, double radius, double height,
                        double position_azimuth) {
  RotationMatrix r;
  azimuth = std::remainder(azimuth, 2.0 * std::numbers::pi);
  r.col(0) = pointing_vector(-downtilt, azimuth);
  r.col(1) = Eigen::Vector3d(-std::sin(azimuth), std::cos(azimuth), 0.0);
  r.col(2) = r.col(0).cross(r.col(1));
  const Position3 q(radius * std::cos(position_azimuth), radius * std::sin(position_azimuth), height);
  return SurfacePose::from_matrix(q, r);
}

int benchmark_options(const BenchmarkConfig& cfg) {
  switch (cfg.kind) {
    case BenchmarkKind::Fpa: return 1;
    case BenchmarkKind::CircularPositions: return cfg.positions;
    case BenchmarkKind::RotationsOnly: return cfg.rotations;
  }
  return 1;
}

SurfacePose benchmark_pose(const BenchmarkConfig& cfg, int sector, int option) {
  const double two_pi = 2.0 * std::numbers::pi;
  const double base = two_pi * sector / cfg.sectors;
  const double tilt = cfg.downtilt_deg * std::numbers::pi / 180.0;
  switch (cfg.kind) {
    case BenchmarkKind::CircularPositions: {
      const double az = base + two_pi * option / cfg.positions;
      return sector_pose(az, tilt, cfg.radius, cfg.height, az);
    }
    case BenchmarkKind::RotationsOnly:
      return sector_pose(base + two_pi * option / cfg.rotations, tilt, cfg.radius, cfg.height, base);
    case BenchmarkKind::Fpa: break;
  }
  return sector_pose(base, tilt, cfg.radius, cfg.height, base);
}

BenchmarkResult run_benchmark(const BenchmarkConfig& cfg,
                              std::span<const UserRealization> realizations,
                              const SystemConfig& sys, const AntennaPattern& pattern) {
  cfg.validate();
  if (realizations.empty()) throw std::invalid_argument("run_benchmark: no realizations");
  const int options = benchmark_options(cfg);
  const int n = cfg.elements(sys);
  const AntennaLayout layout = AntennaLayout::vertical_line(n, sys.wavelength / 2.0);
  const std::size_t omega = realizations.size();

  std::vector<std::vector<std::vector<Path>>> paths(omega);
  for (std::size_t o = 0; o < omega; ++o) paths[o] = los_paths(realizations[o], sys.wavelength);

  // blocks[(s * options + k) * omega + o]: N x K channel of sector s, option k
  std::vector<Eigen::MatrixXcd> blocks(static_cast<std::size_t>(cfg.sectors) * options * omega);
  parallel_for(static_cast<std::size_t>(cfg.sectors) * options, [&](std::size_t sk) {
    const SurfacePose pose = benchmark_pose(cfg, static_cast<int>(sk) / options,
                                            static_cast<int>(sk) % options);
    for (std::size_t o = 0; o < omega; ++o) {
      blocks[sk * omega + o] =
          channel_matrix(std::span(&pose, 1), paths[o], layout, pattern, sys.wavelength);
    }
  });

  BenchmarkResult result;
  result.kind = cfg.kind;
  result.options.assign(cfg.sectors, 0);
  auto evaluate = [&](const std::vector<int>& choice) {
    ++result.evaluations;
    double total = 0;
    for (std::size_t o = 0; o < omega; ++o) {
      const Eigen::Index k = realizations[o].size();
      Eigen::MatrixXcd h(static_cast<Eigen::Index>(cfg.sectors) * n, k);
      for (int s = 0; s < cfg.sectors; ++s) {
        h.middleRows(static_cast<Eigen::Index>(s) * n, n) =
            blocks[(static_cast<std::size_t>(s) * options + choice[s]) * omega + o];
      }
      total += sum_rate(h, sys.snr());
    }
    return total / static_cast<double>(omega);
  };

  result.fpa_capacity = evaluate(result.options);
  result.capacity = result.fpa_capacity;
  if (options > 1) {
    auto position_taken = [&](int sector, int option) {
      if (cfg.kind != BenchmarkKind::CircularPositions) return false;
      const Position3 q = benchmark_pose(cfg, sector, option).position;
      for (int s = 0; s < cfg.sectors; ++s) {
        if (s == sector) continue;
        if ((benchmark_pose(cfg, s, result.options[s]).position - q).norm() < 1e-9) return true;
      }
      return false;
    };
    for (int sweep = 0; sweep < cfg.sweeps; ++sweep) {
      bool improved = false;
      for (int s = 0; s < cfg.sectors; ++s) {
        for (int k = 0; k < options; ++k) {
          if (k == result.options[s] || position_taken(s, k)) continue;
          std::vector<int> trial = result.options;
          trial[s] = k;
          const double c = evaluate(trial);
          if (c > result.capacity) {
            result.capacity = c;
            result.options = std::move(trial);
            improved = true;
          }
        }
      }
      if (!improved) break;
    }
  }
  for (int s = 0; s < cfg.sectors; ++s) result.poses.push_back(benchmark_pose(cfg, s, result.options[s]));
  return result;
}

}  // namespace sixdma
