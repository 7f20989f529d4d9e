#pragma once

#include "sixdma/channel.hpp"
#include "sixdma/scenario.hpp"

#include <span>
#include <string>
#include <vector>

namespace sixdma {

enum class BenchmarkKind { Fpa, CircularPositions, RotationsOnly };

std::string to_string(BenchmarkKind kind);
/// Accepts fpa, circular, rotations. Throws std::invalid_argument otherwise.
BenchmarkKind parse_benchmark_kind(const std::string& name);

/// Three-sector BS: sector s faces azimuth 120 s degrees with the given
/// downtilt and carries a vertical line array at lambda / 2.
struct BenchmarkConfig {
  BenchmarkKind kind{BenchmarkKind::Fpa};
  int sectors{3};
  int antennas_per_sector{0};   ///< 0: ceil(N B / sectors)
  double downtilt_deg{15};
  double radius{0.5};           ///< sector distance from the CPU, metres
  double height{0};
  int positions{8};             ///< circular path grid size M
  int rotations{8};             ///< azimuth grid size L
  int sweeps{2};                ///< coordinate-search passes over the sectors

  [[nodiscard]] int elements(const SystemConfig& sys) const;
  void validate() const;
};

/// Boresight at `azimuth` tilted down by `downtilt` (radians), placed at
/// `position_azimuth` on the circle of `radius` at `height`.
SurfacePose sector_pose(double azimuth, double downtilt, double radius, double height,
                        double position_azimuth);

/// Pose of sector s for grid option k under the benchmark kind. Option 0 is
/// always the fixed layout.
SurfacePose benchmark_pose(const BenchmarkConfig& cfg, int sector, int option);
int benchmark_options(const BenchmarkConfig& cfg);

struct BenchmarkResult {
  BenchmarkKind kind{BenchmarkKind::Fpa};
  double capacity{0};
  double fpa_capacity{0};
  std::vector<int> options;  ///< chosen grid option per sector
  std::vector<SurfacePose> poses;
  int evaluations{0};
};

/// FPA evaluates the fixed layout. The movable kinds run a coordinate search
/// over each sector's grid, starting from the fixed layout and accepting
/// strict improvements only, so their capacity is never below FPA.
BenchmarkResult run_benchmark(const BenchmarkConfig& cfg,
                              std::span<const UserRealization> realizations,
                              const SystemConfig& sys, const AntennaPattern& pattern = {});

}  // namespace sixdma
