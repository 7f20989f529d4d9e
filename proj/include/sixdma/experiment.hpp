#pragma once

#include "sixdma/config.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace sixdma {

struct ResultRow {
  std::string sweep_value;
  std::string scheme;
  double mean{0};
  double std{0};
  double seconds{0};
};

PoseCodebook make_codebook(const CodebookConfig& cfg, const SystemConfig& sys);
/// N-element UPA at lambda / 2.
AntennaLayout surface_layout(const SystemConfig& sys);

/// Seed of the i-th repetition of a run started with `base`.
std::uint64_t run_seed(std::uint64_t base, int index);

/// Omega user draws shared by every scheme evaluated under `seed`.
std::vector<UserRealization> evaluation_set(const ExperimentConfig& cfg, std::uint64_t seed);
std::vector<StackedChannel> stacked_channels(const PoseCodebook& codebook,
                                             const std::vector<UserRealization>& users,
                                             const ExperimentConfig& cfg);

/// Detailed outputs of the first repetition, for traces.
struct RunArtifacts {
  std::optional<OfflineResult> offline;
  std::optional<OnlineResult> online;
  std::vector<BenchmarkResult> benchmarks;
};

/// Capacity of one scheme (offline, online, fpa, circular, rotations) on the
/// evaluation set of `seed`.
double run_scheme(const std::string& scheme, const ExperimentConfig& cfg, std::uint64_t seed,
                  const std::vector<UserRealization>& users, RunArtifacts* artifacts = nullptr);

/// Mean and sample standard deviation over cfg.sweep.seeds repetitions.
std::vector<ResultRow> run_point(const ExperimentConfig& cfg, const std::vector<std::string>& schemes,
                                 std::uint64_t base_seed, const std::string& sweep_value,
                                 RunArtifacts* artifacts = nullptr);

ExperimentConfig apply_sweep(const ExperimentConfig& cfg, SweepAxis axis, double value);

void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows,
                       const std::string& config_hash);
void write_timing_csv(std::ostream& out, const std::vector<ResultRow>& rows,
                      const std::string& config_hash);

struct RunRequest {
  std::string command;  ///< generate-codebook | optimize-offline | optimize-online | benchmark | sweep
  ExperimentConfig config;
  std::uint64_t seed{1};
  std::filesystem::path out{"out"};
  std::string benchmark_kind{"fpa"};
};

/// Runs a subcommand and writes its files into request.out. Progress goes
/// to `log`. Returns the process exit code.
int run(const RunRequest& request, std::ostream& log);

}  // namespace sixdma
