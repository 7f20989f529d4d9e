#pragma once

#include "sixdma/capacity.hpp"
#include "sixdma/channel.hpp"
#include "sixdma/constraints.hpp"
#include "sixdma/scenario.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

namespace sixdma {

/// One random placement of the B surfaces and its measured sum-rate.
struct SampleSet {
  int t{0};
  std::vector<int> positions;
  std::vector<int> rotations;
  double value{0};
};

/// T draws: B distinct positions uniformly without replacement, one uniform
/// rotation per position. Throws std::invalid_argument if M < B or T < 1.
std::vector<SampleSet> sample_sets(int M, int L, int B, int T, std::uint64_t seed);
std::vector<SampleSet> sample_sets(const PoseCodebook& codebook, int B, int T, std::uint64_t seed);

/// The optimizer only ever sees this scalar.
using Measurement = std::function<double(const SampleSet&)>;

enum class Population { Fresh, Frozen };

/// Simulated measurement: users drawn from the scenario (a new draw for each
/// t, or one shared draw when frozen), LoS channels to the sampled poses,
/// sum-rate of the resulting H.
struct MeasurementEnvironment {
  const PoseCodebook* codebook{nullptr};
  ScenarioConfig scenario;
  SystemConfig system;
  AntennaPattern pattern;
  AntennaLayout layout;
  std::uint64_t seed{0};
  Population population{Population::Fresh};

  [[nodiscard]] UserRealization users(int t) const;
  [[nodiscard]] double measure(const SampleSet& sample) const;
  [[nodiscard]] Measurement callback() const {
    return [this](const SampleSet& s) { return measure(s); };
  }
};

/// Per-cell member samples and conditional means. Empty cells have mean 0.
struct CsmTable {
  int M{0};
  int L{0};
  Eigen::MatrixXd mean;
  Eigen::MatrixXi count;
  std::vector<std::vector<int>> members;  ///< cell m * L + l, sorted sample indices t

  [[nodiscard]] long long total_count() const { return count.cast<long long>().sum(); }
};

/// Sums run over members in ascending t, so the table does not depend on the
/// order of `samples`.
CsmTable build_csm_table(const std::vector<SampleSet>& samples, int M, int L);

/// phi(m) = argmax_l mean(m, l); positions = Top-B of mean(m, phi(m)); ties
/// go to the lower index.
IndicatorState csm_select(const CsmTable& table, int B);

struct OnlineResult {
  IndicatorState selection;
  CsmTable table;
  std::vector<SampleSet> samples;
  FeasibilityReport feasibility;
  std::vector<std::string> divergence;
  double seconds{0};
};

/// Samples, measures (concurrently, one slot per t) and selects.
OnlineResult optimize_csm(const PoseCodebook& codebook, int B, int T, std::uint64_t seed,
                          const Measurement& measure, int threads = 0);

/// `m,l,count,mean` with 1-based indices.
void write_csm_csv(std::ostream& out, const CsmTable& table);
/// `t,b,position,rotation,value` with 1-based indices.
void write_samples_csv(std::ostream& out, const std::vector<SampleSet>& samples);

}  // namespace sixdma
