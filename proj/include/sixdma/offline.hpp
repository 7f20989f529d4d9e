#pragma once

#include "sixdma/capacity.hpp"
#include "sixdma/constraints.hpp"
#include "sixdma/lp.hpp"
#include "sixdma/random.hpp"

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace sixdma {

enum class StepRule { Diminishing, Fixed };

struct OfflineConfig {
  int max_iterations{30};         ///< T_f
  double fd_epsilon{1e-4};
  bool central_differences{false};
  StepRule step_rule{StepRule::Diminishing};  ///< 2 / (t + 2) or fixed_step
  double fixed_step{0.5};
  int restarts{4};                ///< restarts whose rounding survives repair; at most 4x attempts
  int realizations{100};          ///< Omega
  std::uint64_t seed{1};
  double gap_tolerance{1e-9};     ///< stop once grad^T (v - z) falls below this
  int max_halvings{20};           ///< step halvings before a zero step
  int initial_components{3};      ///< feasible one-hot states mixed into z_0
  int threads{0};

  void validate() const;
};

/// Raised when the relaxed polytope is empty or no feasible selection exists.
class InfeasibleError : public std::runtime_error {
 public:
  InfeasibleError(const std::string& what, RowClass cls) : std::runtime_error(what), cls_(cls) {}
  [[nodiscard]] RowClass row_class() const { return cls_; }

 private:
  RowClass cls_;
};

struct TraceRow {
  int restart{0};
  int iteration{0};
  double objective{0};     ///< relaxed objective after the step
  double step{0};
  double lp_objective{0};  ///< grad^T (v - z), the Frank-Wolfe gap
  int cuts{0};
  double seconds{0};
};

struct OfflineResult {
  IndicatorState selection;
  double rounded_objective{0};
  double relaxed_objective{0};
  RelaxedState relaxed;
  std::vector<TraceRow> trace;
  FeasibilityReport feasibility;
  std::vector<std::string> divergence;
  int best_restart{0};
  int repairs{0};
  double seconds{0};
};

/// Finite-difference gradient over all B(M + L) coordinates of z.
Eigen::VectorXd gradient_fd(const RelaxedState& state, const MonteCarloObjective& objective,
                            double eps, bool central = false);

struct Direction {
  RelaxedState vertex;       ///< auxiliaries completed
  double lp_objective{0};    ///< grad^T (v - z)
  int rounds{0};
  int cuts{0};
};

/// Direction-finding LP max grad^T v over the relaxed feasible set. The
/// auxiliaries are maximized out exactly, leaving rows in z of the form
/// constant + sum_t min_k piece_tk(z) >= 0. Each violated row gets its active
/// affine minorant as a cut until none is violated. Cuts are valid for every
/// gradient and persist across calls.
class DirectionFinder {
 public:
  DirectionFinder(int B, ConstraintData data, double tolerance = 1e-7);
  ~DirectionFinder();
  DirectionFinder(DirectionFinder&&) noexcept;

  /// Throws InfeasibleError naming the first row class that empties the set.
  Direction solve(const Eigen::VectorXd& grad, const Eigen::VectorXd& z);
  [[nodiscard]] int pool_size() const;
  [[nodiscard]] const ConstraintData& data() const { return data_; }

 private:
  struct State;
  std::optional<Eigen::VectorXd> cutting_plane(const Eigen::VectorXd& grad, int max_class,
                                               State& state, int& rounds) const;
  [[nodiscard]] std::unique_ptr<State> fresh_state() const;

  int B_;
  int M_;
  int L_;
  ConstraintData data_;
  double tol_;
  std::vector<ProjectedConstraint> constraints_;
  std::unique_ptr<State> state_;
};

Direction lp_direction(const Eigen::VectorXd& grad, const Eigen::VectorXd& z, int B,
                       const ConstraintData& data);

/// Same LP over the full [z; wbar; w] system, solved directly.
Direction lp_direction_full(const Eigen::VectorXd& grad, const Eigen::VectorXd& z,
                            const LinearizedConstraints& lin);

/// Randomized greedy search for a feasible one-hot selection. Returns
/// nullopt after `attempts` failures.
std::optional<IndicatorState> random_feasible_state(int B, const ConstraintData& data, Rng& rng,
                                                    int attempts = 200);

/// Rounding: positions = Top-B rows sums of S = sum_b s_b g_b^T (ties to the
/// lower index, surfaces in decreasing utility), rotation = row argmax.
IndicatorState round_selection(const RelaxedState& state);

/// Replaces the lower-utility member of each violation with the best unused
/// candidate compatible with every other member. Returns nullopt when no
/// such candidate exists.
std::optional<IndicatorState> repair(IndicatorState state, const Eigen::MatrixXd& utility,
                                     const ConstraintData& data, int* replacements = nullptr);

OfflineResult optimize_offline(const PoseCodebook& codebook,
                               std::span<const StackedChannel> realizations,
                               const SystemConfig& sys, int B, const OfflineConfig& cfg);

/// `restart,iteration,objective,step,lp_objective,cuts,seconds`
void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& trace);

}  // namespace sixdma
