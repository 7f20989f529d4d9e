#include "sixdma/offline.hpp"

#include <algorithm>
#include <chrono>
#include <iomanip>
#include <numeric>
#include <ostream>

namespace sixdma {

void OfflineConfig::validate() const {
  if (max_iterations < 1) throw std::invalid_argument("offline: max_iterations must be >= 1");
  if (!(fd_epsilon > 0)) throw std::invalid_argument("offline: fd_epsilon must be positive");
  if (!(fixed_step > 0 && fixed_step <= 1)) {
    throw std::invalid_argument("offline: fixed step must lie in (0, 1]");
  }
  if (restarts < 1) throw std::invalid_argument("offline: restarts must be >= 1");
  if (realizations < 1) throw std::invalid_argument("offline: realizations must be >= 1");
  if (max_halvings < 0 || initial_components < 1) {
    throw std::invalid_argument("offline: max_halvings >= 0 and initial_components >= 1 required");
  }
}

Eigen::VectorXd gradient_fd(const RelaxedState& state, const MonteCarloObjective& objective,
                            double eps, bool central) {
  return objective.gradient(state, eps, central);
}

namespace {

int class_rank(RowClass cls) {
  switch (cls) {
    case RowClass::Distance: return 0;
    case RowClass::Reflection: return 1;
    case RowClass::Blockage: return 2;
    default: return -1;
  }
}

constexpr RowClass kRankClass[] = {RowClass::Distance, RowClass::Reflection, RowClass::Blockage};

ActiveSetSimplex simplex_lp(int B, int M, int L) {
  const Eigen::Index n = static_cast<Eigen::Index>(B) * (M + L);
  ActiveSetSimplex lp(Eigen::VectorXd::Zero(n), Eigen::VectorXd::Ones(n));
  for (int b = 0; b < B; ++b) {
    Eigen::RowVectorXd s = Eigen::RowVectorXd::Zero(n);
    s.segment(s_index(b, 0, M), M).setOnes();
    lp.add_row(s, RowSense::Equal, 1.0);
    Eigen::RowVectorXd g = Eigen::RowVectorXd::Zero(n);
    g.segment(g_index(b, 0, B, M, L), L).setOnes();
    lp.add_row(g, RowSense::Equal, 1.0);
  }
  return lp;
}

}  // namespace

struct DirectionFinder::State {
  ActiveSetSimplex lp;
  int cuts{0};

  State(int B, int M, int L) : lp(simplex_lp(B, M, L)) {}

  void cut(const ProjectedConstraint& pc, const Eigen::VectorXd& z) {
    const SparseRow row = pc.cut(z);
    Eigen::RowVectorXd a = Eigen::RowVectorXd::Zero(lp.num_variables());
    for (auto [j, c] : row.terms) a(j) += c;
    lp.add_row(a, row.sense, row.rhs);
    ++cuts;
  }
};

DirectionFinder::DirectionFinder(int B, ConstraintData data, double tolerance)
    : B_(B), M_(data.M()), L_(data.L()), data_(std::move(data)), tol_(tolerance),
      constraints_(project(B, data_)) {}

DirectionFinder::~DirectionFinder() = default;
DirectionFinder::DirectionFinder(DirectionFinder&&) noexcept = default;

int DirectionFinder::pool_size() const { return state_ ? state_->cuts : 0; }

std::unique_ptr<DirectionFinder::State> DirectionFinder::fresh_state() const {
  return std::make_unique<State>(B_, M_, L_);
}

std::optional<Eigen::VectorXd> DirectionFinder::cutting_plane(const Eigen::VectorXd& grad,
                                                              int max_class, State& state,
                                                              int& rounds) const {
  constexpr int kMaxRounds = 20000;
  state.lp.set_objective(grad);
  for (rounds = 1; rounds <= kMaxRounds; ++rounds) {
    const LpStatus status = state.lp.solve();
    if (status == LpStatus::Infeasible) return std::nullopt;
    if (status != LpStatus::Optimal) {
      throw std::runtime_error("lp_direction: simplex ended with status " + to_string(status));
    }
    const Eigen::VectorXd& x = state.lp.x();
    bool added = false;
    for (const auto& pc : constraints_) {
      if (class_rank(pc.cls) > max_class) continue;
      if (pc.value(x) < -tol_) {
        state.cut(pc, x);
        added = true;
      }
    }
    if (!added) return x;
  }
  throw std::runtime_error("lp_direction: cutting planes did not converge");
}

Direction DirectionFinder::solve(const Eigen::VectorXd& grad, const Eigen::VectorXd& z) {
  if (grad.size() != B_ * (M_ + L_) || z.size() != grad.size()) {
    throw std::invalid_argument("lp_direction: gradient length must be B(M + L)");
  }
  Direction out;
  const int before = pool_size();
  if (!state_) state_ = fresh_state();
  auto x = cutting_plane(grad, 2, *state_, out.rounds);
  if (!x) {
    // Find the first class whose rows empty the polytope.
    for (int k = 0; k <= 2; ++k) {
      auto state = fresh_state();
      int rounds = 0;
      if (!cutting_plane(grad, k, *state, rounds)) {
        throw InfeasibleError("lp_direction: relaxed feasible set is empty (" +
                                  to_string(kRankClass[k]) + " rows)",
                              kRankClass[k]);
      }
    }
    throw InfeasibleError("lp_direction: relaxed feasible set is empty", RowClass::Simplex);
  }
  out.cuts = pool_size() - before;
  out.vertex = RelaxedState{B_, M_, L_, x->cwiseMax(0.0), {}, {}};
  complete_auxiliaries(out.vertex, data_);
  out.lp_objective = grad.dot(out.vertex.z - z);
  return out;
}

Direction lp_direction(const Eigen::VectorXd& grad, const Eigen::VectorXd& z, int B,
                       const ConstraintData& data) {
  DirectionFinder finder(B, data);
  return finder.solve(grad, z);
}

Direction lp_direction_full(const Eigen::VectorXd& grad, const Eigen::VectorXd& z,
                            const LinearizedConstraints& lin) {
  if (grad.size() != lin.num_z() || z.size() != grad.size()) {
    throw std::invalid_argument("lp_direction_full: gradient length must be B(M + L)");
  }
  const LpResult res = solve(lin.to_lp(grad));
  if (res.status == LpStatus::Infeasible) {
    throw InfeasibleError("lp_direction_full: relaxed feasible set is empty", RowClass::Simplex);
  }
  if (res.status != LpStatus::Optimal) {
    throw std::runtime_error("lp_direction_full: simplex ended with status " + to_string(res.status));
  }
  Direction out;
  out.rounds = 1;
  out.vertex = RelaxedState{lin.B(), lin.M(), lin.L(), res.x.head(lin.num_z()),
                            res.x.tail(lin.num_w()), res.x.segment(lin.num_z(), lin.num_wbar())};
  out.lp_objective = grad.dot(out.vertex.z - z);
  return out;
}

namespace {

constexpr double kFeasTol = 1e-9;

bool self_ok(int m, int l, const ConstraintData& data) { return data.U(m, l) >= -kFeasTol; }

bool pair_ok(int m, int l, int m2, int l2, const ConstraintData& data) {
  return m != m2 && data.D(m, m2) >= data.d_min - kFeasTol &&
         data.U(m2, l) - data.U(m, l) <= kFeasTol && data.U(m, l2) - data.U(m2, l2) <= kFeasTol;
}

bool compatible(int m, int l, const IndicatorState& state, int skip, const ConstraintData& data) {
  if (!self_ok(m, l, data)) return false;
  for (int b = 0; b < state.surfaces(); ++b) {
    // Blocked members are skipped.
    if (b == skip || !self_ok(state.positions[b], state.rotations[b], data)) continue;
    if (!pair_ok(m, l, state.positions[b], state.rotations[b], data)) return false;
  }
  return true;
}

}  // namespace

std::optional<IndicatorState> random_feasible_state(int B, const ConstraintData& data, Rng& rng,
                                                    int attempts) {
  const int M = data.M(), L = data.L();
  std::vector<std::pair<int, int>> options;
  for (int a = 0; a < attempts; ++a) {
    IndicatorState state{M, L, {}, {}};
    for (int b = 0; b < B; ++b) {
      options.clear();
      for (int m = 0; m < M; ++m) {
        for (int l = 0; l < L; ++l) {
          if (compatible(m, l, state, -1, data)) options.emplace_back(m, l);
        }
      }
      if (options.empty()) break;
      const auto [m, l] =
          options[std::uniform_int_distribution<std::size_t>(0, options.size() - 1)(rng)];
      state.positions.push_back(m);
      state.rotations.push_back(l);
    }
    if (state.surfaces() == B) return state;
  }
  return std::nullopt;
}

IndicatorState round_selection(const RelaxedState& state) {
  const Eigen::MatrixXd s = state.weights();
  const Eigen::VectorXd jf = s.rowwise().sum();
  std::vector<int> order(state.M);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return jf(a) > jf(b); });
  IndicatorState out{state.M, state.L, {}, {}};
  for (int b = 0; b < state.B; ++b) {
    const int m = order[b];
    Eigen::Index l = 0;
    s.row(m).maxCoeff(&l);
    out.positions.push_back(m);
    out.rotations.push_back(static_cast<int>(l));
  }
  return out;
}

std::optional<IndicatorState> repair(IndicatorState state, const Eigen::MatrixXd& utility,
                                     const ConstraintData& data, int* replacements) {
  const int M = data.M(), L = data.L();
  std::vector<int> ranked(static_cast<std::size_t>(M) * L);
  std::iota(ranked.begin(), ranked.end(), 0);
  std::stable_sort(ranked.begin(), ranked.end(), [&](int a, int b) {
    return utility(a / L, a % L) > utility(b / L, b % L);
  });
  auto value = [&](int b) { return utility(state.positions[b], state.rotations[b]); };
  int count = 0;
  for (;;) {
    const FeasibilityReport report = check_feasible(state, data, kFeasTol);
    if (report.ok()) break;
    int victim;
    if (!report.blockage.empty()) {
      victim = report.blockage.front();
    } else {
      const auto [b, v] = !report.reflection.empty() ? report.reflection.front()
                                                       : report.distance.front();
      victim = value(v) <= value(b) ? v : b;
    }
    bool replaced = false;
    for (int c : ranked) {
      const int m = c / L, l = c % L;
      if (compatible(m, l, state, victim, data)) {
        state.positions[victim] = m;
        state.rotations[victim] = l;
        replaced = true;
        break;
      }
    }
    if (!replaced) return std::nullopt;
    ++count;
  }
  if (replacements) *replacements = count;
  return state;
}

OfflineResult optimize_offline(const PoseCodebook& codebook,
                               std::span<const StackedChannel> realizations,
                               const SystemConfig& sys, int B, const OfflineConfig& cfg) {
  cfg.validate();
  if (B < 1 || B > codebook.num_positions()) {
    throw std::invalid_argument("optimize_offline: need 1 <= B <= M");
  }
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(Clock::now() - start).count(); };

  const MonteCarloObjective objective(realizations, sys, cfg.threads);
  DirectionFinder finder(B, build_constraint_data(codebook));
  const ConstraintData& data = finder.data();
  const int M = codebook.num_positions(), L = codebook.num_rotations();

  // Raises InfeasibleError with the offending row class if the polytope is empty.
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(B) * (M + L));
  finder.solve(zero, zero);

  OfflineResult best;
  bool found = false;
  std::vector<TraceRow> trace;
  int failed_repairs = 0;

  // A restart whose rounding cannot be repaired is replaced by a fresh one.
  int kept = 0;
  const int max_attempts = 4 * cfg.restarts;
  for (int r = 0; kept < cfg.restarts && r < max_attempts; ++r) {
    Rng rng(derive_seed(cfg.seed, {0x0ff1'1e, static_cast<std::uint64_t>(r)}));
    std::vector<IndicatorState> anchors;
    for (int k = 0; k < cfg.initial_components; ++k) {
      auto s = random_feasible_state(B, data, rng);
      if (!s) break;
      anchors.push_back(std::move(*s));
    }
    if (anchors.empty()) {
      throw std::runtime_error("optimize_offline: randomized search found no feasible selection");
    }
    std::gamma_distribution<double> gamma(1.0, 1.0);
    std::vector<double> lambda;
    for (std::size_t k = 0; k < anchors.size(); ++k) lambda.push_back(gamma(rng));
    const double total = std::accumulate(lambda.begin(), lambda.end(), 0.0);

    RelaxedState state{B, M, L, Eigen::VectorXd::Zero(zero.size()), {}, {}};
    for (std::size_t k = 0; k < anchors.size(); ++k) {
      state.z += (lambda[k] / total) * anchors[k].to_vector();
    }
    complete_auxiliaries(state, data);
    double f = objective.value(state);
    trace.push_back({r, 0, f, 0.0, 0.0, 0, elapsed()});

    for (int t = 0; t < cfg.max_iterations; ++t) {
      const Eigen::VectorXd grad = gradient_fd(state, objective, cfg.fd_epsilon, cfg.central_differences);
      const Direction dir = finder.solve(grad, state.z);
      if (dir.lp_objective <= cfg.gap_tolerance) {
        trace.push_back({r, t + 1, f, 0.0, dir.lp_objective, dir.cuts, elapsed()});
        break;
      }
      double step = cfg.step_rule == StepRule::Diminishing ? 2.0 / (t + 2.0) : cfg.fixed_step;
      bool accepted = false;
      RelaxedState trial = state;
      double f_trial = f;
      for (int h = 0; h <= cfg.max_halvings; ++h) {
        trial.z = state.z + step * (dir.vertex.z - state.z);
        f_trial = objective.value(trial);
        if (f_trial >= f) {
          accepted = true;
          break;
        }
        step *= 0.5;
      }
      if (accepted) {
        state.z = trial.z;
        state.w += step * (dir.vertex.w - state.w);
        state.wbar += step * (dir.vertex.wbar - state.wbar);
        f = f_trial;
      } else {
        step = 0.0;
      }
      trace.push_back({r, t + 1, f, step, dir.lp_objective, dir.cuts, elapsed()});
    }

    int replacements = 0;
    const auto selection = repair(round_selection(state), state.weights(), data, &replacements);
    if (!selection) {
      ++failed_repairs;
      continue;
    }
    ++kept;
    const double rounded = objective.value(weights(*selection));
    if (!found || rounded > best.rounded_objective) {
      found = true;
      best.selection = *selection;
      best.rounded_objective = rounded;
      best.relaxed_objective = f;
      best.relaxed = state;
      best.best_restart = r;
      best.repairs = replacements;
    }
  }
  if (!found) {
    throw std::runtime_error("optimize_offline: rounding could not be repaired in any of " +
                             std::to_string(failed_repairs) + " restarts");
  }
  best.trace = std::move(trace);
  best.feasibility = check_feasible(best.selection, data);
  best.divergence = divergence(best.feasibility, check_feasible_geometric(best.selection, codebook));
  best.seconds = elapsed();
  return best;
}

void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& trace) {
  out << "restart,iteration,objective,step,lp_objective,cuts,seconds\n";
  out << std::setprecision(12);
  for (const auto& row : trace) {
    out << row.restart + 1 << ',' << row.iteration << ',' << row.objective << ',' << row.step << ','
        << row.lp_objective << ',' << row.cuts << ',' << row.seconds << '\n';
  }
}

}  // namespace sixdma
