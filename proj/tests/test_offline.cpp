#include "sixdma/offline.hpp"

#include "fixtures.hpp"

#include <doctest.h>

#include <random>
#include <sstream>

using namespace sixdma;

namespace {

constexpr double kLambda = 0.125;

PoseCodebook tiny_codebook() { return testing::line_codebook(kLambda); }

std::vector<StackedChannel> channels(const PoseCodebook& cb, int N, int omega, double mu,
                                     std::uint64_t seed) {
  auto scenario = ScenarioConfig::defaults();
  scenario.mean_users = mu;
  std::vector<StackedChannel> out;
  for (int w = 0; w < omega; ++w) {
    const auto users = sample_realization(scenario, seed + w);
    out.push_back(stacked_channel(cb, users, AntennaLayout::upa(N, kLambda / 2), {}, kLambda));
  }
  return out;
}

SystemConfig system_for(int N, int B) {
  SystemConfig sys;
  sys.antennas_per_surface = N;
  sys.surfaces = B;
  return sys;
}

// Best feasible one-hot selection by enumeration.
double exhaustive_best(const PoseCodebook& cb, std::span<const StackedChannel> hs,
                       const SystemConfig& sys, int B) {
  const auto data = build_constraint_data(cb);
  const int M = cb.num_positions(), L = cb.num_rotations(), cells = M * L;
  int total = 1;
  for (int b = 0; b < B; ++b) total *= cells;
  double best = -1;
  for (int code = 0; code < total; ++code) {
    IndicatorState s{M, L, {}, {}};
    int c = code;
    for (int b = 0; b < B; ++b) {
      s.positions.push_back((c % cells) / L);
      s.rotations.push_back(c % L);
      c /= cells;
    }
    if (!check_feasible(s, data).ok()) continue;
    best = std::max(best, monte_carlo_capacity(s, hs, sys));
  }
  return best;
}

ConstraintData flat_data(int M, int L, double u, double d, double d_min) {
  ConstraintData data;
  data.U = Eigen::MatrixXd::Constant(M, L, u);
  data.D = Eigen::MatrixXd::Constant(M, M, d);
  data.D.diagonal().setZero();
  data.d_min = d_min;
  return data;
}

}  // namespace

TEST_SUITE("offline") {

TEST_CASE("config validation") {
  OfflineConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.max_iterations = 0;
  CHECK_THROWS(cfg.validate());
  cfg = {};
  cfg.fd_epsilon = 0;
  CHECK_THROWS(cfg.validate());
  cfg = {};
  cfg.fixed_step = 1.5;
  CHECK_THROWS(cfg.validate());
  cfg = {};
  cfg.restarts = 0;
  CHECK_THROWS(cfg.validate());
  cfg = {};
  cfg.initial_components = 0;
  CHECK_THROWS(cfg.validate());
}

TEST_CASE("direction LP examples") {
  const auto data = build_constraint_data(tiny_codebook());
  const int B = 2, n = B * (4 + 2);
  const auto start = RelaxedState::from(IndicatorState{4, 2, {0, 3}, {1, 0}});
  REQUIRE(check_feasible(IndicatorState{4, 2, {0, 3}, {1, 0}}, data).ok());

  SUBCASE("zero gradient") {
    const auto d = lp_direction(Eigen::VectorXd::Zero(n), start.z, B, data);
    CHECK(d.lp_objective == doctest::Approx(0).epsilon(1e-12));
  }
  SUBCASE("one large entry") {
    Eigen::VectorXd grad = Eigen::VectorXd::Zero(n);
    const int k = s_index(1, 0, 4);
    grad(k) = 10;
    const auto d = lp_direction(grad, start.z, B, data);
    CHECK(d.vertex.z(k) == doctest::Approx(1).epsilon(1e-7));
    CHECK(d.lp_objective == doctest::Approx(10 - grad.dot(start.z)));
  }
  SUBCASE("wrong length throws") {
    CHECK_THROWS_AS(lp_direction(Eigen::VectorXd::Zero(3), start.z, B, data), std::invalid_argument);
  }
}

TEST_CASE("single surface picks the gradient argmax") {
  const auto cb = sphere_codebook(20, 0.5, 1, default_min_distance(kLambda), kLambda);
  const auto data = build_constraint_data(cb);
  std::mt19937_64 rng(4);
  std::normal_distribution<double> g;
  for (int t = 0; t < 20; ++t) {
    Eigen::VectorXd grad(22);
    for (int i = 0; i < 22; ++i) grad(i) = g(rng);
    const auto d = lp_direction(grad, Eigen::VectorXd::Zero(22), 1, data);
    const double expected = grad.head(20).maxCoeff() + grad.tail(2).maxCoeff();
    CHECK(d.lp_objective == doctest::Approx(expected).epsilon(1e-7));
  }
}

TEST_CASE("projected and lifted direction LPs agree") {
  const auto data = build_constraint_data(tiny_codebook());
  const int B = 2;
  const auto lin = linearize(B, data);
  DirectionFinder finder(B, data);
  std::mt19937_64 rng(8);
  std::normal_distribution<double> g;
  const auto start = RelaxedState::from(IndicatorState{4, 2, {0, 3}, {1, 0}});
  for (int t = 0; t < 15; ++t) {
    Eigen::VectorXd grad(lin.num_z());
    for (int i = 0; i < grad.size(); ++i) grad(i) = g(rng);
    const auto a = finder.solve(grad, start.z);
    const auto b = lp_direction_full(grad, start.z, lin);
    CHECK(a.lp_objective == doctest::Approx(b.lp_objective).epsilon(1e-6));
    CHECK(lin.satisfied_by(lin.pack(a.vertex), 1e-6));
    CHECK(lin.satisfied_by(lin.pack(b.vertex), 1e-7));
  }
  CHECK(finder.pool_size() >= 0);
}

TEST_CASE("empty relaxation names the row class") {
  SUBCASE("blockage") {
    // With one rotation every cell is blocked even after relaxation.
    const auto data = flat_data(3, 1, -1.0, 1.0, 0.5);
    try {
      lp_direction(Eigen::VectorXd::Zero(4), Eigen::VectorXd::Zero(4), 1, data);
      FAIL("expected InfeasibleError");
    } catch (const InfeasibleError& e) {
      CHECK(e.row_class() == RowClass::Blockage);
    }
  }
  SUBCASE("distance") {
    const auto data = flat_data(3, 2, 1.0, 0.1, 0.5);
    try {
      lp_direction(Eigen::VectorXd::Zero(10), Eigen::VectorXd::Zero(10), 2, data);
      FAIL("expected InfeasibleError");
    } catch (const InfeasibleError& e) {
      CHECK(e.row_class() == RowClass::Distance);
    }
    CHECK_THROWS_AS(lp_direction_full(Eigen::VectorXd::Zero(10), Eigen::VectorXd::Zero(10),
                                      linearize(2, data)),
                    InfeasibleError);
  }
}

TEST_CASE("rounding") {
  RelaxedState st{2, 3, 2, Eigen::VectorXd::Zero(10), {}, {}};
  st.z << 0.5, 0.5, 0, 0, 0.5, 0.5, 0, 1, 1, 0;
  const auto r = round_selection(st);
  CHECK(r.positions == std::vector<int>{1, 0});
  CHECK(r.rotations == std::vector<int>{0, 1});

  RelaxedState flat{3, 5, 2, Eigen::VectorXd::Constant(3 * 7, 0.2), {}, {}};
  flat.z.tail(6).setConstant(0.5);
  const auto f = round_selection(flat);
  CHECK(f.positions == std::vector<int>{0, 1, 2});
  CHECK(f.rotations == std::vector<int>{0, 0, 0});
}

TEST_CASE("repair") {
  const auto data = build_constraint_data(tiny_codebook());
  Eigen::MatrixXd utility = Eigen::MatrixXd::Zero(4, 2);
  for (int m = 0; m < 4; ++m) {
    for (int l = 0; l < 2; ++l) utility(m, l) = m + 0.1 * l;
  }
  // Two surfaces on one position: one moves to the best compatible cell.
  IndicatorState bad{4, 2, {3, 3}, {0, 0}};
  REQUIRE_FALSE(check_feasible(bad, data).ok());
  int replacements = -1;
  const auto fixed = repair(bad, utility, data, &replacements);
  REQUIRE(fixed);
  CHECK(check_feasible(*fixed, data).ok());
  CHECK(replacements >= 1);
  CHECK((fixed->positions[0] == 3 || fixed->positions[1] == 3));

  IndicatorState good{4, 2, {0, 3}, {1, 0}};
  const auto same = repair(good, utility, data, &replacements);
  REQUIRE(same);
  CHECK(same->positions == good.positions);
  CHECK(replacements == 0);

  const auto blocked = flat_data(3, 1, -1.0, 1.0, 0.5);
  CHECK_FALSE(repair(IndicatorState{3, 1, {0}, {0}}, Eigen::MatrixXd::Ones(3, 1), blocked));
}

TEST_CASE("random feasible states") {
  const auto data = build_constraint_data(tiny_codebook());
  Rng rng(12);
  for (int t = 0; t < 30; ++t) {
    const auto s = random_feasible_state(2, data, rng);
    REQUIRE(s);
    CHECK(check_feasible(*s, data).ok());
  }
  Rng rng2(1);
  CHECK_FALSE(random_feasible_state(1, flat_data(3, 1, -1.0, 1.0, 0.5), rng2, 5));
}

TEST_CASE("offline optimizer on a tiny instance") {
  const auto cb = tiny_codebook();
  const auto hs = channels(cb, 2, 2, 3, 100);
  const auto sys = system_for(2, 2);
  OfflineConfig cfg;
  cfg.max_iterations = 15;
  cfg.restarts = 3;
  cfg.realizations = 2;
  cfg.seed = 5;
  const auto res = optimize_offline(cb, hs, sys, 2, cfg);
  const double best = exhaustive_best(cb, hs, sys, 2);
  CHECK(res.feasibility.ok());
  CHECK(res.divergence.empty());
  CHECK(res.rounded_objective <= best + 1e-9);
  CHECK(res.rounded_objective >= 0.8 * best);
  CHECK(res.rounded_objective == doctest::Approx(monte_carlo_capacity(res.selection, hs, sys)));

  // Relaxed objective never decreases within a restart.
  for (std::size_t i = 1; i < res.trace.size(); ++i) {
    if (res.trace[i].restart == res.trace[i - 1].restart) {
      CHECK(res.trace[i].objective >= res.trace[i - 1].objective - 1e-12);
    }
  }
  const auto again = optimize_offline(cb, hs, sys, 2, cfg);
  CHECK(again.selection.positions == res.selection.positions);
  CHECK(again.selection.rotations == res.selection.rotations);
  CHECK(again.rounded_objective == res.rounded_objective);

  std::ostringstream csv;
  write_trace_csv(csv, res.trace);
  CHECK(csv.str().rfind("restart,iteration,objective,step,lp_objective,cuts,seconds\n", 0) == 0);

  CHECK_THROWS(optimize_offline(cb, hs, sys, 5, cfg));
}

TEST_CASE("single candidate") {
  const auto cb = grid_codebook(1.0, 1, GridRotations{1, 1, 1}, default_min_distance(kLambda), kLambda);
  const auto hs = channels(cb, 2, 1, 3, 7);
  OfflineConfig cfg;
  cfg.max_iterations = 3;
  cfg.restarts = 1;
  const auto res = optimize_offline(cb, hs, system_for(2, 1), 1, cfg);
  CHECK(res.selection.positions == std::vector<int>{0});
  CHECK(res.selection.rotations == std::vector<int>{0});
}

}
