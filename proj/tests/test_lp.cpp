#include "sixdma/lp.hpp"

#include <doctest.h>

#include <random>

using namespace sixdma;

namespace {

struct BoxLp {
  Eigen::VectorXd c;
  Eigen::MatrixXd A;  // A x <= b
  Eigen::VectorXd b;
  Eigen::VectorXd upper;
};

// Optimum over every vertex of {A x <= b, 0 <= x <= upper}; -inf if empty.
double brute_force(const BoxLp& p) {
  const int n = static_cast<int>(p.c.size());
  const int m = static_cast<int>(p.A.rows());
  const int total = m + 2 * n;
  Eigen::MatrixXd G(total, n);
  Eigen::VectorXd h(total);
  G.topRows(m) = p.A;
  h.head(m) = p.b;
  G.middleRows(m, n) = -Eigen::MatrixXd::Identity(n, n);
  h.segment(m, n).setZero();
  G.bottomRows(n) = Eigen::MatrixXd::Identity(n, n);
  h.tail(n) = p.upper;
  double best = -kInfinity;
  std::vector<int> pick(n);
  std::vector<bool> mask(total, false);
  std::fill(mask.begin(), mask.begin() + n, true);
  std::sort(mask.begin(), mask.end());
  do {
    Eigen::MatrixXd S(n, n);
    Eigen::VectorXd t(n);
    int k = 0;
    for (int i = 0; i < total; ++i) {
      if (mask[i]) {
        S.row(k) = G.row(i);
        t(k++) = h(i);
      }
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(S);
    if (lu.rank() < n) continue;
    const Eigen::VectorXd x = lu.solve(t);
    if (((G * x - h).array() <= 1e-9).all()) best = std::max(best, p.c.dot(x));
  } while (std::next_permutation(mask.begin(), mask.end()));
  return best;
}

LinearProgram to_program(const BoxLp& p) {
  auto lp = LinearProgram::with_variables(p.c.size());
  lp.objective = p.c;
  lp.upper = p.upper;
  for (Eigen::Index i = 0; i < p.A.rows(); ++i) lp.add_row(p.A.row(i), RowSense::LessEqual, p.b(i));
  return lp;
}

BoxLp random_lp(std::mt19937_64& rng, int n, int m) {
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0.2, 1.5);
  BoxLp p{Eigen::VectorXd(n), Eigen::MatrixXd(m, n), Eigen::VectorXd(m), Eigen::VectorXd(n)};
  for (int j = 0; j < n; ++j) {
    p.c(j) = g(rng);
    p.upper(j) = u(rng);
  }
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) p.A(i, j) = g(rng);
    p.b(i) = g(rng);
  }
  return p;
}

}  // namespace

TEST_SUITE("lp") {

TEST_CASE("textbook LP") {
  // max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18 -> (2, 6), 36
  auto lp = LinearProgram::with_variables(2);
  lp.objective << 3, 5;
  lp.add_row(Eigen::RowVector2d(1, 0), RowSense::LessEqual, 4);
  lp.add_row(Eigen::RowVector2d(0, 2), RowSense::LessEqual, 12);
  lp.add_row(Eigen::RowVector2d(3, 2), RowSense::LessEqual, 18);
  const auto r = solve(lp);
  REQUIRE(r.status == LpStatus::Optimal);
  CHECK(r.objective == doctest::Approx(36));
  CHECK(r.x(0) == doctest::Approx(2));
  CHECK(r.x(1) == doctest::Approx(6));
  CHECK(to_string(r.status) == "optimal");
}

TEST_CASE("equality, >= rows and bounds") {
  auto lp = LinearProgram::with_variables(3);
  lp.objective << 1, 1, -1;
  lp.lower << 0, 1, 0;
  lp.upper << 2, kInfinity, 5;
  lp.add_row(Eigen::RowVector3d(1, 1, 1), RowSense::Equal, 4);
  lp.add_row(Eigen::RowVector3d(0, 0, 1), RowSense::GreaterEqual, 0.5);
  const auto r = solve(lp);
  REQUIRE(r.status == LpStatus::Optimal);
  CHECK(r.objective == doctest::Approx(3.5 - 0.5));
  CHECK(r.x(2) == doctest::Approx(0.5));
  CHECK(r.x.sum() == doctest::Approx(4));
}

TEST_CASE("infeasible and unbounded") {
  auto lp = LinearProgram::with_variables(2);
  lp.objective << 1, 0;
  lp.add_row(Eigen::RowVector2d(1, 1), RowSense::LessEqual, 1);
  lp.add_row(Eigen::RowVector2d(1, 1), RowSense::GreaterEqual, 2);
  CHECK(solve(lp).status == LpStatus::Infeasible);

  auto ub = LinearProgram::with_variables(2);
  ub.objective << 1, 1;
  ub.add_row(Eigen::RowVector2d(1, -1), RowSense::LessEqual, 1);
  CHECK(solve(ub).status == LpStatus::Unbounded);

  ActiveSetSimplex as(Eigen::VectorXd::Zero(2), Eigen::VectorXd::Ones(2));
  as.set_objective(Eigen::Vector2d(1, 1));
  as.add_row(Eigen::RowVector2d(1, 1), RowSense::GreaterEqual, 3);
  CHECK(as.solve() == LpStatus::Infeasible);
  CHECK(as.solve() == LpStatus::Infeasible);

  IncrementalSimplex inc(2);
  inc.set_objective(Eigen::Vector2d(1, 1));
  inc.add_row(Eigen::RowVector2d(1, 0), RowSense::LessEqual, 1);
  CHECK(inc.solve() == LpStatus::Unbounded);
}

TEST_CASE("random box LPs against vertex enumeration") {
  std::mt19937_64 rng(11);
  int optimal = 0;
  for (int t = 0; t < 150; ++t) {
    const auto p = random_lp(rng, 3, 4);
    const double best = brute_force(p);
    const auto r = solve(to_program(p));

    ActiveSetSimplex as(Eigen::VectorXd::Zero(3), p.upper);
    as.set_objective(p.c);
    for (int i = 0; i < 4; ++i) as.add_row(p.A.row(i), RowSense::LessEqual, p.b(i));
    const auto s = as.solve();

    if (best == -kInfinity) {
      CHECK(r.status == LpStatus::Infeasible);
      CHECK(s == LpStatus::Infeasible);
      continue;
    }
    ++optimal;
    REQUIRE(r.status == LpStatus::Optimal);
    REQUIRE(s == LpStatus::Optimal);
    CHECK(r.objective == doctest::Approx(best).epsilon(1e-7));
    CHECK(as.objective() == doctest::Approx(best).epsilon(1e-7));
    CHECK(((p.A * as.x() - p.b).array() <= 1e-8).all());
  }
  CHECK(optimal > 30);
}

TEST_CASE("warm starts match cold solves") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  const int n = 6;
  Eigen::VectorXd upper = Eigen::VectorXd::Ones(n);
  ActiveSetSimplex as(Eigen::VectorXd::Zero(n), upper);
  IncrementalSimplex inc(n);
  for (int j = 0; j < n; ++j) {
    Eigen::RowVectorXd e = Eigen::RowVectorXd::Zero(n);
    e(j) = 1;
    inc.add_row(e, RowSense::LessEqual, 1);
  }
  BoxLp p{Eigen::VectorXd(n), Eigen::MatrixXd(0, n), Eigen::VectorXd(0), upper};
  for (int round = 0; round < 25; ++round) {
    for (int j = 0; j < n; ++j) p.c(j) = g(rng);
    Eigen::RowVectorXd row(n);
    for (int j = 0; j < n; ++j) row(j) = g(rng);
    const double rhs = 0.5 + std::abs(g(rng));  // keeps x = 0 feasible
    p.A.conservativeResize(p.A.rows() + 1, Eigen::NoChange);
    p.A.bottomRows(1) = row;
    p.b.conservativeResize(p.b.size() + 1);
    p.b(p.b.size() - 1) = rhs;

    as.add_row(row, RowSense::LessEqual, rhs);
    as.set_objective(p.c);
    inc.add_row(row, RowSense::LessEqual, rhs);
    inc.set_objective(p.c);
    const auto cold = solve(to_program(p));
    REQUIRE(cold.status == LpStatus::Optimal);
    REQUIRE(as.solve() == LpStatus::Optimal);
    REQUIRE(inc.solve() == LpStatus::Optimal);
    CHECK(as.objective() == doctest::Approx(cold.objective).epsilon(1e-8));
    CHECK(inc.objective() == doctest::Approx(cold.objective).epsilon(1e-8));
  }
  CHECK(as.num_rows() == 25);
  CHECK(inc.num_rows() == 25 + n);
  CHECK(inc.num_variables() == n);
}

TEST_CASE("degenerate LP terminates") {
  // Many rows through the optimal vertex.
  const int n = 4;
  ActiveSetSimplex as(Eigen::VectorXd::Zero(n), Eigen::VectorXd::Ones(n));
  auto lp = LinearProgram::with_variables(n);
  lp.upper = Eigen::VectorXd::Ones(n);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0, 1);
  for (int i = 0; i < 40; ++i) {
    Eigen::RowVectorXd row(n);
    for (int j = 0; j < n; ++j) row(j) = u(rng);
    const double rhs = row.sum() * 0.5;
    as.add_row(row, RowSense::LessEqual, rhs);
    lp.add_row(row, RowSense::LessEqual, rhs);
  }
  lp.objective = Eigen::VectorXd::Ones(n);
  as.set_objective(lp.objective);
  const auto r = solve(lp);
  REQUIRE(as.solve() == LpStatus::Optimal);
  REQUIRE(r.status == LpStatus::Optimal);
  CHECK(as.objective() == doctest::Approx(r.objective).epsilon(1e-8));
}

TEST_CASE("input checks") {
  auto lp = LinearProgram::with_variables(2);
  CHECK_THROWS(lp.add_row(Eigen::RowVector3d(1, 1, 1), RowSense::LessEqual, 1));
  ActiveSetSimplex as(Eigen::VectorXd::Zero(2), Eigen::VectorXd::Ones(2));
  CHECK_THROWS(as.add_row(Eigen::RowVector3d(1, 1, 1), RowSense::LessEqual, 1));
}

}
