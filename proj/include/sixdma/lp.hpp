#pragma once

#include <Eigen/Dense>

#include <limits>
#include <memory>
#include <string>
#include <vector>

namespace sixdma {

enum class RowSense { LessEqual, GreaterEqual, Equal };

/// maximize c^T x  s.t.  A x (<=|>=|=) rhs,  lower <= x <= upper.
/// Lower bounds must be finite; upper bounds may be +inf.
struct LinearProgram {
  Eigen::VectorXd objective;
  Eigen::MatrixXd A;
  Eigen::VectorXd rhs;
  std::vector<RowSense> sense;
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;

  /// n variables with bounds [0, +inf) and no rows.
  static LinearProgram with_variables(Eigen::Index n);
  void add_row(const Eigen::RowVectorXd& row, RowSense s, double b);
  [[nodiscard]] Eigen::Index num_variables() const { return objective.size(); }
  [[nodiscard]] Eigen::Index num_rows() const { return A.rows(); }
};

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

struct LpResult {
  LpStatus status{LpStatus::Infeasible};
  Eigen::VectorXd x;
  double objective{0};
  int iterations{0};
};

struct SimplexOptions {
  double tolerance{1e-9};
  int max_iterations{200000};
  /// Pivots between rebuilds of the tableau from the stored rows.
  int refactor_interval{400};
};

/// maximize c^T x over x >= 0 and a growing set of rows, as a dense tableau.
/// The first solve() runs both phases; later rows are absorbed by dual
/// simplex pivots and a new objective by primal pivots from the current
/// vertex. Once a solve reports Infeasible every later solve does too.
class IncrementalSimplex {
 public:
  explicit IncrementalSimplex(Eigen::Index num_variables, const SimplexOptions& options = {});
  ~IncrementalSimplex();
  IncrementalSimplex(IncrementalSimplex&&) noexcept;
  IncrementalSimplex& operator=(IncrementalSimplex&&) noexcept;

  void add_row(const Eigen::RowVectorXd& row, RowSense sense, double rhs);
  void set_objective(const Eigen::VectorXd& c);
  LpStatus solve();

  [[nodiscard]] Eigen::VectorXd x() const;
  [[nodiscard]] double objective() const;
  /// Pivots over the lifetime of the object.
  [[nodiscard]] int iterations() const;
  [[nodiscard]] Eigen::Index num_variables() const;
  [[nodiscard]] Eigen::Index num_rows() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// maximize c^T x  s.t.  rows (<= or =),  lower <= x <= upper, with finite
/// bounds. Dual simplex over active sets: a vertex is given by n active rows
/// or bounds, and the inverse of their n x n matrix is kept up to date, so
/// rows may be many. Rows can be appended and the objective replaced between
/// solves; the last vertex is the warm start. Suited to cutting-plane loops.
class ActiveSetSimplex {
 public:
  ActiveSetSimplex(Eigen::VectorXd lower, Eigen::VectorXd upper, const SimplexOptions& options = {});

  void add_row(const Eigen::RowVectorXd& row, RowSense sense, double rhs);
  void set_objective(const Eigen::VectorXd& c);
  LpStatus solve();

  [[nodiscard]] const Eigen::VectorXd& x() const { return x_; }
  [[nodiscard]] double objective() const { return c_.dot(x_); }
  [[nodiscard]] int iterations() const { return iterations_; }
  [[nodiscard]] Eigen::Index num_variables() const { return lower_.size(); }
  [[nodiscard]] Eigen::Index num_rows() const { return rows_; }

 private:
  // Active entry: bound (lower or upper) of a variable or a row, with the
  // sign that turns it into `a^T x <= rhs`.
  struct Active {
    Eigen::Index id;  ///< 0..n-1 lower, n..2n-1 upper, 2n + i row i
    double sign;
  };

  [[nodiscard]] Eigen::RowVectorXd normal(const Active& a) const;
  [[nodiscard]] double bound_rhs(const Active& a) const;
  [[nodiscard]] bool is_equality(const Active& a) const;
  void reset_to_bounds();
  void refactor();
  void replace(Eigen::Index k, const Active& entering);
  void update_point();

  Eigen::VectorXd lower_;
  Eigen::VectorXd upper_;
  Eigen::VectorXd c_;
  SimplexOptions options_;
  Eigen::MatrixXd a_;  ///< rows_ used, capacity grows by doubling
  Eigen::VectorXd b_;
  std::vector<bool> equality_;
  Eigen::Index rows_{0};
  std::vector<Active> active_;
  std::vector<char> in_active_;  ///< per id
  Eigen::MatrixXd inverse_;      ///< inverse of the matrix of active normals
  Eigen::VectorXd x_;
  Eigen::VectorXd lambda_;
  bool started_{false};
  bool infeasible_{false};
  int iterations_{0};
  int updates_{0};
};

/// Dense two-phase tableau simplex. Dantzig pricing, lexicographic ratio
/// test.
LpResult solve(const LinearProgram& lp, const SimplexOptions& options = {});

std::string to_string(LpStatus status);

constexpr double kInfinity = std::numeric_limits<double>::infinity();

}  // namespace sixdma
