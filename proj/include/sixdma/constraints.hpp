#pragma once

#include "sixdma/capacity.hpp"
#include "sixdma/codebook.hpp"
#include "sixdma/lp.hpp"

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace sixdma {

/// U(m, l) = n(u_l^(m))^T q_m and D(m, m') = ||q_m - q_m'||.
struct ConstraintData {
  Eigen::MatrixXd U;
  Eigen::MatrixXd D;
  double d_min{0};

  [[nodiscard]] int M() const { return static_cast<int>(U.rows()); }
  [[nodiscard]] int L() const { return static_cast<int>(U.cols()); }
};

ConstraintData build_constraint_data(const PoseCodebook& codebook);

struct FeasibilityReport {
  std::vector<std::pair<int, int>> reflection;  ///< (b, v): v lies in front of surface b
  std::vector<int> blockage;                    ///< b faces the CPU
  std::vector<std::pair<int, int>> distance;    ///< b < v closer than d_min

  [[nodiscard]] bool reflection_ok() const { return reflection.empty(); }
  [[nodiscard]] bool blockage_ok() const { return blockage.empty(); }
  [[nodiscard]] bool distance_ok() const { return distance.empty(); }
  [[nodiscard]] bool ok() const { return reflection_ok() && blockage_ok() && distance_ok(); }
  [[nodiscard]] int violations() const {
    return static_cast<int>(reflection.size() + blockage.size() + distance.size());
  }
  /// One line, 1-based surface labels.
  [[nodiscard]] std::string summary() const;
};

/// Indicator form: (s_v - s_b)^T U g_b <= 0, s_b^T U g_b >= 0 and
/// s_b^T D s_v >= d_min, i.e. the rotation index j_b is read at position i_v
/// in the reflection rule.
FeasibilityReport check_feasible(const IndicatorState& state, const ConstraintData& data,
                                 double tolerance = 1e-9);

/// Pose form: n_b^T (q_v - q_b) <= 0 and n_b^T q_b >= 0 with n_b the normal of
/// the chosen candidate, plus the distance rule.
FeasibilityReport check_feasible_geometric(const IndicatorState& state, const PoseCodebook& codebook,
                                           double tolerance = 1e-9);

/// Human-readable differences between the two checks (empty if they agree).
std::vector<std::string> divergence(const FeasibilityReport& indicator,
                                    const FeasibilityReport& geometric);

enum class RowClass { Simplex, Distance, DistanceAux, Reflection, ReflectionAux, Blockage };
std::string to_string(RowClass cls);

struct SparseRow {
  std::vector<std::pair<int, double>> terms;
  RowSense sense{RowSense::LessEqual};
  double rhs{0};
  RowClass cls{RowClass::Simplex};

  [[nodiscard]] double activity(const Eigen::VectorXd& x) const;
  [[nodiscard]] double violation(const Eigen::VectorXd& x) const;
};

/// Linear system over x = [z; wbar; w] with box bounds [0, 1]:
///   simplex rows 1^T s_b = 1 and 1^T g_b = 1,
///   distance   sum D(m,l) wbar_{b,v,m,l} >= d_min            (b != v),
///   wbar <= s_b[m], wbar <= s_v[l], wbar >= s_b[m] + s_v[l] - 1,
///   reflection sum U w_{b,v} - sum U w_{b,b} <= 0           (b != v),
///   w <= s_v[m], w <= g_b[l], w >= s_v[m] + g_b[l] - 1        (all b, v),
///   blockage   sum U w_{b,b} >= 0.
class LinearizedConstraints {
 public:
  LinearizedConstraints(int B, int M, int L) : B_(B), M_(M), L_(L) {}

  [[nodiscard]] int B() const { return B_; }
  [[nodiscard]] int M() const { return M_; }
  [[nodiscard]] int L() const { return L_; }
  [[nodiscard]] int num_z() const { return B_ * (M_ + L_); }
  [[nodiscard]] int num_wbar() const { return B_ * (B_ - 1) * M_ * M_; }
  [[nodiscard]] int num_w() const { return B_ * B_ * M_ * L_; }
  [[nodiscard]] int num_variables() const { return num_z() + num_wbar() + num_w(); }

  [[nodiscard]] int s(int b, int m) const { return s_index(b, m, M_); }
  [[nodiscard]] int g(int b, int l) const { return g_index(b, l, B_, M_, L_); }
  /// Requires b != v.
  [[nodiscard]] int wbar(int b, int v, int m, int l) const {
    const int pair = b * (B_ - 1) + (v < b ? v : v - 1);
    return num_z() + (pair * M_ + m) * M_ + l;
  }
  [[nodiscard]] int w(int b, int v, int m, int l) const {
    return num_z() + num_wbar() + ((b * B_ + v) * M_ + m) * L_ + l;
  }

  [[nodiscard]] const std::vector<SparseRow>& rows() const { return rows_; }
  [[nodiscard]] int count(RowClass cls) const;
  void add(SparseRow row) { rows_.push_back(std::move(row)); }

  /// [z; wbar; w] from a relaxed state with filled auxiliaries.
  [[nodiscard]] Eigen::VectorXd pack(const RelaxedState& state) const;
  /// Indices of rows violated by more than `tolerance`, plus -1 for any
  /// variable outside [0, 1].
  [[nodiscard]] std::vector<int> violated_rows(const Eigen::VectorXd& x,
                                               double tolerance = 1e-9) const;
  [[nodiscard]] bool satisfied_by(const Eigen::VectorXd& x, double tolerance = 1e-9) const {
    return violated_rows(x, tolerance).empty();
  }

  [[nodiscard]] std::string variable_name(int j) const;
  /// Full LP with the objective acting on z only (auxiliaries cost 0).
  [[nodiscard]] LinearProgram to_lp(const Eigen::VectorXd& z_objective) const;
  /// CPLEX LP text format, maximizing z_objective (all zeros if empty).
  void write_lp(std::ostream& out, const Eigen::VectorXd& z_objective = {}) const;

 private:
  int B_;
  int M_;
  int L_;
  std::vector<SparseRow> rows_;
};

LinearizedConstraints linearize(int B, const ConstraintData& data);

/// Largest feasible auxiliaries for z: the values that maximize every
/// left-hand side of the distance, reflection and blockage rows over the
/// McCormick box. `wbar` and `w` use the layout of LinearizedConstraints.
void complete_auxiliaries(RelaxedState& state, const ConstraintData& data);

/// a0 + sum a_j z_j.
struct AffinePiece {
  double constant{0};
  std::vector<std::pair<int, double>> coefficients;

  [[nodiscard]] double value(const Eigen::VectorXd& z) const;
};

/// Constraint obtained by maximizing the auxiliaries out of one distance,
/// reflection or blockage row: constant + sum_t min_k piece_{t,k}(z) >= 0.
/// The function is concave and piecewise linear in z.
struct ProjectedConstraint {
  RowClass cls{RowClass::Distance};
  int b{0};
  int v{0};
  double constant{0};
  std::vector<std::vector<AffinePiece>> terms;

  [[nodiscard]] double value(const Eigen::VectorXd& z) const;
  /// The affine minorant active at z as a row `... >= 0` over z. Every z
  /// satisfying the constraint satisfies the row.
  [[nodiscard]] SparseRow cut(const Eigen::VectorXd& z) const;
};

/// Distance rows per unordered pair, reflection rows per ordered pair,
/// blockage rows per surface. Binary z is feasible iff every value >= 0.
std::vector<ProjectedConstraint> project(int B, const ConstraintData& data);

}  // namespace sixdma
