#include "sixdma/lp.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace sixdma {

LinearProgram LinearProgram::with_variables(Eigen::Index n) {
  LinearProgram lp;
  lp.objective = Eigen::VectorXd::Zero(n);
  lp.A.resize(0, n);
  lp.rhs.resize(0);
  lp.lower = Eigen::VectorXd::Zero(n);
  lp.upper = Eigen::VectorXd::Constant(n, kInfinity);
  return lp;
}

void LinearProgram::add_row(const Eigen::RowVectorXd& row, RowSense s, double b) {
  if (row.size() != num_variables()) throw std::invalid_argument("add_row: wrong row length");
  A.conservativeResize(A.rows() + 1, Eigen::NoChange);
  A.row(A.rows() - 1) = row;
  rhs.conservativeResize(rhs.size() + 1);
  rhs(rhs.size() - 1) = b;
  sense.push_back(s);
}

std::string to_string(LpStatus status) {
  switch (status) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
    case LpStatus::IterationLimit: return "iteration limit";
  }
  return "unknown";
}

namespace {

constexpr double kZero = 1e-12;

struct PendingRow {
  Eigen::RowVectorXd row;
  RowSense sense;
  double rhs;
};

}  // namespace

// Tableau t: rows 0..m-1 hold B^-1 [a0 | b0], row m the reduced costs and
// the objective value. a0 and b0 keep the rows as first entered, with their
// slack and artificial columns, so the tableau can be rebuilt from a basis.
struct IncrementalSimplex::Impl {
  Eigen::Index n;
  SimplexOptions opt;
  Eigen::MatrixXd a0;
  Eigen::VectorXd b0;
  Eigen::VectorXd cost;  ///< per variable
  std::vector<Eigen::Index> var_col;
  std::vector<Eigen::Index> col_var;  ///< -1 for slack and artificial columns
  Eigen::MatrixXd t;
  std::vector<int> basis;
  std::vector<Eigen::Index> identity;
  std::vector<bool> allowed;
  std::vector<PendingRow> pending;
  bool started{false};
  bool infeasible{false};
  bool objective_dirty{true};
  int iterations{0};
  int since_refactor{0};

  Impl(Eigen::Index n_, const SimplexOptions& o) : n(n_), opt(o), cost(Eigen::VectorXd::Zero(n_)) {}

  [[nodiscard]] Eigen::VectorXd column_cost() const {
    Eigen::VectorXd c = Eigen::VectorXd::Zero(cols());
    for (Eigen::Index j = 0; j < n; ++j) c(var_col[j]) = cost(j);
    return c;
  }

  [[nodiscard]] Eigen::Index m() const { return t.rows() - 1; }
  [[nodiscard]] Eigen::Index cols() const { return t.cols() - 1; }

  void pivot(Eigen::Index r, Eigen::Index c) {
    t.row(r) /= t(r, c);
    t(r, c) = 1.0;
    for (Eigen::Index i = 0; i < t.rows(); ++i) {
      if (i == r) continue;
      const double f = t(i, c);
      if (f == 0.0) continue;
      t.row(i) -= f * t.row(r);
      t(i, c) = 0.0;
    }
    const Eigen::Index rc = cols();
    for (Eigen::Index i = 0; i < m(); ++i) {
      if (std::abs(t(i, rc)) < kZero) t(i, rc) = 0.0;
    }
    basis[r] = static_cast<int>(c);
    ++iterations;
    ++since_refactor;
  }

  // Row p precedes row q when its identity-column entries, scaled by the
  // pivot column, are lexicographically smaller.
  [[nodiscard]] bool lex_less(Eigen::Index p, Eigen::Index q, Eigen::Index enter) const {
    const double ap = t(p, enter);
    const double aq = t(q, enter);
    for (Eigen::Index c : identity) {
      const double x = t(p, c) / ap;
      const double y = t(q, c) / aq;
      if (x < y - kZero) return true;
      if (x > y + kZero) return false;
    }
    return basis[p] < basis[q];
  }

  LpStatus primal(int limit) {
    const Eigen::Index rows = m();
    const Eigen::Index rc = cols();
    std::vector<Eigen::Index> ties;
    for (int it = 0; it < limit; ++it) {
      Eigen::Index enter = -1;
      double best = -opt.tolerance;
      for (Eigen::Index j = 0; j < rc; ++j) {
        if (allowed[j] && t(rows, j) < best) {
          enter = j;
          best = t(rows, j);
        }
      }
      if (enter < 0) return LpStatus::Optimal;

      double ratio = std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < rows; ++i) {
        const double a = t(i, enter);
        if (a > opt.tolerance) ratio = std::min(ratio, std::max(t(i, rc), 0.0) / a);
      }
      if (!std::isfinite(ratio)) return LpStatus::Unbounded;
      ties.clear();
      for (Eigen::Index i = 0; i < rows; ++i) {
        const double a = t(i, enter);
        if (a > opt.tolerance && std::max(t(i, rc), 0.0) / a <= ratio + kZero * (1.0 + ratio)) {
          ties.push_back(i);
        }
      }
      Eigen::Index leave = ties.front();
      for (std::size_t k = 1; k < ties.size(); ++k) {
        if (lex_less(ties[k], leave, enter)) leave = ties[k];
      }
      pivot(leave, enter);
    }
    return LpStatus::IterationLimit;
  }

  LpStatus dual(int limit) {
    const Eigen::Index rows = m();
    const Eigen::Index rc = cols();
    for (int it = 0; it < limit; ++it) {
      Eigen::Index leave = -1;
      double worst = -opt.tolerance;
      for (Eigen::Index i = 0; i < rows; ++i) {
        if (t(i, rc) < worst) {
          worst = t(i, rc);
          leave = i;
        }
      }
      if (leave < 0) return LpStatus::Optimal;
      Eigen::Index enter = -1;
      double best = std::numeric_limits<double>::infinity();
      double size = 0;
      for (Eigen::Index j = 0; j < rc; ++j) {
        const double a = t(leave, j);
        if (!allowed[j] || a >= -opt.tolerance) continue;
        const double ratio = std::max(t(rows, j), 0.0) / -a;
        if (ratio < best - kZero || (ratio <= best + kZero && -a > size)) {
          best = std::min(best, ratio);
          size = -a;
          enter = j;
        }
      }
      if (enter < 0) return LpStatus::Infeasible;
      pivot(leave, enter);
    }
    return LpStatus::IterationLimit;
  }

  void price() {
    const Eigen::Index rows = m();
    const Eigen::Index rc = cols();
    t.row(rows).setZero();
    t.row(rows).head(rc) = -column_cost().transpose();
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double f = t(rows, basis[i]);
      if (f != 0.0) t.row(rows) -= f * t.row(i);
    }
    objective_dirty = false;
  }

  void refactor() {
    const Eigen::Index rows = m();
    const Eigen::Index rc = cols();
    since_refactor = 0;
    if (rows == 0) return;
    Eigen::MatrixXd bm(rows, rows);
    for (Eigen::Index i = 0; i < rows; ++i) bm.col(i) = a0.col(basis[i]);
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(bm);
    if (!(std::abs(lu.determinant()) > 0)) return;
    t.topLeftCorner(rows, rc) = lu.solve(a0);
    t.col(rc).head(rows) = lu.solve(b0);
    t.topRows(rows) = t.topRows(rows).unaryExpr([](double v) { return std::abs(v) < kZero ? 0.0 : v; });
    price();
  }

  // Two-phase start over the pending rows.
  LpStatus cold_start(int limit) {
    std::vector<PendingRow> rows = std::move(pending);
    pending.clear();
    const auto count = static_cast<Eigen::Index>(rows.size());
    for (auto& r : rows) {
      if (r.rhs < 0) {
        r.row = -r.row;
        r.rhs = -r.rhs;
        if (r.sense == RowSense::LessEqual) r.sense = RowSense::GreaterEqual;
        else if (r.sense == RowSense::GreaterEqual) r.sense = RowSense::LessEqual;
      }
    }
    Eigen::Index slack = 0, artificial = 0;
    for (const auto& r : rows) {
      if (r.sense != RowSense::Equal) ++slack;
      if (r.sense != RowSense::LessEqual) ++artificial;
    }
    const Eigen::Index first_art = n + slack;
    const Eigen::Index rc = n + slack + artificial;
    a0 = Eigen::MatrixXd::Zero(count, rc);
    b0.resize(count);
    basis.assign(count, 0);
    identity.assign(count, 0);
    Eigen::Index next_slack = n, next_art = first_art;
    for (Eigen::Index i = 0; i < count; ++i) {
      a0.row(i).head(rows[i].row.size()) = rows[i].row;
      b0(i) = rows[i].rhs;
      if (rows[i].sense == RowSense::LessEqual) {
        a0(i, next_slack) = 1.0;
        identity[i] = next_slack;
        basis[i] = static_cast<int>(next_slack++);
      } else {
        if (rows[i].sense == RowSense::GreaterEqual) a0(i, next_slack++) = -1.0;
        a0(i, next_art) = 1.0;
        identity[i] = next_art;
        basis[i] = static_cast<int>(next_art++);
      }
    }
    t = Eigen::MatrixXd::Zero(count + 1, rc + 1);
    t.topLeftCorner(count, rc) = a0;
    t.col(rc).head(count) = b0;
    var_col.resize(n);
    col_var.assign(rc, -1);
    for (Eigen::Index j = 0; j < n; ++j) {
      var_col[j] = j;
      col_var[j] = j;
    }
    allowed.assign(rc, true);
    started = true;

    if (artificial > 0) {
      for (Eigen::Index j = first_art; j < rc; ++j) t(count, j) = 1.0;
      for (Eigen::Index i = 0; i < count; ++i) {
        if (basis[i] >= first_art) t.row(count) -= t.row(i);
      }
      const int before = iterations;
      const LpStatus s = primal(limit);
      if (s == LpStatus::IterationLimit) return s;
      const double scale = 1.0 + b0.cwiseAbs().maxCoeff();
      if (t(count, rc) < -opt.tolerance * scale) {
        infeasible = true;
        return LpStatus::Infeasible;
      }
      limit -= iterations - before;
      for (Eigen::Index i = 0; i < count; ++i) {
        if (basis[i] < first_art || first_art == 0) continue;
        Eigen::Index j = 0;
        const double a = t.row(i).head(first_art).cwiseAbs().maxCoeff(&j);
        if (a > opt.tolerance) pivot(i, j);
      }
      for (Eigen::Index j = first_art; j < rc; ++j) allowed[j] = false;
    }
    price();
    return primal(limit);
  }

  // Appends pending rows as `<=` rows with a basic slack each.
  void append_pending() {
    std::vector<std::pair<Eigen::RowVectorXd, double>> rows;
    for (auto& p : pending) {
      const Eigen::Index given = p.row.size();
      p.row.conservativeResize(n);
      p.row.tail(n - given).setZero();
      if (p.sense != RowSense::GreaterEqual) rows.emplace_back(p.row, p.rhs);
      if (p.sense != RowSense::LessEqual) rows.emplace_back(-p.row, -p.rhs);
    }
    pending.clear();
    const Eigen::Index k = static_cast<Eigen::Index>(rows.size());
    const Eigen::Index rows0 = m();
    const Eigen::Index rc0 = cols();
    const Eigen::Index rc = rc0 + k;

    Eigen::MatrixXd nt = Eigen::MatrixXd::Zero(rows0 + k + 1, rc + 1);
    nt.topLeftCorner(rows0, rc0) = t.topLeftCorner(rows0, rc0);
    nt.col(rc).head(rows0) = t.col(rc0).head(rows0);
    nt.row(rows0 + k).head(rc0) = t.row(rows0).head(rc0);
    nt(rows0 + k, rc) = t(rows0, rc0);

    Eigen::MatrixXd na = Eigen::MatrixXd::Zero(rows0 + k, rc);
    na.topLeftCorner(rows0, rc0) = a0;
    Eigen::VectorXd nb(rows0 + k);
    nb.head(rows0) = b0;

    for (Eigen::Index r = 0; r < k; ++r) {
      const Eigen::Index i = rows0 + r;
      for (Eigen::Index j = 0; j < n; ++j) na(i, var_col[j]) = rows[r].first(j);
      na(i, rc0 + r) = 1.0;
      nb(i) = rows[r].second;
      nt.row(i).head(rc) = na.row(i);
      nt(i, rc) = nb(i);
      for (Eigen::Index q = 0; q < rows0; ++q) {
        const double f = nt(i, basis[q]);
        if (f != 0.0) nt.row(i) -= f * nt.row(q);
      }
      basis.push_back(static_cast<int>(rc0 + r));
      identity.push_back(rc0 + r);
      allowed.push_back(true);
      col_var.push_back(-1);
    }
    t = std::move(nt);
    a0 = std::move(na);
    b0 = std::move(nb);
  }
};

IncrementalSimplex::IncrementalSimplex(Eigen::Index num_variables, const SimplexOptions& options)
    : impl_(std::make_unique<Impl>(num_variables, options)) {}
IncrementalSimplex::~IncrementalSimplex() = default;
IncrementalSimplex::IncrementalSimplex(IncrementalSimplex&&) noexcept = default;
IncrementalSimplex& IncrementalSimplex::operator=(IncrementalSimplex&&) noexcept = default;

void IncrementalSimplex::add_row(const Eigen::RowVectorXd& row, RowSense sense, double rhs) {
  if (row.size() != impl_->n) throw std::invalid_argument("add_row: wrong row length");
  impl_->pending.push_back({row, sense, rhs});
}

void IncrementalSimplex::set_objective(const Eigen::VectorXd& c) {
  if (c.size() != impl_->n) throw std::invalid_argument("set_objective: wrong length");
  impl_->cost.head(impl_->n) = c;
  impl_->objective_dirty = true;
}

LpStatus IncrementalSimplex::solve() {
  Impl& s = *impl_;
  if (s.infeasible) return LpStatus::Infeasible;
  const int limit = s.opt.max_iterations;
  if (!s.started) return s.cold_start(limit);
  if (s.since_refactor > s.opt.refactor_interval) s.refactor();
  const int before = s.iterations;
  if (s.objective_dirty) {
    s.price();
    const LpStatus st = s.primal(limit);
    if (st != LpStatus::Optimal) return st;
  }
  if (!s.pending.empty()) {
    s.append_pending();
    const LpStatus st = s.dual(limit - (s.iterations - before));
    if (st == LpStatus::Infeasible) s.infeasible = true;
    if (st != LpStatus::Optimal) return st;
  }
  return s.primal(limit - (s.iterations - before));
}

Eigen::VectorXd IncrementalSimplex::x() const {
  const Impl& s = *impl_;
  Eigen::VectorXd y = Eigen::VectorXd::Zero(s.n);
  if (!s.started) return y;
  const Eigen::Index rc = s.cols();
  for (Eigen::Index i = 0; i < s.m(); ++i) {
    const Eigen::Index v = s.col_var[s.basis[i]];
    if (v >= 0) y(v) = std::max(s.t(i, rc), 0.0);
  }
  return y;
}

double IncrementalSimplex::objective() const { return impl_->cost.head(impl_->n).dot(x()); }
int IncrementalSimplex::iterations() const { return impl_->iterations; }
Eigen::Index IncrementalSimplex::num_variables() const { return impl_->n; }
Eigen::Index IncrementalSimplex::num_rows() const {
  return (impl_->started ? impl_->m() : 0) + static_cast<Eigen::Index>(impl_->pending.size());
}

ActiveSetSimplex::ActiveSetSimplex(Eigen::VectorXd lower, Eigen::VectorXd upper,
                                   const SimplexOptions& options)
    : lower_(std::move(lower)), upper_(std::move(upper)), options_(options) {
  const Eigen::Index n = lower_.size();
  if (upper_.size() != n) throw std::invalid_argument("ActiveSetSimplex: bound sizes differ");
  for (Eigen::Index j = 0; j < n; ++j) {
    if (!std::isfinite(lower_(j)) || !std::isfinite(upper_(j)) || upper_(j) < lower_(j)) {
      throw std::invalid_argument("ActiveSetSimplex: bounds must be finite with lower <= upper");
    }
  }
  c_ = Eigen::VectorXd::Zero(n);
  a_.resize(16, n);
  b_.resize(16);
  in_active_.assign(2 * n, 0);
}

void ActiveSetSimplex::add_row(const Eigen::RowVectorXd& row, RowSense sense, double rhs) {
  const Eigen::Index n = num_variables();
  if (row.size() != n) throw std::invalid_argument("add_row: wrong row length");
  if (rows_ == a_.rows()) {
    a_.conservativeResize(2 * a_.rows(), Eigen::NoChange);
    b_.conservativeResize(2 * b_.size());
  }
  const double sign = sense == RowSense::GreaterEqual ? -1.0 : 1.0;
  a_.row(rows_) = sign * row;
  b_(rows_) = sign * rhs;
  equality_.push_back(sense == RowSense::Equal);
  in_active_.push_back(0);
  ++rows_;
}

void ActiveSetSimplex::set_objective(const Eigen::VectorXd& c) {
  if (c.size() != num_variables()) throw std::invalid_argument("set_objective: wrong length");
  c_ = c;
}

Eigen::RowVectorXd ActiveSetSimplex::normal(const Active& a) const {
  const Eigen::Index n = num_variables();
  if (a.id < 2 * n) {
    Eigen::RowVectorXd e = Eigen::RowVectorXd::Zero(n);
    e(a.id % n) = a.id < n ? -1.0 : 1.0;
    return e;
  }
  return a.sign * a_.row(a.id - 2 * n);
}

double ActiveSetSimplex::bound_rhs(const Active& a) const {
  const Eigen::Index n = num_variables();
  if (a.id < n) return -lower_(a.id);
  if (a.id < 2 * n) return upper_(a.id - n);
  return a.sign * b_(a.id - 2 * n);
}

bool ActiveSetSimplex::is_equality(const Active& a) const {
  const Eigen::Index n = num_variables();
  return a.id >= 2 * n && equality_[a.id - 2 * n];
}

void ActiveSetSimplex::reset_to_bounds() {
  const Eigen::Index n = num_variables();
  std::fill(in_active_.begin(), in_active_.end(), 0);
  active_.clear();
  inverse_ = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const Eigen::Index id = c_(j) > 0 ? n + j : j;
    active_.push_back({id, 1.0});
    in_active_[id] = 1;
    inverse_(j, j) = c_(j) > 0 ? 1.0 : -1.0;
  }
  updates_ = 0;
}

void ActiveSetSimplex::refactor() {
  const Eigen::Index n = num_variables();
  Eigen::MatrixXd normals(n, n);
  for (Eigen::Index k = 0; k < n; ++k) normals.row(k) = normal(active_[k]);
  inverse_ = normals.partialPivLu().inverse();
  updates_ = 0;
}

// Sherman-Morrison update for row k of the active matrix.
void ActiveSetSimplex::replace(Eigen::Index k, const Active& entering) {
  const Eigen::RowVectorXd a = normal(entering);
  const Eigen::VectorXd v = inverse_.col(k);
  const double denom = a.dot(v);
  Eigen::RowVectorXd w = a * inverse_;
  w(k) -= 1.0;
  inverse_.noalias() -= v * (w / denom);
  in_active_[active_[k].id] = 0;
  in_active_[entering.id] = 1;
  active_[k] = entering;
  ++iterations_;
  if (++updates_ > 100) refactor();
}

void ActiveSetSimplex::update_point() {
  const Eigen::Index n = num_variables();
  Eigen::VectorXd r(n);
  for (Eigen::Index k = 0; k < n; ++k) r(k) = bound_rhs(active_[k]);
  x_ = inverse_ * r;
  lambda_ = inverse_.transpose() * c_;
}

LpStatus ActiveSetSimplex::solve() {
  if (infeasible_) return LpStatus::Infeasible;
  const Eigen::Index n = num_variables();
  if (!started_) {
    reset_to_bounds();
    started_ = true;
  }
  const double tol = options_.tolerance;
  int degenerate = 0;
  for (int it = 0; it < options_.max_iterations; ++it) {
    update_point();
    const bool bland = degenerate > 50;

    // Most violated bound or row; the smallest id under Bland's rule.
    Active enter{-1, 1.0};
    double worst = 0;
    auto consider = [&](Eigen::Index id, double sign, double violation) {
      if (bland ? enter.id < 0 : violation > worst) {
        enter = {id, sign};
        worst = violation;
      }
    };
    for (Eigen::Index j = 0; j < n; ++j) {
      const double scale = tol * (1.0 + std::abs(x_(j)));
      if (x_(j) < lower_(j) - scale) consider(j, 1.0, lower_(j) - x_(j));
      else if (x_(j) > upper_(j) + scale) consider(n + j, 1.0, x_(j) - upper_(j));
    }
    const Eigen::VectorXd residual = a_.topRows(rows_) * x_ - b_.head(rows_);
    for (Eigen::Index i = 0; i < rows_; ++i) {
      if (in_active_[2 * n + i]) continue;
      const double scale = tol * (1.0 + std::abs(b_(i)));
      if (residual(i) > scale) consider(2 * n + i, 1.0, residual(i));
      else if (equality_[i] && residual(i) < -scale) consider(2 * n + i, -1.0, -residual(i));
    }

    bool dual_feasible = true;
    for (Eigen::Index k = 0; k < n; ++k) {
      if (!is_equality(active_[k]) && lambda_(k) < -tol) dual_feasible = false;
    }

    if (enter.id >= 0) {
      if (!dual_feasible) {
        reset_to_bounds();
        degenerate = 0;
        continue;
      }
      // Dual step: the entering normal is mu^T N; the leaving row keeps
      // lambda - theta mu >= 0.
      const Eigen::VectorXd mu = inverse_.transpose() * normal(enter).transpose();
      Eigen::Index leave = -1;
      double theta = std::numeric_limits<double>::infinity();
      for (Eigen::Index k = 0; k < n; ++k) {
        if (is_equality(active_[k]) || mu(k) <= tol) continue;
        const double ratio = std::max(lambda_(k), 0.0) / mu(k);
        const bool better =
            leave < 0 || ratio < theta - kZero ||
            (ratio <= theta + kZero && (bland ? active_[k].id < active_[leave].id : mu(k) > mu(leave)));
        if (better) {
          leave = k;
          theta = std::min(theta, ratio);
        }
      }
      if (leave < 0) {
        infeasible_ = true;
        return LpStatus::Infeasible;
      }
      degenerate = theta <= kZero ? degenerate + 1 : 0;
      replace(leave, enter);
      continue;
    }

    // Primal feasible: release the most negative multiplier.
    Eigen::Index release = -1;
    for (Eigen::Index k = 0; k < n; ++k) {
      if (is_equality(active_[k]) || lambda_(k) >= -tol) continue;
      if (release < 0 || (bland ? active_[k].id < active_[release].id : lambda_(k) < lambda_(release))) {
        release = k;
      }
    }
    if (release < 0) return LpStatus::Optimal;
    const Eigen::VectorXd d = -inverse_.col(release);
    Active block{-1, 1.0};
    double step = std::numeric_limits<double>::infinity();
    double size = 0;
    auto limit = [&](Eigen::Index id, double sign, double t, double slope) {
      t = std::max(t, 0.0);
      const bool better = block.id < 0 || t < step - kZero ||
                          (t <= step + kZero && (bland ? id < block.id : slope > size));
      if (better) {
        block = {id, sign};
        step = std::min(step, t);
        size = slope;
      }
    };
    for (Eigen::Index j = 0; j < n; ++j) {
      if (d(j) > tol && !in_active_[n + j]) limit(n + j, 1.0, (upper_(j) - x_(j)) / d(j), d(j));
      if (d(j) < -tol && !in_active_[j]) limit(j, 1.0, (x_(j) - lower_(j)) / -d(j), -d(j));
    }
    const Eigen::VectorXd slope = a_.topRows(rows_) * d;
    for (Eigen::Index i = 0; i < rows_; ++i) {
      if (in_active_[2 * n + i]) continue;
      if (slope(i) > tol) {
        limit(2 * n + i, 1.0, -residual(i) / slope(i), slope(i));
      } else if (equality_[i] && slope(i) < -tol) {
        limit(2 * n + i, -1.0, residual(i) / -slope(i), -slope(i));
      }
    }
    if (block.id < 0) return LpStatus::Unbounded;
    degenerate = step <= kZero ? degenerate + 1 : 0;
    replace(release, block);
  }
  return LpStatus::IterationLimit;
}

LpResult solve(const LinearProgram& lp, const SimplexOptions& options) {
  const Eigen::Index n = lp.num_variables();
  if (lp.A.cols() != n || lp.rhs.size() != lp.A.rows() ||
      static_cast<Eigen::Index>(lp.sense.size()) != lp.A.rows() || lp.lower.size() != n ||
      lp.upper.size() != n) {
    throw std::invalid_argument("solve: inconsistent LP dimensions");
  }
  LpResult result;
  for (Eigen::Index j = 0; j < n; ++j) {
    if (!std::isfinite(lp.lower(j))) throw std::invalid_argument("solve: lower bounds must be finite");
    if (lp.upper(j) < lp.lower(j)) return result;
  }

  // Shift x = lower + y and append finite upper bounds as rows.
  IncrementalSimplex simplex(n, options);
  for (Eigen::Index i = 0; i < lp.A.rows(); ++i) {
    simplex.add_row(lp.A.row(i), lp.sense[i], lp.rhs(i) - lp.A.row(i).dot(lp.lower));
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    if (!std::isfinite(lp.upper(j))) continue;
    Eigen::RowVectorXd e = Eigen::RowVectorXd::Zero(n);
    e(j) = 1.0;
    simplex.add_row(e, RowSense::LessEqual, lp.upper(j) - lp.lower(j));
  }
  simplex.set_objective(lp.objective);
  result.status = simplex.solve();
  result.iterations = simplex.iterations();
  if (result.status != LpStatus::Optimal) return result;
  result.x = lp.lower + simplex.x();
  result.objective = lp.objective.dot(result.x);
  return result;
}

}  // namespace sixdma
