#include "sixdma/constraints.hpp"

#include <algorithm>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace sixdma {

ConstraintData build_constraint_data(const PoseCodebook& codebook) {
  const int M = codebook.num_positions();
  const int L = codebook.num_rotations();
  ConstraintData data;
  data.U.resize(M, L);
  data.D = Eigen::MatrixXd::Zero(M, M);
  data.d_min = codebook.min_distance();
  for (int m = 0; m < M; ++m) {
    for (int l = 0; l < L; ++l) {
      const auto& pose = codebook.pose(m, l);
      data.U(m, l) = pose.normal().dot(pose.position);
    }
    for (int k = m + 1; k < M; ++k) {
      data.D(m, k) = data.D(k, m) = (codebook.position(m) - codebook.position(k)).norm();
    }
  }
  return data;
}

std::string FeasibilityReport::summary() const {
  if (ok()) return "feasible";
  std::ostringstream out;
  auto pairs = [&](const char* name, const std::vector<std::pair<int, int>>& v) {
    if (v.empty()) return;
    out << name << ':';
    for (auto [b, w] : v) out << " (" << b + 1 << ',' << w + 1 << ')';
    out << "; ";
  };
  pairs("reflection", reflection);
  if (!blockage.empty()) {
    out << "blockage:";
    for (int b : blockage) out << ' ' << b + 1;
    out << "; ";
  }
  pairs("distance", distance);
  std::string s = out.str();
  return s.substr(0, s.size() - 2);
}

FeasibilityReport check_feasible(const IndicatorState& state, const ConstraintData& data,
                                 double tolerance) {
  state.validate();
  if (state.M != data.M() || state.L != data.L()) {
    throw std::invalid_argument("check_feasible: state does not match the constraint data");
  }
  const int B = state.surfaces();
  const auto& i = state.positions;
  const auto& j = state.rotations;
  FeasibilityReport report;
  for (int b = 0; b < B; ++b) {
    if (data.U(i[b], j[b]) < -tolerance) report.blockage.push_back(b);
    for (int v = 0; v < B; ++v) {
      if (v == b) continue;
      if (data.U(i[v], j[b]) - data.U(i[b], j[b]) > tolerance) report.reflection.emplace_back(b, v);
      if (v > b && data.D(i[b], i[v]) < data.d_min - tolerance) report.distance.emplace_back(b, v);
    }
  }
  return report;
}

FeasibilityReport check_feasible_geometric(const IndicatorState& state, const PoseCodebook& codebook,
                                           double tolerance) {
  state.validate();
  const int B = state.surfaces();
  FeasibilityReport report;
  for (int b = 0; b < B; ++b) {
    const auto& pose = codebook.pose(state.positions[b], state.rotations[b]);
    const Eigen::Vector3d n = pose.normal();
    if (n.dot(pose.position) < -tolerance) report.blockage.push_back(b);
    for (int v = 0; v < B; ++v) {
      if (v == b) continue;
      const Position3& qv = codebook.position(state.positions[v]);
      if (n.dot(qv - pose.position) > tolerance) report.reflection.emplace_back(b, v);
      if (v > b && (qv - pose.position).norm() < codebook.min_distance() - tolerance) {
        report.distance.emplace_back(b, v);
      }
    }
  }
  return report;
}

std::vector<std::string> divergence(const FeasibilityReport& indicator,
                                    const FeasibilityReport& geometric) {
  std::vector<std::string> out;
  auto compare = [&](const char* name, const auto& a, const auto& b) {
    if (a != b) {
      out.push_back(std::string(name) + ": indicator form reports " + std::to_string(a.size()) +
                    ", pose form reports " + std::to_string(b.size()));
    }
  };
  compare("reflection", indicator.reflection, geometric.reflection);
  compare("blockage", indicator.blockage, geometric.blockage);
  compare("distance", indicator.distance, geometric.distance);
  return out;
}

std::string to_string(RowClass cls) {
  switch (cls) {
    case RowClass::Simplex: return "simplex";
    case RowClass::Distance: return "distance";
    case RowClass::DistanceAux: return "distance-mccormick";
    case RowClass::Reflection: return "reflection";
    case RowClass::ReflectionAux: return "reflection-mccormick";
    case RowClass::Blockage: return "blockage";
  }
  return "unknown";
}

double SparseRow::activity(const Eigen::VectorXd& x) const {
  double a = 0;
  for (auto [j, c] : terms) a += c * x(j);
  return a;
}

double SparseRow::violation(const Eigen::VectorXd& x) const {
  const double a = activity(x);
  switch (sense) {
    case RowSense::LessEqual: return std::max(0.0, a - rhs);
    case RowSense::GreaterEqual: return std::max(0.0, rhs - a);
    case RowSense::Equal: return std::abs(a - rhs);
  }
  return 0;
}

int LinearizedConstraints::count(RowClass cls) const {
  return static_cast<int>(
      std::count_if(rows_.begin(), rows_.end(), [cls](const SparseRow& r) { return r.cls == cls; }));
}

Eigen::VectorXd LinearizedConstraints::pack(const RelaxedState& state) const {
  if (state.z.size() != num_z() || state.wbar.size() != num_wbar() || state.w.size() != num_w()) {
    throw std::invalid_argument("pack: state does not match the linearized layout");
  }
  Eigen::VectorXd x(num_variables());
  x << state.z, state.wbar, state.w;
  return x;
}

std::vector<int> LinearizedConstraints::violated_rows(const Eigen::VectorXd& x,
                                                      double tolerance) const {
  if (x.size() != num_variables()) throw std::invalid_argument("violated_rows: wrong vector length");
  std::vector<int> out;
  if ((x.array() < -tolerance).any() || (x.array() > 1 + tolerance).any()) out.push_back(-1);
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    if (rows_[r].violation(x) > tolerance) out.push_back(static_cast<int>(r));
  }
  return out;
}

std::string LinearizedConstraints::variable_name(int j) const {
  std::ostringstream out;
  if (j < B_ * M_) {
    out << "s_" << j / M_ + 1 << '_' << j % M_ + 1;
  } else if (j < num_z()) {
    const int k = j - B_ * M_;
    out << "g_" << k / L_ + 1 << '_' << k % L_ + 1;
  } else if (j < num_z() + num_wbar()) {
    int k = j - num_z();
    const int l = k % M_;
    k /= M_;
    const int m = k % M_;
    const int pair = k / M_;
    const int b = pair / (B_ - 1);
    int v = pair % (B_ - 1);
    if (v >= b) ++v;
    out << "wb_" << b + 1 << '_' << v + 1 << '_' << m + 1 << '_' << l + 1;
  } else {
    int k = j - num_z() - num_wbar();
    const int l = k % L_;
    k /= L_;
    const int m = k % M_;
    k /= M_;
    out << "w_" << k / B_ + 1 << '_' << k % B_ + 1 << '_' << m + 1 << '_' << l + 1;
  }
  return out.str();
}

LinearProgram LinearizedConstraints::to_lp(const Eigen::VectorXd& z_objective) const {
  if (z_objective.size() != num_z()) throw std::invalid_argument("to_lp: objective must cover z");
  LinearProgram lp = LinearProgram::with_variables(num_variables());
  lp.objective.head(num_z()) = z_objective;
  lp.upper.setOnes();
  lp.A = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows_.size()), num_variables());
  lp.rhs.resize(static_cast<Eigen::Index>(rows_.size()));
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    for (auto [j, c] : rows_[r].terms) lp.A(static_cast<Eigen::Index>(r), j) += c;
    lp.rhs(static_cast<Eigen::Index>(r)) = rows_[r].rhs;
    lp.sense.push_back(rows_[r].sense);
  }
  return lp;
}

void LinearizedConstraints::write_lp(std::ostream& out, const Eigen::VectorXd& z_objective) const {
  out << std::setprecision(17);
  out << "\\ B=" << B_ << " M=" << M_ << " L=" << L_ << '\n';
  out << "Maximize\n obj:";
  bool any = false;
  for (Eigen::Index j = 0; j < z_objective.size(); ++j) {
    if (z_objective(j) == 0.0) continue;
    out << (z_objective(j) < 0 ? " - " : " + ") << std::abs(z_objective(j)) << ' '
        << variable_name(static_cast<int>(j));
    any = true;
  }
  if (!any) out << " 0 " << variable_name(0);
  out << "\nSubject To\n";
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    const auto& row = rows_[r];
    out << ' ' << to_string(row.cls) << '_' << r + 1 << ':';
    for (auto [j, c] : row.terms) {
      out << (c < 0 ? " - " : " + ") << std::abs(c) << ' ' << variable_name(j);
    }
    switch (row.sense) {
      case RowSense::LessEqual: out << " <= "; break;
      case RowSense::GreaterEqual: out << " >= "; break;
      case RowSense::Equal: out << " = "; break;
    }
    out << row.rhs << '\n';
  }
  out << "Bounds\n";
  for (int j = 0; j < num_variables(); ++j) out << " 0 <= " << variable_name(j) << " <= 1\n";
  out << "End\n";
}

LinearizedConstraints linearize(int B, const ConstraintData& data) {
  if (B < 1) throw std::invalid_argument("linearize: B must be >= 1");
  const int M = data.M();
  const int L = data.L();
  LinearizedConstraints lin(B, M, L);

  for (int b = 0; b < B; ++b) {
    SparseRow s{{}, RowSense::Equal, 1.0, RowClass::Simplex};
    for (int m = 0; m < M; ++m) s.terms.emplace_back(lin.s(b, m), 1.0);
    lin.add(std::move(s));
    SparseRow g{{}, RowSense::Equal, 1.0, RowClass::Simplex};
    for (int l = 0; l < L; ++l) g.terms.emplace_back(lin.g(b, l), 1.0);
    lin.add(std::move(g));
  }

  auto mccormick = [&](int aux, int x, int y, RowClass cls) {
    lin.add({{{aux, 1.0}, {x, -1.0}}, RowSense::LessEqual, 0.0, cls});
    lin.add({{{aux, 1.0}, {y, -1.0}}, RowSense::LessEqual, 0.0, cls});
    lin.add({{{aux, 1.0}, {x, -1.0}, {y, -1.0}}, RowSense::GreaterEqual, -1.0, cls});
  };

  for (int b = 0; b < B; ++b) {
    for (int v = 0; v < B; ++v) {
      if (v == b) continue;
      SparseRow dist{{}, RowSense::GreaterEqual, data.d_min, RowClass::Distance};
      for (int m = 0; m < M; ++m) {
        for (int l = 0; l < M; ++l) {
          if (data.D(m, l) != 0.0) dist.terms.emplace_back(lin.wbar(b, v, m, l), data.D(m, l));
        }
      }
      lin.add(std::move(dist));
      for (int m = 0; m < M; ++m) {
        for (int l = 0; l < M; ++l) {
          mccormick(lin.wbar(b, v, m, l), lin.s(b, m), lin.s(v, l), RowClass::DistanceAux);
        }
      }
    }
  }

  for (int b = 0; b < B; ++b) {
    for (int v = 0; v < B; ++v) {
      if (v != b) {
        SparseRow refl{{}, RowSense::LessEqual, 0.0, RowClass::Reflection};
        for (int m = 0; m < M; ++m) {
          for (int l = 0; l < L; ++l) {
            if (data.U(m, l) == 0.0) continue;
            refl.terms.emplace_back(lin.w(b, v, m, l), data.U(m, l));
            refl.terms.emplace_back(lin.w(b, b, m, l), -data.U(m, l));
          }
        }
        lin.add(std::move(refl));
      }
      for (int m = 0; m < M; ++m) {
        for (int l = 0; l < L; ++l) {
          mccormick(lin.w(b, v, m, l), lin.s(v, m), lin.g(b, l), RowClass::ReflectionAux);
        }
      }
    }
  }

  for (int b = 0; b < B; ++b) {
    SparseRow block{{}, RowSense::GreaterEqual, 0.0, RowClass::Blockage};
    for (int m = 0; m < M; ++m) {
      for (int l = 0; l < L; ++l) {
        if (data.U(m, l) != 0.0) block.terms.emplace_back(lin.w(b, b, m, l), data.U(m, l));
      }
    }
    lin.add(std::move(block));
  }
  return lin;
}

void complete_auxiliaries(RelaxedState& state, const ConstraintData& data) {
  const int B = state.B, M = state.M, L = state.L;
  if (M != data.M() || L != data.L()) {
    throw std::invalid_argument("complete_auxiliaries: state does not match the constraint data");
  }
  const LinearizedConstraints layout(B, M, L);
  const auto& z = state.z;
  state.wbar.resize(layout.num_wbar());
  state.w.resize(layout.num_w());
  const int offset_wbar = layout.num_z();
  const int offset_w = layout.num_z() + layout.num_wbar();
  for (int b = 0; b < B; ++b) {
    for (int v = 0; v < B; ++v) {
      if (v != b) {
        for (int m = 0; m < M; ++m) {
          for (int l = 0; l < M; ++l) {
            state.wbar(layout.wbar(b, v, m, l) - offset_wbar) =
                std::min(z(layout.s(b, m)), z(layout.s(v, l)));
          }
        }
      }
      for (int m = 0; m < M; ++m) {
        for (int l = 0; l < L; ++l) {
          const double x = z(layout.s(v, m));
          const double y = z(layout.g(b, l));
          const double lo = std::max(0.0, x + y - 1.0);
          const double hi = std::min(x, y);
          // w_bb enters with +U, w_bv with -U.
          const bool take_hi = (v == b) ? data.U(m, l) > 0 : data.U(m, l) < 0;
          state.w(layout.w(b, v, m, l) - offset_w) = take_hi ? hi : lo;
        }
      }
    }
  }
}

double AffinePiece::value(const Eigen::VectorXd& z) const {
  double a = constant;
  for (auto [j, c] : coefficients) a += c * z(j);
  return a;
}

double ProjectedConstraint::value(const Eigen::VectorXd& z) const {
  double total = constant;
  for (const auto& term : terms) {
    double lo = term.front().value(z);
    for (std::size_t k = 1; k < term.size(); ++k) lo = std::min(lo, term[k].value(z));
    total += lo;
  }
  return total;
}

SparseRow ProjectedConstraint::cut(const Eigen::VectorXd& z) const {
  double constant_part = constant;
  std::vector<std::pair<int, double>> coef;
  for (const auto& term : terms) {
    std::size_t best = 0;
    double lo = term.front().value(z);
    for (std::size_t k = 1; k < term.size(); ++k) {
      const double v = term[k].value(z);
      if (v < lo) {
        lo = v;
        best = k;
      }
    }
    constant_part += term[best].constant;
    coef.insert(coef.end(), term[best].coefficients.begin(), term[best].coefficients.end());
  }
  std::sort(coef.begin(), coef.end());
  SparseRow row{{}, RowSense::GreaterEqual, -constant_part, cls};
  for (auto [j, c] : coef) {
    if (!row.terms.empty() && row.terms.back().first == j) row.terms.back().second += c;
    else row.terms.emplace_back(j, c);
  }
  return row;
}

std::vector<ProjectedConstraint> project(int B, const ConstraintData& data) {
  if (B < 1) throw std::invalid_argument("project: B must be >= 1");
  const int M = data.M();
  const int L = data.L();
  auto s = [&](int b, int m) { return s_index(b, m, M); };
  auto g = [&](int b, int l) { return g_index(b, l, B, M, L); };
  using Pieces = std::vector<AffinePiece>;

  // max over w_bb of U w_bb, one term per cell
  auto own_terms = [&](int b) {
    std::vector<Pieces> terms;
    for (int m = 0; m < M; ++m) {
      for (int l = 0; l < L; ++l) {
        const double u = data.U(m, l);
        if (u > 0) {
          terms.push_back({{0.0, {{s(b, m), u}}}, {0.0, {{g(b, l), u}}}});
        } else if (u < 0) {
          terms.push_back({{0.0, {}}, {-u, {{s(b, m), u}, {g(b, l), u}}}});
        }
      }
    }
    return terms;
  };

  std::vector<ProjectedConstraint> out;
  for (int b = 0; b < B; ++b) {
    for (int v = b + 1; v < B; ++v) {
      ProjectedConstraint c{RowClass::Distance, b, v, -data.d_min, {}};
      for (int m = 0; m < M; ++m) {
        for (int l = 0; l < M; ++l) {
          const double d = data.D(m, l);
          if (d > 0) c.terms.push_back({{0.0, {{s(b, m), d}}}, {0.0, {{s(v, l), d}}}});
        }
      }
      out.push_back(std::move(c));
    }
  }
  for (int b = 0; b < B; ++b) {
    for (int v = 0; v < B; ++v) {
      if (v == b) continue;
      ProjectedConstraint c{RowClass::Reflection, b, v, 0.0, own_terms(b)};
      for (int m = 0; m < M; ++m) {
        for (int l = 0; l < L; ++l) {
          const double u = data.U(m, l);
          if (u > 0) {
            c.terms.push_back({{0.0, {}}, {u, {{s(v, m), -u}, {g(b, l), -u}}}});
          } else if (u < 0) {
            c.terms.push_back({{0.0, {{s(v, m), -u}}}, {0.0, {{g(b, l), -u}}}});
          }
        }
      }
      out.push_back(std::move(c));
    }
  }
  for (int b = 0; b < B; ++b) {
    out.push_back({RowClass::Blockage, b, b, 0.0, own_terms(b)});
  }
  return out;
}

}  // namespace sixdma
