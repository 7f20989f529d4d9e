#include "sixdma/capacity.hpp"

#include "sixdma/parallel.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace sixdma {

void IndicatorState::validate() const {
  if (M < 1 || L < 1) throw std::invalid_argument("indicator: M and L must be >= 1");
  if (positions.size() != rotations.size()) {
    throw std::invalid_argument("indicator: positions/rotations size mismatch");
  }
  for (std::size_t b = 0; b < positions.size(); ++b) {
    if (positions[b] < 0 || positions[b] >= M || rotations[b] < 0 || rotations[b] >= L) {
      throw std::invalid_argument("indicator: surface " + std::to_string(b + 1) +
                                  " index out of range");
    }
  }
}

Eigen::VectorXd IndicatorState::to_vector() const {
  validate();
  const int B = surfaces();
  Eigen::VectorXd z = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(B) * (M + L));
  for (int b = 0; b < B; ++b) {
    z(s_index(b, positions[b], M)) = 1.0;
    z(g_index(b, rotations[b], B, M, L)) = 1.0;
  }
  return z;
}

namespace {

int one_hot_index(const Eigen::Ref<const Eigen::VectorXd>& v, const char* what, int b) {
  int hot = -1;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (v(i) == 1.0) {
      if (hot >= 0) hot = -2;
      else if (hot == -1) hot = static_cast<int>(i);
    } else if (v(i) != 0.0) {
      hot = -2;
    }
  }
  if (hot < 0) {
    throw std::invalid_argument(std::string("indicator: ") + what + " of surface " +
                                std::to_string(b + 1) + " is not one-hot");
  }
  return hot;
}

}  // namespace

IndicatorState IndicatorState::from_vector(const Eigen::VectorXd& z, int B, int M, int L) {
  if (B < 0 || M < 1 || L < 1 || z.size() != static_cast<Eigen::Index>(B) * (M + L)) {
    throw std::invalid_argument("indicator: z has length " + std::to_string(z.size()) +
                                ", expected B(M + L)");
  }
  IndicatorState state{M, L, {}, {}};
  for (int b = 0; b < B; ++b) {
    state.positions.push_back(one_hot_index(z.segment(s_index(b, 0, M), M), "s", b));
    state.rotations.push_back(one_hot_index(z.segment(g_index(b, 0, B, M, L), L), "g", b));
  }
  return state;
}

RelaxedState RelaxedState::from(const IndicatorState& state) {
  return {state.surfaces(), state.M, state.L, state.to_vector(), {}, {}};
}

Eigen::MatrixXd RelaxedState::weights() const {
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(M, L);
  for (int b = 0; b < B; ++b) w.noalias() += s(b) * g(b).transpose();
  return w;
}

Eigen::MatrixXd weights(const IndicatorState& state) {
  state.validate();
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(state.M, state.L);
  for (int b = 0; b < state.surfaces(); ++b) w(state.positions[b], state.rotations[b]) += 1.0;
  return w;
}

Eigen::MatrixXd selection_matrix(const IndicatorState& state) {
  state.validate();
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(state.surfaces(), state.M * state.L);
  for (int b = 0; b < state.surfaces(); ++b) {
    q(b, state.positions[b] * state.L + state.rotations[b]) = 1.0;
  }
  return q;
}

Eigen::MatrixXcd assemble_channel(const Eigen::MatrixXd& q, const StackedChannel& hbar) {
  const int n = hbar.antennas;
  if (q.cols() * n != hbar.matrix.rows()) {
    throw std::invalid_argument("assemble_channel: Q and Hbar dimensions disagree");
  }
  const Eigen::MatrixXd kron = Eigen::kroneckerProduct(q, Eigen::MatrixXd::Identity(n, n));
  return kron.cast<std::complex<double>>() * hbar.matrix;
}

Eigen::MatrixXcd assemble_channel(const IndicatorState& state, const StackedChannel& hbar) {
  state.validate();
  const int n = hbar.antennas;
  Eigen::MatrixXcd h(static_cast<Eigen::Index>(state.surfaces()) * n, hbar.matrix.cols());
  for (int b = 0; b < state.surfaces(); ++b) {
    h.middleRows(static_cast<Eigen::Index>(b) * n, n) =
        hbar.block(state.positions[b], state.rotations[b]);
  }
  return h;
}

std::vector<SurfacePose> selected_poses(const IndicatorState& state, const PoseCodebook& codebook) {
  state.validate();
  std::vector<SurfacePose> poses;
  for (int b = 0; b < state.surfaces(); ++b) {
    poses.push_back(codebook.pose(state.positions[b], state.rotations[b]));
  }
  return poses;
}

double log2det(const Eigen::MatrixXcd& a) {
  if (a.rows() == 0) return 0.0;
  const Eigen::LLT<Eigen::MatrixXcd> llt(a);
  if (llt.info() != Eigen::Success) throw std::domain_error("log2det: matrix is not positive definite");
  return 2.0 * llt.matrixLLT().diagonal().real().array().log().sum() / std::numbers::ln2;
}

double sum_rate(const Eigen::MatrixXcd& h, double snr) {
  if (h.rows() < h.cols()) return sum_rate_direct(h, snr);
  Eigen::MatrixXcd g = Eigen::MatrixXcd::Identity(h.cols(), h.cols());
  g.noalias() += snr * h.adjoint() * h;
  return log2det(g);
}

double sum_rate_direct(const Eigen::MatrixXcd& h, double snr) {
  Eigen::MatrixXcd g = Eigen::MatrixXcd::Identity(h.rows(), h.rows());
  g.noalias() += snr * h * h.adjoint();
  return log2det(g);
}

double sum_rate(const Eigen::MatrixXd& weights, const StackedChannel& hbar, const SystemConfig& sys) {
  if (weights.rows() != hbar.positions || weights.cols() != hbar.rotations) {
    throw std::invalid_argument("sum_rate: weight matrix does not match the codebook");
  }
  const Eigen::Index k = hbar.matrix.cols();
  Eigen::MatrixXcd g = Eigen::MatrixXcd::Identity(k, k);
  for (int m = 0; m < hbar.positions; ++m) {
    for (int l = 0; l < hbar.rotations; ++l) {
      if (weights(m, l) == 0.0) continue;
      const auto blk = hbar.block(m, l);
      g.noalias() += (sys.snr() * weights(m, l)) * blk.adjoint() * blk;
    }
  }
  return log2det(g);
}

double sum_rate(const IndicatorState& state, const StackedChannel& hbar, const SystemConfig& sys) {
  return sum_rate(assemble_channel(state, hbar), sys.snr());
}

double sum_rate(const RelaxedState& state, const StackedChannel& hbar, const SystemConfig& sys) {
  return sum_rate(state.weights(), hbar, sys);
}

double monte_carlo_capacity(const IndicatorState& state, std::span<const StackedChannel> realizations,
                            const SystemConfig& sys) {
  if (realizations.empty()) throw std::invalid_argument("monte_carlo_capacity: no realizations");
  double total = 0;
  for (const auto& h : realizations) total += sum_rate(state, h, sys);
  return total / static_cast<double>(realizations.size());
}

double monte_carlo_capacity(const Eigen::MatrixXd& weights,
                            std::span<const StackedChannel> realizations, const SystemConfig& sys) {
  if (realizations.empty()) throw std::invalid_argument("monte_carlo_capacity: no realizations");
  double total = 0;
  for (const auto& h : realizations) total += sum_rate(weights, h, sys);
  return total / static_cast<double>(realizations.size());
}

MonteCarloObjective::MonteCarloObjective(std::span<const StackedChannel> realizations,
                                         const SystemConfig& sys, int threads)
    : snr_(sys.snr()), threads_(threads) {
  if (realizations.empty()) throw std::invalid_argument("MonteCarloObjective: no realizations");
  M_ = realizations.front().positions;
  L_ = realizations.front().rotations;
  grams_.resize(realizations.size());
  parallel_for(
      realizations.size(),
      [&](std::size_t o) {
        const auto& h = realizations[o];
        if (h.positions != M_ || h.rotations != L_) {
          throw std::invalid_argument("MonteCarloObjective: realizations use different codebooks");
        }
        auto& out = grams_[o];
        out.reserve(static_cast<std::size_t>(M_) * L_);
        for (int m = 0; m < M_; ++m) {
          for (int l = 0; l < L_; ++l) {
            const auto blk = h.block(m, l);
            out.emplace_back(blk.adjoint() * blk);
          }
        }
      },
      threads_);
}

Eigen::MatrixXcd MonteCarloObjective::gram(int omega, const Eigen::MatrixXd& weights) const {
  const auto& p = grams_[omega];
  const Eigen::Index k = p.front().rows();
  Eigen::MatrixXcd g = Eigen::MatrixXcd::Identity(k, k);
  for (int m = 0; m < M_; ++m) {
    for (int l = 0; l < L_; ++l) {
      if (weights(m, l) != 0.0) g += (snr_ * weights(m, l)) * p[m * L_ + l];
    }
  }
  return g;
}

double MonteCarloObjective::value(const Eigen::MatrixXd& weights) const {
  if (weights.rows() != M_ || weights.cols() != L_) {
    throw std::invalid_argument("MonteCarloObjective: weight matrix does not match the codebook");
  }
  std::vector<double> rate(grams_.size());
  parallel_for(
      grams_.size(), [&](std::size_t o) { rate[o] = log2det(gram(static_cast<int>(o), weights)); },
      threads_);
  double total = 0;
  for (double r : rate) total += r;
  return total / static_cast<double>(rate.size());
}

Eigen::VectorXd MonteCarloObjective::gradient(const RelaxedState& state, double eps,
                                              bool central) const {
  if (!(eps > 0)) throw std::invalid_argument("gradient: eps must be positive");
  if (state.M != M_ || state.L != L_) {
    throw std::invalid_argument("gradient: state does not match the codebook");
  }
  const int B = state.B;
  const Eigen::MatrixXd w = state.weights();
  const Eigen::Index n = state.z.size();
  // per realization: one row of directional rates per coordinate
  std::vector<Eigen::VectorXd> partial(grams_.size());

  parallel_for(
      grams_.size(),
      [&](std::size_t o) {
        const auto& p = grams_[o];
        const Eigen::MatrixXcd g0 = gram(static_cast<int>(o), w);
        const double base = central ? 0.0 : log2det(g0);
        Eigen::VectorXd d(n);
        Eigen::MatrixXcd delta(g0.rows(), g0.cols());

        auto difference = [&]() {
          const double plus = log2det(g0 + eps * delta);
          if (!central) return (plus - base) / eps;
          return (plus - log2det(g0 - eps * delta)) / (2 * eps);
        };

        for (int b = 0; b < B; ++b) {
          const auto s = state.s(b);
          const auto gb = state.g(b);
          for (int m = 0; m < M_; ++m) {
            delta.setZero();
            for (int l = 0; l < L_; ++l) {
              if (gb(l) != 0.0) delta += (snr_ * gb(l)) * p[m * L_ + l];
            }
            d(s_index(b, m, M_)) = difference();
          }
          for (int l = 0; l < L_; ++l) {
            delta.setZero();
            for (int m = 0; m < M_; ++m) {
              if (s(m) != 0.0) delta += (snr_ * s(m)) * p[m * L_ + l];
            }
            d(g_index(b, l, B, M_, L_)) = difference();
          }
        }
        partial[o] = std::move(d);
      },
      threads_);

  Eigen::VectorXd grad = Eigen::VectorXd::Zero(n);
  for (const auto& d : partial) grad += d;
  return grad / static_cast<double>(partial.size());
}

}  // namespace sixdma
