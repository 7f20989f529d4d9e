#pragma once

#include "sixdma/channel.hpp"
#include "sixdma/codebook.hpp"

#include <span>
#include <vector>

namespace sixdma {

/// Binary selection: surface b sits at position positions[b] with rotation
/// rotations[b] (both 0-based). The concatenated indicator vector is
/// z = [s_1; ...; s_B; g_1; ...; g_B].
struct IndicatorState {
  int M{0};
  int L{0};
  std::vector<int> positions;
  std::vector<int> rotations;

  [[nodiscard]] int surfaces() const { return static_cast<int>(positions.size()); }
  /// Throws std::invalid_argument on mismatched sizes or indices out of range.
  void validate() const;
  [[nodiscard]] Eigen::VectorXd to_vector() const;
  /// Throws std::invalid_argument unless every s_b and g_b is one-hot.
  static IndicatorState from_vector(const Eigen::VectorXd& z, int B, int M, int L);
};

/// Offsets of s_b and g_b inside z.
inline int s_index(int b, int m, int M) { return b * M + m; }
inline int g_index(int b, int l, int B, int M, int L) { return B * M + b * L + l; }

/// Continuous iterate of the relaxed problem. `w` and `wbar` are the linearization
/// auxiliaries in the layout of LinearizedConstraints (may be empty).
struct RelaxedState {
  int B{0};
  int M{0};
  int L{0};
  Eigen::VectorXd z;
  Eigen::VectorXd w;
  Eigen::VectorXd wbar;

  static RelaxedState from(const IndicatorState& state);

  [[nodiscard]] auto s(int b) const { return z.segment(static_cast<Eigen::Index>(b) * M, M); }
  [[nodiscard]] auto g(int b) const {
    return z.segment(static_cast<Eigen::Index>(B) * M + static_cast<Eigen::Index>(b) * L, L);
  }
  /// W = sum_b s_b g_b^T, M x L.
  [[nodiscard]] Eigen::MatrixXd weights() const;
};

Eigen::MatrixXd weights(const IndicatorState& state);

/// Q with row b = vec(g_b s_b^T), i.e. a single 1 at column i_b * L + j_b.
Eigen::MatrixXd selection_matrix(const IndicatorState& state);

/// (Q kron I_N) * Hbar.
Eigen::MatrixXcd assemble_channel(const Eigen::MatrixXd& q, const StackedChannel& hbar);
/// Rows of Hbar picked by the selection, in surface order.
Eigen::MatrixXcd assemble_channel(const IndicatorState& state, const StackedChannel& hbar);

std::vector<SurfacePose> selected_poses(const IndicatorState& state, const PoseCodebook& codebook);

/// log2 det of a Hermitian positive-definite matrix (Cholesky). Throws
/// std::domain_error if the factorization fails.
double log2det(const Eigen::MatrixXcd& a);

/// log2 det(I + snr * H^H H), using whichever Gram side is smaller.
double sum_rate(const Eigen::MatrixXcd& h, double snr);
/// log2 det(I_NB + snr * H H^H), always the NB x NB form.
double sum_rate_direct(const Eigen::MatrixXcd& h, double snr);

/// log2 det(I_K + snr * Hbar^H (diag(w) kron I_N) Hbar) with w the
/// candidate weights W(m, l).
double sum_rate(const Eigen::MatrixXd& weights, const StackedChannel& hbar, const SystemConfig& sys);
double sum_rate(const IndicatorState& state, const StackedChannel& hbar, const SystemConfig& sys);
double sum_rate(const RelaxedState& state, const StackedChannel& hbar, const SystemConfig& sys);

/// Mean sum-rate over the realizations. Throws std::invalid_argument when
/// the set is empty.
double monte_carlo_capacity(const IndicatorState& state, std::span<const StackedChannel> realizations,
                            const SystemConfig& sys);
double monte_carlo_capacity(const Eigen::MatrixXd& weights,
                            std::span<const StackedChannel> realizations, const SystemConfig& sys);

/// Monte-Carlo relaxed objective with per-candidate Gram matrices
/// P_ml = Hbar_ml^H Hbar_ml cached per realization. The objective and each
/// coordinate perturbation cost one K x K Cholesky.
class MonteCarloObjective {
 public:
  MonteCarloObjective(std::span<const StackedChannel> realizations, const SystemConfig& sys,
                      int threads = 0);

  [[nodiscard]] int positions() const { return M_; }
  [[nodiscard]] int rotations() const { return L_; }
  [[nodiscard]] int realizations() const { return static_cast<int>(grams_.size()); }

  [[nodiscard]] double value(const Eigen::MatrixXd& weights) const;
  [[nodiscard]] double value(const RelaxedState& state) const { return value(state.weights()); }

  /// Finite-difference gradient over all B(M + L) coordinates of z.
  /// Forward: (C(z + eps e_i) - C(z)) / eps. Central: (C(z + eps e_i) -
  /// C(z - eps e_i)) / (2 eps).
  [[nodiscard]] Eigen::VectorXd gradient(const RelaxedState& state, double eps,
                                         bool central = false) const;

 private:
  [[nodiscard]] Eigen::MatrixXcd gram(int omega, const Eigen::MatrixXd& weights) const;

  int M_{0};
  int L_{0};
  double snr_{0};
  int threads_{0};
  // grams_[omega][m * L + l]
  std::vector<std::vector<Eigen::MatrixXcd>> grams_;
};

}  // namespace sixdma
