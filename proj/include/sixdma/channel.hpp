#pragma once

#include "sixdma/codebook.hpp"
#include "sixdma/geometry.hpp"
#include "sixdma/scenario.hpp"

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace sixdma {

/// 3GPP sector element pattern parameters (dBi / degrees).
struct AntennaPattern {
  double max_gain_dbi{8};      ///< G_max
  double front_back_db{25};    ///< G_s
  double sidelobe_db{25};      ///< G_v
  double theta_3db_deg{65};
  double phi_3db_deg{65};
};

/// One propagation path. `elevation`/`azimuth` give the direction of the
/// user as seen from the CPU; the wave travels the opposite way, so the
/// vector entering the steering phase and the local-angle projection is
/// `direction = -pointing_vector(elevation, azimuth)`.
struct Path {
  double elevation{0};
  double azimuth{0};
  Eigen::Vector3d direction{-1, 0, 0};
  std::complex<double> coefficient{0};  ///< eta, referenced to the CPU centre
};

struct SystemConfig {
  double wavelength{0.125};           ///< metres (2.4 GHz)
  double transmit_power_w{0.06};      ///< p, per user
  double noise_power_w{1e-12};        ///< sigma^2 (-90 dBm)
  int antennas_per_surface{4};        ///< N
  int surfaces{16};                   ///< B

  [[nodiscard]] double snr() const { return transmit_power_w / noise_power_w; }
  void validate() const;
};

struct LocalAngles {
  double elevation;  ///< theta~ in [-pi/2, pi/2]
  double azimuth;    ///< phi~ in [-pi, pi]
};

/// Direction of -f in the surface frame: [x, y, z] = -R^T f, elevation
/// pi/2 - acos(z), azimuth acos(x / sqrt(x^2 + y^2)) signed by y. A wave
/// along the local z' axis gets azimuth 0.
LocalAngles local_angles(const RotationMatrix& rotation, const Eigen::Vector3d& f);
LocalAngles local_angles(const RotationAngles& u, const Eigen::Vector3d& f);

struct ElementGain {
  double dbi;
  double linear;
};

/// A = G_max - min{-(A_H + A_V), G_s} with A_H = -min{12 (phi/phi_3dB)^2, G_s}
/// and A_V = -min{12 (theta/theta_3dB)^2, G_v}.
ElementGain effective_gain(double elevation, double azimuth, const AntennaPattern& pattern);

/// a_n = exp(-j 2 pi / lambda * f^T r_n) over the surface's elements.
Eigen::VectorXcd steering(const Position3& q, const RotationMatrix& rotation,
                          const Eigen::Vector3d& f, const AntennaLayout& layout, double wavelength);
Eigen::VectorXcd steering(const Position3& q, const RotationAngles& u, const Eigen::Vector3d& f,
                          const AntennaLayout& layout, double wavelength);

/// Free-space LoS path: |eta| = lambda / (4 pi d), phase -2 pi d / lambda.
/// Throws std::domain_error for a user at the origin.
Path los_path(const Position3& user, double wavelength);

/// One LoS path per user.
std::vector<std::vector<Path>> los_paths(const UserRealization& users, double wavelength);

/// Channel from one user to all surfaces: block b is
/// sum_i eta_i sqrt(g_i(u_b)) a_i(q_b, u_b), blocks in pose order.
Eigen::VectorXcd user_channel(std::span<const SurfacePose> poses, std::span<const Path> paths,
                              const AntennaLayout& layout, const AntennaPattern& pattern,
                              double wavelength);

/// H(q, u): (N B) x K, one column per user.
Eigen::MatrixXcd channel_matrix(std::span<const SurfacePose> poses,
                                std::span<const std::vector<Path>> user_paths,
                                const AntennaLayout& layout, const AntennaPattern& pattern,
                                double wavelength);

/// Channels for every codebook candidate stacked as
/// [H_{1,1}; ...; H_{1,L}; ...; H_{M,L}], each block N x K.
struct StackedChannel {
  Eigen::MatrixXcd matrix;
  int antennas{0};
  int positions{0};
  int rotations{0};
  std::uint64_t realization_seed{0};

  [[nodiscard]] int users() const { return static_cast<int>(matrix.cols()); }
  [[nodiscard]] auto block(int m, int l) const {
    return matrix.middleRows(static_cast<Eigen::Index>(m * rotations + l) * antennas, antennas);
  }
};

StackedChannel stacked_channel(const PoseCodebook& codebook, const UserRealization& users,
                               const AntennaLayout& layout, const AntennaPattern& pattern,
                               double wavelength);

}  // namespace sixdma
