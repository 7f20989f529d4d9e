#include "sixdma/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sixdma {

void SystemConfig::validate() const {
  if (!(wavelength > 0)) throw std::invalid_argument("system: wavelength must be positive");
  if (!(transmit_power_w >= 0)) throw std::invalid_argument("system: power must be >= 0");
  if (!(noise_power_w > 0)) throw std::invalid_argument("system: noise power must be positive");
  if (antennas_per_surface < 1 || surfaces < 1) {
    throw std::invalid_argument("system: N and B must be >= 1");
  }
}

LocalAngles local_angles(const RotationMatrix& rotation, const Eigen::Vector3d& f) {
  const Eigen::Vector3d p = -rotation.transpose() * f;
  const double elevation = std::numbers::pi / 2 - std::acos(std::clamp(p.z(), -1.0, 1.0));
  const double horizontal = std::hypot(p.x(), p.y());
  double azimuth = 0.0;
  if (horizontal > 0.0) {
    azimuth = std::acos(std::clamp(p.x() / horizontal, -1.0, 1.0));
    if (p.y() < 0) azimuth = -azimuth;
  }
  return {elevation, azimuth};
}

LocalAngles local_angles(const RotationAngles& u, const Eigen::Vector3d& f) {
  return local_angles(rotation_matrix(u), f);
}

ElementGain effective_gain(double elevation, double azimuth, const AntennaPattern& pattern) {
  const double deg = 180.0 / std::numbers::pi;
  const double h = azimuth * deg / pattern.phi_3db_deg;
  const double v = elevation * deg / pattern.theta_3db_deg;
  const double a_h = -std::min(12.0 * h * h, pattern.front_back_db);
  const double a_v = -std::min(12.0 * v * v, pattern.sidelobe_db);
  const double dbi = pattern.max_gain_dbi - std::min(-(a_h + a_v), pattern.front_back_db);
  return {dbi, std::pow(10.0, dbi / 10.0)};
}

Eigen::VectorXcd steering(const Position3& q, const RotationMatrix& rotation,
                          const Eigen::Vector3d& f, const AntennaLayout& layout,
                          double wavelength) {
  const Eigen::VectorXd phase =
      (antenna_positions(q, rotation, layout).transpose() * f) * (-2.0 * std::numbers::pi / wavelength);
  Eigen::VectorXcd a(phase.size());
  for (Eigen::Index n = 0; n < phase.size(); ++n) a(n) = std::polar(1.0, phase(n));
  return a;
}

Eigen::VectorXcd steering(const Position3& q, const RotationAngles& u, const Eigen::Vector3d& f,
                          const AntennaLayout& layout, double wavelength) {
  return steering(q, rotation_matrix(u), f, layout, wavelength);
}

Path los_path(const Position3& user, double wavelength) {
  const double d = user.norm();
  if (!(d > 0)) throw std::domain_error("los_path: user at the CPU origin");
  Path path;
  path.elevation = std::asin(std::clamp(user.z() / d, -1.0, 1.0));
  path.azimuth = std::atan2(user.y(), user.x());
  path.direction = -user / d;
  path.coefficient = std::polar(wavelength / (4.0 * std::numbers::pi * d),
                                -2.0 * std::numbers::pi * d / wavelength);
  return path;
}

std::vector<std::vector<Path>> los_paths(const UserRealization& users, double wavelength) {
  std::vector<std::vector<Path>> out;
  out.reserve(users.users.size());
  for (const auto& u : users.users) out.push_back({los_path(u, wavelength)});
  return out;
}

Eigen::VectorXcd user_channel(std::span<const SurfacePose> poses, std::span<const Path> paths,
                              const AntennaLayout& layout, const AntennaPattern& pattern,
                              double wavelength) {
  const int n = layout.size();
  Eigen::VectorXcd h = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(poses.size()) * n);
  for (std::size_t b = 0; b < poses.size(); ++b) {
    auto block = h.segment(static_cast<Eigen::Index>(b) * n, n);
    for (const auto& path : paths) {
      const auto angles = local_angles(poses[b].rotation, path.direction);
      const double g = effective_gain(angles.elevation, angles.azimuth, pattern).linear;
      block += (path.coefficient * std::sqrt(g)) *
               steering(poses[b].position, poses[b].rotation, path.direction, layout, wavelength);
    }
  }
  return h;
}

Eigen::MatrixXcd channel_matrix(std::span<const SurfacePose> poses,
                                std::span<const std::vector<Path>> user_paths,
                                const AntennaLayout& layout, const AntennaPattern& pattern,
                                double wavelength) {
  Eigen::MatrixXcd h(static_cast<Eigen::Index>(poses.size()) * layout.size(),
                     static_cast<Eigen::Index>(user_paths.size()));
  for (std::size_t k = 0; k < user_paths.size(); ++k) {
    h.col(static_cast<Eigen::Index>(k)) =
        user_channel(poses, user_paths[k], layout, pattern, wavelength);
  }
  return h;
}

StackedChannel stacked_channel(const PoseCodebook& codebook, const UserRealization& users,
                               const AntennaLayout& layout, const AntennaPattern& pattern,
                               double wavelength) {
  std::vector<SurfacePose> poses;
  poses.reserve(codebook.candidates().size());
  for (const auto& c : codebook.candidates()) poses.push_back(c.pose);
  const auto paths = los_paths(users, wavelength);
  StackedChannel out;
  out.antennas = layout.size();
  out.positions = codebook.num_positions();
  out.rotations = codebook.num_rotations();
  out.realization_seed = users.seed;
  out.matrix = channel_matrix(poses, paths, layout, pattern, wavelength);
  return out;
}

}  // namespace sixdma
