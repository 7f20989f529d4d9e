#pragma once

#include "sixdma/benchmarks.hpp"
#include "sixdma/channel.hpp"
#include "sixdma/codebook.hpp"
#include "sixdma/offline.hpp"
#include "sixdma/online.hpp"
#include "sixdma/scenario.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace sixdma {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// `[section]` headers, `key = value` lines, `#` or `;` comments.
class IniFile {
 public:
  struct Entry {
    std::string value;
    int line{0};
  };

  /// Throws ConfigError("<source>:<line>: ...") on malformed lines and
  /// duplicate keys.
  static IniFile parse(std::istream& in, const std::string& source = "config");
  static IniFile load(const std::string& path);

  /// `section.key=value` override (line 0).
  void set(const std::string& assignment);
  void set(const std::string& section, const std::string& key, const std::string& value);

  [[nodiscard]] const std::map<std::string, std::map<std::string, Entry>>& sections() const {
    return sections_;
  }
  [[nodiscard]] const std::string& source() const { return source_; }

 private:
  std::string source_{"config"};
  std::map<std::string, std::map<std::string, Entry>> sections_;
};

enum class CodebookKind { Grid, Sphere };

struct CodebookConfig {
  CodebookKind kind{CodebookKind::Grid};
  int positions{27};
  double cube_side{1.0};
  GridRotations rotations{1, 1, 4};
  double radius{0.5};
  int facets{1};          ///< sphere: L = 1 + facets
  double min_distance{0}; ///< 0: diagonal + lambda / 2 default
};

enum class SweepAxis { None, Power, MeanUsers, RegularFraction, Positions, Rotations };
std::string to_string(SweepAxis axis);

struct SweepConfig {
  SweepAxis axis{SweepAxis::None};
  std::vector<double> values;
  int seeds{1};
  std::vector<std::string> schemes{"offline", "online", "fpa", "circular", "rotations"};
};

struct OnlineConfig {
  CodebookConfig codebook{CodebookKind::Sphere, 100, 1.0, {1, 1, 1}, 0.5, 1, 0};
  int samples{0};  ///< T; 0: M^2 L^2
  Population population{Population::Fresh};
};

struct ExperimentConfig {
  SystemConfig system;
  AntennaPattern pattern;
  CodebookConfig codebook;
  ScenarioConfig scenario{ScenarioConfig::defaults()};
  int realizations{100};  ///< Omega, the shared evaluation set
  OfflineConfig offline;
  OnlineConfig online;
  BenchmarkConfig benchmark;
  SweepConfig sweep;

  /// Throws ConfigError naming the offending line for unknown keys or bad
  /// values.
  static ExperimentConfig from_ini(const IniFile& ini);
  /// Canonical text with every key; parsing it reproduces the config.
  [[nodiscard]] std::string to_ini() const;
  /// FNV-1a 64 of to_ini(), hex.
  [[nodiscard]] std::string hash() const;
  void validate() const;
};

double dbm_to_watts(double dbm);
double watts_to_dbm(double watts);

std::string fnv1a_hex(const std::string& text);

}  // namespace sixdma
