#include "sixdma/experiment.hpp"

#include "sixdma/parallel.hpp"
#include "sixdma/random.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace sixdma {

PoseCodebook make_codebook(const CodebookConfig& cfg, const SystemConfig& sys) {
  const double d_min = cfg.min_distance > 0 ? cfg.min_distance : default_min_distance(sys.wavelength);
  if (cfg.kind == CodebookKind::Sphere) {
    return sphere_codebook(cfg.positions, cfg.radius, cfg.facets, d_min, sys.wavelength);
  }
  return grid_codebook(cfg.cube_side, cfg.positions, cfg.rotations, d_min, sys.wavelength);
}

AntennaLayout surface_layout(const SystemConfig& sys) {
  return AntennaLayout::upa(sys.antennas_per_surface, sys.wavelength / 2.0);
}

std::uint64_t run_seed(std::uint64_t base, int index) {
  return derive_seed(base, {0x5eed, static_cast<std::uint64_t>(index)});
}

std::vector<UserRealization> evaluation_set(const ExperimentConfig& cfg, std::uint64_t seed) {
  std::vector<UserRealization> users;
  users.reserve(cfg.realizations);
  for (int o = 0; o < cfg.realizations; ++o) {
    users.push_back(sample_realization(cfg.scenario, derive_seed(seed, {0xe7a1'0000, static_cast<std::uint64_t>(o)})));
  }
  return users;
}

std::vector<StackedChannel> stacked_channels(const PoseCodebook& codebook,
                                             const std::vector<UserRealization>& users,
                                             const ExperimentConfig& cfg) {
  const AntennaLayout layout = surface_layout(cfg.system);
  std::vector<StackedChannel> out(users.size());
  parallel_for(users.size(), [&](std::size_t o) {
    out[o] = stacked_channel(codebook, users[o], layout, cfg.pattern, cfg.system.wavelength);
  });
  return out;
}

double run_scheme(const std::string& scheme, const ExperimentConfig& cfg, std::uint64_t seed,
                  const std::vector<UserRealization>& users, RunArtifacts* artifacts) {
  const int B = cfg.system.surfaces;
  if (scheme == "offline") {
    const PoseCodebook codebook = make_codebook(cfg.codebook, cfg.system);
    const auto channels = stacked_channels(codebook, users, cfg);
    OfflineConfig oc = cfg.offline;
    oc.seed = derive_seed(seed, {0x0ff});
    oc.realizations = static_cast<int>(channels.size());
    OfflineResult res = optimize_offline(codebook, channels, cfg.system, B, oc);
    const double c = res.rounded_objective;
    if (artifacts) artifacts->offline = std::move(res);
    return c;
  }
  if (scheme == "online") {
    const PoseCodebook codebook = make_codebook(cfg.online.codebook, cfg.system);
    MeasurementEnvironment env;
    env.codebook = &codebook;
    env.scenario = cfg.scenario;
    env.system = cfg.system;
    env.pattern = cfg.pattern;
    env.layout = surface_layout(cfg.system);
    env.seed = derive_seed(seed, {0x0a11});
    env.population = cfg.online.population;
    const int ml = codebook.num_positions() * codebook.num_rotations();
    const int T = cfg.online.samples > 0 ? cfg.online.samples : ml * ml;
    OnlineResult res = optimize_csm(codebook, B, T, derive_seed(seed, {0x0a12}), env.callback());
    const auto channels = stacked_channels(codebook, users, cfg);
    const double c = monte_carlo_capacity(res.selection, channels, cfg.system);
    if (artifacts) artifacts->online = std::move(res);
    return c;
  }
  BenchmarkConfig bc = cfg.benchmark;
  bc.kind = parse_benchmark_kind(scheme);
  BenchmarkResult res = run_benchmark(bc, users, cfg.system, cfg.pattern);
  if (artifacts) artifacts->benchmarks.push_back(res);
  return res.capacity;
}

std::vector<ResultRow> run_point(const ExperimentConfig& cfg, const std::vector<std::string>& schemes,
                                 std::uint64_t base_seed, const std::string& sweep_value,
                                 RunArtifacts* artifacts) {
  using Clock = std::chrono::steady_clock;
  const int n = cfg.sweep.seeds;
  std::vector<std::vector<double>> values(schemes.size(), std::vector<double>(n));
  std::vector<double> seconds(schemes.size(), 0.0);
  for (int i = 0; i < n; ++i) {
    const std::uint64_t seed = run_seed(base_seed, i);
    const auto users = evaluation_set(cfg, seed);
    for (std::size_t s = 0; s < schemes.size(); ++s) {
      const auto start = Clock::now();
      values[s][i] = run_scheme(schemes[s], cfg, seed, users, i == 0 ? artifacts : nullptr);
      seconds[s] += std::chrono::duration<double>(Clock::now() - start).count();
    }
  }
  std::vector<ResultRow> rows;
  for (std::size_t s = 0; s < schemes.size(); ++s) {
    double mean = 0;
    for (double v : values[s]) mean += v;
    mean /= n;
    double var = 0;
    for (double v : values[s]) var += (v - mean) * (v - mean);
    const double sd = n > 1 ? std::sqrt(var / (n - 1)) : 0.0;
    rows.push_back({sweep_value, schemes[s], mean, sd, seconds[s]});
  }
  return rows;
}

ExperimentConfig apply_sweep(const ExperimentConfig& cfg, SweepAxis axis, double value) {
  ExperimentConfig out = cfg;
  switch (axis) {
    case SweepAxis::None: break;
    case SweepAxis::Power: out.system.transmit_power_w = value / 1000.0; break;
    case SweepAxis::MeanUsers: out.scenario.mean_users = value; break;
    case SweepAxis::RegularFraction: out.scenario.regular_fraction = value; break;
    case SweepAxis::Positions: {
      const int m = static_cast<int>(std::lround(value));
      out.codebook.positions = m;
      out.online.codebook.positions = m;
      out.benchmark.positions = m;
      break;
    }
    case SweepAxis::Rotations: {
      const int l = static_cast<int>(std::lround(value));
      out.codebook.rotations = {1, 1, l};
      out.online.codebook.facets = l - 1;
      out.benchmark.rotations = l;
      break;
    }
  }
  out.validate();
  return out;
}

void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows,
                       const std::string& config_hash) {
  out << "# config_hash=" << config_hash << '\n' << "sweep_value,scheme,mean,std\n";
  out << std::fixed << std::setprecision(9);
  for (const auto& r : rows) out << r.sweep_value << ',' << r.scheme << ',' << r.mean << ',' << r.std << '\n';
}

void write_timing_csv(std::ostream& out, const std::vector<ResultRow>& rows,
                      const std::string& config_hash) {
  out << "# config_hash=" << config_hash << '\n' << "sweep_value,scheme,seconds\n";
  out << std::fixed << std::setprecision(3);
  for (const auto& r : rows) out << r.sweep_value << ',' << r.scheme << ',' << r.seconds << '\n';
}

namespace {

std::string format_value(double v) {
  std::ostringstream s;
  s << std::setprecision(10) << v;
  return s.str();
}

class OutputDir {
 public:
  OutputDir(std::filesystem::path dir, std::string hash) : dir_(std::move(dir)), hash_(std::move(hash)) {
    std::filesystem::create_directories(dir_);
  }

  std::ofstream open(const std::string& name, bool csv = true) {
    std::ofstream out(dir_ / name);
    if (!out) throw std::runtime_error("cannot write " + (dir_ / name).string());
    if (csv) out << "# config_hash=" << hash_ << '\n';
    files_.push_back(name);
    return out;
  }

  [[nodiscard]] const std::vector<std::string>& files() const { return files_; }

 private:
  std::filesystem::path dir_;
  std::string hash_;
  std::vector<std::string> files_;
};

nlohmann::json config_json(const ExperimentConfig& cfg) {
  std::istringstream in(cfg.to_ini());
  const IniFile ini = IniFile::parse(in, "resolved");
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [section, keys] : ini.sections()) {
    for (const auto& [key, entry] : keys) j[section][key] = entry.value;
  }
  return j;
}

void write_selection(std::ostream& out, const IndicatorState& sel, const PoseCodebook& codebook) {
  out << "surface,position,rotation,qx,qy,qz,alpha,beta,gamma\n" << std::fixed << std::setprecision(9);
  for (int b = 0; b < sel.surfaces(); ++b) {
    const auto& pose = codebook.pose(sel.positions[b], sel.rotations[b]);
    out << b + 1 << ',' << sel.positions[b] + 1 << ',' << sel.rotations[b] + 1 << ','
        << pose.position.x() << ',' << pose.position.y() << ',' << pose.position.z() << ','
        << pose.angles.alpha << ',' << pose.angles.beta << ',' << pose.angles.gamma << '\n';
  }
}

}  // namespace

int run(const RunRequest& request, std::ostream& log) {
  const ExperimentConfig& cfg = request.config;
  cfg.validate();
  const std::string hash = cfg.hash();
  OutputDir out(request.out, hash);
  nlohmann::json meta;
  meta["command"] = request.command;
  meta["version"] = std::string("sixdma ") + SIXDMA_VERSION;
  meta["seed"] = request.seed;
  meta["config_hash"] = hash;
  meta["config"] = config_json(cfg);
  nlohmann::json seeds = nlohmann::json::array();
  for (int i = 0; i < cfg.sweep.seeds; ++i) seeds.push_back(run_seed(request.seed, i));
  meta["run_seeds"] = seeds;
  int status = 0;

  if (request.command == "generate-codebook") {
    const PoseCodebook codebook = make_codebook(cfg.codebook, cfg.system);
    const ValidationReport report = validate(codebook);
    {
      auto f = out.open("codebook.txt");
      write_codebook(f, codebook);
    }
    log << "codebook: M=" << codebook.num_positions() << " L=" << codebook.num_rotations()
        << " violations=" << report.violations.size() << " (reflection " << report.reflection
        << ", blockage " << report.blockage << ", min-distance " << report.min_distance
        << ") smallest distance=" << report.smallest_distance << '\n';
    meta["validation"] = {{"reflection", report.reflection},
                          {"blockage", report.blockage},
                          {"min_distance", report.min_distance},
                          {"smallest_distance", report.smallest_distance}};
    meta["validation"]["ok"] = report.ok();
  } else {
    std::vector<std::string> schemes;
    if (request.command == "optimize-offline") schemes = {"offline"};
    else if (request.command == "optimize-online") schemes = {"online"};
    else if (request.command == "benchmark") schemes = {request.benchmark_kind};
    else if (request.command == "sweep") schemes = cfg.sweep.schemes;
    else throw std::invalid_argument("unknown command '" + request.command + "'");
    if (request.command == "benchmark") parse_benchmark_kind(request.benchmark_kind);

    std::vector<ResultRow> rows;
    if (request.command == "sweep" && cfg.sweep.axis != SweepAxis::None) {
      for (double v : cfg.sweep.values) {
        log << to_string(cfg.sweep.axis) << " = " << format_value(v) << '\n';
        const auto point = run_point(apply_sweep(cfg, cfg.sweep.axis, v), schemes, request.seed,
                                     format_value(v));
        rows.insert(rows.end(), point.begin(), point.end());
      }
    } else {
      RunArtifacts artifacts;
      rows = run_point(cfg, schemes, request.seed, "-", &artifacts);
      if (artifacts.offline) {
        const auto& r = *artifacts.offline;
        {
          auto f = out.open("offline_trace.csv");
          write_trace_csv(f, r.trace);
        }
        {
          auto f = out.open("offline_selection.csv");
          write_selection(f, r.selection, make_codebook(cfg.codebook, cfg.system));
        }
        meta["offline"] = {{"feasibility", r.feasibility.summary()},
                           {"divergence", r.divergence},
                           {"repairs", r.repairs},
                           {"best_restart", r.best_restart + 1}};
        log << "offline: rounded " << r.rounded_objective << " relaxed " << r.relaxed_objective
            << " (" << r.feasibility.summary() << ")\n";
        for (const auto& d : r.divergence) log << "offline divergence: " << d << '\n';
      }
      if (artifacts.online) {
        const auto& r = *artifacts.online;
        {
          auto f = out.open("csm_table.csv");
          write_csm_csv(f, r.table);
        }
        {
          auto f = out.open("samples.csv");
          write_samples_csv(f, r.samples);
        }
        {
          auto f = out.open("online_selection.csv");
          write_selection(f, r.selection, make_codebook(cfg.online.codebook, cfg.system));
        }
        meta["online"] = {{"feasibility", r.feasibility.summary()},
                          {"divergence", r.divergence},
                          {"samples", r.samples.size()}};
        log << "online: " << r.samples.size() << " samples (" << r.feasibility.summary() << ")\n";
        for (const auto& d : r.divergence) log << "online divergence: " << d << '\n';
      }
      for (const auto& b : artifacts.benchmarks) {
        nlohmann::json options = b.options;
        for (auto& o : options) o = o.get<int>() + 1;
        meta["benchmarks"][to_string(b.kind)] = {{"options", options}, {"fpa_capacity", b.fpa_capacity}};
      }
    }
    {
      auto f = out.open("results.csv", false);
      write_results_csv(f, rows, hash);
    }
    {
      auto f = out.open("timing.csv", false);
      write_timing_csv(f, rows, hash);
    }
    for (const auto& r : rows) {
      log << r.sweep_value << ' ' << r.scheme << ": mean " << r.mean << " std " << r.std << " ("
          << r.seconds << " s)\n";
    }
  }
  std::vector<std::string> files = out.files();
  files.push_back("metadata.json");
  meta["files"] = files;
  std::ofstream m(request.out / "metadata.json");
  m << meta.dump(2) << '\n';
  return status;
}

}  // namespace sixdma
