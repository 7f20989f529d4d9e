#include "sixdma/experiment.hpp"
#include "sixdma/parallel.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"Six-dimensional movable antenna placement: codebooks, optimization, benchmarks"};
  app.require_subcommand(0, 1);

  std::string config_path;
  std::uint64_t seed = 1;
  std::string out = "out";
  int threads = 0;
  bool print_defaults = false;
  std::vector<std::string> overrides;
  app.add_option("-c,--config", config_path, "INI configuration file")->check(CLI::ExistingFile);
  app.add_option("-s,--seed", seed, "base seed");
  app.add_option("-o,--out", out, "output directory");
  app.add_option("-j,--threads", threads, "worker threads (0: hardware)");
  app.add_option("--set", overrides, "override, section.key=value")->take_all();
  app.add_flag("--print-defaults", print_defaults, "print the default configuration and exit");

  auto* gen = app.add_subcommand("generate-codebook", "build and validate a pose codebook");
  std::string kind;
  int positions = 0;
  gen->add_option("--kind", kind, "grid or sphere")->check(CLI::IsMember({"grid", "sphere"}));
  gen->add_option("--M", positions, "number of candidate positions")->check(CLI::PositiveNumber);

  auto* off = app.add_subcommand("optimize-offline", "statistical-CSI optimization");
  auto* on = app.add_subcommand("optimize-online", "conditional sample mean from measurements");
  int samples = 0;
  on->add_option("--T", samples, "number of measured samples")->check(CLI::PositiveNumber);

  auto* bench = app.add_subcommand("benchmark", "sector-antenna baselines");
  std::string bench_kind = "fpa";
  bench->add_option("--kind", bench_kind, "fpa, circular or rotations")
      ->check(CLI::IsMember({"fpa", "circular", "rotations"}));

  auto* sweep = app.add_subcommand("sweep", "all schemes over the configured sweep axis");
  (void)off;
  (void)sweep;

  CLI11_PARSE(app, argc, argv);

  try {
    sixdma::IniFile ini = config_path.empty() ? sixdma::IniFile{} : sixdma::IniFile::load(config_path);
    for (const auto& o : overrides) ini.set(o);
    if (!kind.empty()) ini.set("codebook", "kind", kind);
    if (positions > 0) ini.set("codebook", "positions", std::to_string(positions));
    if (samples > 0) ini.set("online", "samples", std::to_string(samples));
    const auto cfg = sixdma::ExperimentConfig::from_ini(ini);

    if (print_defaults) {
      std::cout << cfg.to_ini();
      return 0;
    }
    if (app.get_subcommands().empty()) {
      std::cerr << app.help();
      return 1;
    }
    if (threads > 0) sixdma::default_threads() = threads;

    sixdma::RunRequest request;
    request.command = app.get_subcommands().front()->get_name();
    request.config = cfg;
    request.seed = seed;
    request.out = out;
    request.benchmark_kind = bench_kind;
    return sixdma::run(request, std::cout);
  } catch (const sixdma::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const sixdma::InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
