#include "sixdma/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <set>
#include <sstream>

namespace sixdma {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

IniFile IniFile::parse(std::istream& in, const std::string& source) {
  IniFile ini;
  ini.source_ = source;
  std::string line, section;
  int line_no = 0;
  auto fail = [&](const std::string& what) {
    throw ConfigError(source + ":" + std::to_string(line_no) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++line_no;
    const auto comment = line.find_first_of("#;");
    if (comment != std::string::npos) line.erase(comment);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail("unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) fail("empty section name");
      ini.sections_[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail("expected 'key = value'");
    if (section.empty()) fail("key outside of any [section]");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) fail("missing key before '='");
    auto& keys = ini.sections_[section];
    if (keys.count(key)) {
      fail("duplicate key '" + key + "' (first set on line " + std::to_string(keys[key].line) + ")");
    }
    keys[key] = {trim(line.substr(eq + 1)), line_no};
  }
  return ini;
}

IniFile IniFile::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config file");
  return parse(in, path);
}

void IniFile::set(const std::string& assignment) {
  const auto eq = assignment.find('=');
  const auto dot = assignment.find('.');
  if (eq == std::string::npos || dot == std::string::npos || dot > eq) {
    throw ConfigError("--set '" + assignment + "': expected section.key=value");
  }
  set(trim(assignment.substr(0, dot)), trim(assignment.substr(dot + 1, eq - dot - 1)),
      trim(assignment.substr(eq + 1)));
}

void IniFile::set(const std::string& section, const std::string& key, const std::string& value) {
  sections_[section][key] = {value, 0};
}

std::string to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::None: return "none";
    case SweepAxis::Power: return "power_mw";
    case SweepAxis::MeanUsers: return "mean_users";
    case SweepAxis::RegularFraction: return "regular_fraction";
    case SweepAxis::Positions: return "positions";
    case SweepAxis::Rotations: return "rotations";
  }
  return "none";
}

double dbm_to_watts(double dbm) { return std::pow(10.0, dbm / 10.0) / 1000.0; }
double watts_to_dbm(double watts) { return 10.0 * std::log10(watts * 1000.0); }

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << h;
  return out.str();
}

namespace {

// Typed access to one section; every read marks the key as used.
class Reader {
 public:
  Reader(const IniFile& ini, std::string section) : ini_(ini), section_(std::move(section)) {
    const auto it = ini.sections().find(section_);
    if (it != ini.sections().end()) keys_ = &it->second;
  }

  template <typename T>
  void read(const std::string& key, T& out) {
    const IniFile::Entry* e = find(key);
    if (!e) return;
    if constexpr (std::is_same_v<T, std::string>) {
      out = e->value;
    } else if constexpr (std::is_same_v<T, bool>) {
      if (e->value == "true" || e->value == "1") out = true;
      else if (e->value == "false" || e->value == "0") out = false;
      else fail(*e, key, "expected true or false");
    } else {
      T v{};
      const char* first = e->value.data();
      const char* last = first + e->value.size();
      const auto [ptr, ec] = std::from_chars(first, last, v);
      if (ec != std::errc() || ptr != last) fail(*e, key, "cannot parse '" + e->value + "'");
      out = v;
    }
  }

  [[nodiscard]] const IniFile::Entry* find(const std::string& key) {
    if (!keys_) return nullptr;
    const auto it = keys_->find(key);
    if (it == keys_->end()) return nullptr;
    used_.insert(key);
    return &it->second;
  }

  [[noreturn]] void fail(const IniFile::Entry& e, const std::string& key,
                         const std::string& what) const {
    throw ConfigError(ini_.source() + ":" + std::to_string(e.line) + ": [" + section_ + "] " + key +
                      ": " + what);
  }

  void finish() const {
    if (!keys_) return;
    for (const auto& [key, e] : *keys_) {
      if (!used_.count(key)) fail(e, key, "unknown key");
    }
  }

 private:
  const IniFile& ini_;
  std::string section_;
  const std::map<std::string, IniFile::Entry>* keys_{nullptr};
  std::set<std::string> used_;
};

void read_codebook(Reader& r, CodebookConfig& c) {
  if (const auto* e = r.find("kind")) {
    if (e->value == "grid") c.kind = CodebookKind::Grid;
    else if (e->value == "sphere") c.kind = CodebookKind::Sphere;
    else r.fail(*e, "kind", "expected grid or sphere");
  }
  r.read("positions", c.positions);
  r.read("cube_side", c.cube_side);
  r.read("rot_alpha", c.rotations.alpha);
  r.read("rot_beta", c.rotations.beta);
  r.read("rot_gamma", c.rotations.gamma);
  r.read("radius", c.radius);
  r.read("facets", c.facets);
  r.read("min_distance", c.min_distance);
}

void write_codebook(std::ostream& out, const CodebookConfig& c) {
  out << "kind = " << (c.kind == CodebookKind::Grid ? "grid" : "sphere") << '\n'
      << "positions = " << c.positions << '\n'
      << "cube_side = " << c.cube_side << '\n'
      << "rot_alpha = " << c.rotations.alpha << '\n'
      << "rot_beta = " << c.rotations.beta << '\n'
      << "rot_gamma = " << c.rotations.gamma << '\n'
      << "radius = " << c.radius << '\n'
      << "facets = " << c.facets << '\n'
      << "min_distance = " << c.min_distance << '\n';
}

std::string join(const std::vector<std::string>& items) {
  std::string s;
  for (const auto& item : items) s += (s.empty() ? "" : ",") + item;
  return s;
}

}  // namespace

ExperimentConfig ExperimentConfig::from_ini(const IniFile& ini) {
  static const std::set<std::string> known{"system", "pattern", "codebook", "scenario",
                                           "offline", "online", "benchmark", "sweep"};
  for (const auto& [name, keys] : ini.sections()) {
    if (!known.count(name)) {
      const int line = keys.empty() ? 0 : keys.begin()->second.line;
      throw ConfigError(ini.source() + ":" + std::to_string(line) + ": unknown section [" + name + "]");
    }
  }
  ExperimentConfig cfg;

  Reader sys(ini, "system");
  double power_mw = cfg.system.transmit_power_w * 1000.0;
  double noise_dbm = watts_to_dbm(cfg.system.noise_power_w);
  sys.read("wavelength", cfg.system.wavelength);
  sys.read("power_mw", power_mw);
  sys.read("noise_dbm", noise_dbm);
  sys.read("antennas", cfg.system.antennas_per_surface);
  sys.read("surfaces", cfg.system.surfaces);
  sys.finish();
  cfg.system.transmit_power_w = power_mw / 1000.0;
  cfg.system.noise_power_w = dbm_to_watts(noise_dbm);

  Reader pat(ini, "pattern");
  pat.read("max_gain_dbi", cfg.pattern.max_gain_dbi);
  pat.read("front_back_db", cfg.pattern.front_back_db);
  pat.read("sidelobe_db", cfg.pattern.sidelobe_db);
  pat.read("theta_3db_deg", cfg.pattern.theta_3db_deg);
  pat.read("phi_3db_deg", cfg.pattern.phi_3db_deg);
  pat.finish();

  Reader cb(ini, "codebook");
  read_codebook(cb, cfg.codebook);
  cb.finish();

  Reader sc(ini, "scenario");
  sc.read("mean_users", cfg.scenario.mean_users);
  sc.read("inner_radius", cfg.scenario.inner_radius);
  sc.read("outer_radius", cfg.scenario.outer_radius);
  sc.read("regular_fraction", cfg.scenario.regular_fraction);
  sc.read("realizations", cfg.realizations);
  if (const auto* e = sc.find("hotspots")) {
    cfg.scenario.hotspots.clear();
    for (const auto& item : split(e->value, ',')) {
      const auto f = split(item, ':');
      std::vector<double> v;
      for (const auto& x : f) {
        double d = 0;
        const auto [ptr, ec] = std::from_chars(x.data(), x.data() + x.size(), d);
        if (ec != std::errc() || ptr != x.data() + x.size()) sc.fail(*e, "hotspots", "bad number '" + x + "'");
        v.push_back(d);
      }
      if (v.size() != 5) sc.fail(*e, "hotspots", "expected distance:azimuth:elevation:radius:weight");
      cfg.scenario.hotspots.push_back(Hotspot::at(v[0], v[1], v[2], v[3], v[4]));
    }
  }
  sc.finish();

  Reader off(ini, "offline");
  off.read("iterations", cfg.offline.max_iterations);
  off.read("fd_epsilon", cfg.offline.fd_epsilon);
  off.read("central", cfg.offline.central_differences);
  if (const auto* e = off.find("step")) {
    if (e->value == "diminishing") cfg.offline.step_rule = StepRule::Diminishing;
    else if (e->value == "fixed") cfg.offline.step_rule = StepRule::Fixed;
    else off.fail(*e, "step", "expected diminishing or fixed");
  }
  off.read("fixed_step", cfg.offline.fixed_step);
  off.read("restarts", cfg.offline.restarts);
  off.read("gap_tolerance", cfg.offline.gap_tolerance);
  off.read("max_halvings", cfg.offline.max_halvings);
  off.read("initial_components", cfg.offline.initial_components);
  off.finish();

  Reader on(ini, "online");
  read_codebook(on, cfg.online.codebook);
  on.read("samples", cfg.online.samples);
  if (const auto* e = on.find("population")) {
    if (e->value == "fresh") cfg.online.population = Population::Fresh;
    else if (e->value == "frozen") cfg.online.population = Population::Frozen;
    else on.fail(*e, "population", "expected fresh or frozen");
  }
  on.finish();

  Reader bm(ini, "benchmark");
  bm.read("downtilt_deg", cfg.benchmark.downtilt_deg);
  bm.read("radius", cfg.benchmark.radius);
  bm.read("height", cfg.benchmark.height);
  bm.read("positions", cfg.benchmark.positions);
  bm.read("rotations", cfg.benchmark.rotations);
  bm.read("sweeps", cfg.benchmark.sweeps);
  bm.read("antennas_per_sector", cfg.benchmark.antennas_per_sector);
  bm.finish();

  Reader sw(ini, "sweep");
  if (const auto* e = sw.find("axis")) {
    bool ok = false;
    for (auto a : {SweepAxis::None, SweepAxis::Power, SweepAxis::MeanUsers,
                   SweepAxis::RegularFraction, SweepAxis::Positions, SweepAxis::Rotations}) {
      if (e->value == to_string(a)) {
        cfg.sweep.axis = a;
        ok = true;
      }
    }
    if (!ok) sw.fail(*e, "axis", "expected none|power_mw|mean_users|regular_fraction|positions|rotations");
  }
  if (const auto* e = sw.find("values")) {
    cfg.sweep.values.clear();
    for (const auto& x : split(e->value, ',')) {
      double d = 0;
      const auto [ptr, ec] = std::from_chars(x.data(), x.data() + x.size(), d);
      if (ec != std::errc() || ptr != x.data() + x.size()) sw.fail(*e, "values", "bad number '" + x + "'");
      cfg.sweep.values.push_back(d);
    }
  }
  sw.read("seeds", cfg.sweep.seeds);
  if (const auto* e = sw.find("schemes")) {
    cfg.sweep.schemes = split(e->value, ',');
    for (const auto& s : cfg.sweep.schemes) {
      if (s != "offline" && s != "online" && s != "fpa" && s != "circular" && s != "rotations") {
        sw.fail(*e, "schemes", "unknown scheme '" + s + "'");
      }
    }
  }
  sw.finish();

  cfg.offline.realizations = cfg.realizations;
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(ini.source() + ": " + e.what());
  }
  return cfg;
}

void ExperimentConfig::validate() const {
  system.validate();
  scenario.validate();
  offline.validate();
  benchmark.validate();
  if (realizations < 1) throw std::invalid_argument("scenario: realizations must be >= 1");
  for (const auto* c : {&codebook, &online.codebook}) {
    if (c->positions < 1) throw std::invalid_argument("codebook: positions must be >= 1");
    if (c->rotations.count() < 1 || c->facets < 0) {
      throw std::invalid_argument("codebook: rotation counts must be positive");
    }
  }
  if (online.samples < 0) throw std::invalid_argument("online: samples must be >= 0");
  if (sweep.seeds < 1) throw std::invalid_argument("sweep: seeds must be >= 1");
  if (sweep.axis != SweepAxis::None && sweep.values.empty()) {
    throw std::invalid_argument("sweep: axis set but no values");
  }
}

std::string ExperimentConfig::to_ini() const {
  std::ostringstream out;
  out << std::setprecision(10);
  out << "[system]\n"
      << "wavelength = " << system.wavelength << '\n'
      << "power_mw = " << system.transmit_power_w * 1000.0 << '\n'
      << "noise_dbm = " << watts_to_dbm(system.noise_power_w) << '\n'
      << "antennas = " << system.antennas_per_surface << '\n'
      << "surfaces = " << system.surfaces << '\n';
  out << "\n[pattern]\n"
      << "max_gain_dbi = " << pattern.max_gain_dbi << '\n'
      << "front_back_db = " << pattern.front_back_db << '\n'
      << "sidelobe_db = " << pattern.sidelobe_db << '\n'
      << "theta_3db_deg = " << pattern.theta_3db_deg << '\n'
      << "phi_3db_deg = " << pattern.phi_3db_deg << '\n';
  out << "\n[codebook]\n";
  write_codebook(out, codebook);
  out << "\n[scenario]\n"
      << "mean_users = " << scenario.mean_users << '\n'
      << "inner_radius = " << scenario.inner_radius << '\n'
      << "outer_radius = " << scenario.outer_radius << '\n'
      << "regular_fraction = " << scenario.regular_fraction << '\n'
      << "realizations = " << realizations << '\n'
      << "hotspots = ";
  const double deg = 180.0 / std::numbers::pi;
  for (std::size_t v = 0; v < scenario.hotspots.size(); ++v) {
    const auto& h = scenario.hotspots[v];
    const double d = h.center.norm();
    out << (v ? ", " : "") << d << ':' << std::atan2(h.center.y(), h.center.x()) * deg << ':'
        << std::asin(h.center.z() / d) * deg << ':' << h.radius << ':' << h.weight;
  }
  out << '\n';
  out << "\n[offline]\n"
      << "iterations = " << offline.max_iterations << '\n'
      << "fd_epsilon = " << offline.fd_epsilon << '\n'
      << "central = " << (offline.central_differences ? "true" : "false") << '\n'
      << "step = " << (offline.step_rule == StepRule::Diminishing ? "diminishing" : "fixed") << '\n'
      << "fixed_step = " << offline.fixed_step << '\n'
      << "restarts = " << offline.restarts << '\n'
      << "gap_tolerance = " << offline.gap_tolerance << '\n'
      << "max_halvings = " << offline.max_halvings << '\n'
      << "initial_components = " << offline.initial_components << '\n';
  out << "\n[online]\n";
  write_codebook(out, online.codebook);
  out << "samples = " << online.samples << '\n'
      << "population = " << (online.population == Population::Fresh ? "fresh" : "frozen") << '\n';
  out << "\n[benchmark]\n"
      << "downtilt_deg = " << benchmark.downtilt_deg << '\n'
      << "radius = " << benchmark.radius << '\n'
      << "height = " << benchmark.height << '\n'
      << "positions = " << benchmark.positions << '\n'
      << "rotations = " << benchmark.rotations << '\n'
      << "sweeps = " << benchmark.sweeps << '\n'
      << "antennas_per_sector = " << benchmark.antennas_per_sector << '\n';
  out << "\n[sweep]\n"
      << "axis = " << to_string(sweep.axis) << '\n'
      << "values = ";
  for (std::size_t i = 0; i < sweep.values.size(); ++i) out << (i ? "," : "") << sweep.values[i];
  out << '\n'
      << "seeds = " << sweep.seeds << '\n'
      << "schemes = " << join(sweep.schemes) << '\n';
  return out.str();
}

std::string ExperimentConfig::hash() const { return fnv1a_hex(to_ini()); }

}  // namespace sixdma
