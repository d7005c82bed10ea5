#include "tbc/config.hpp"

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <vector>

#include "CLI11.hpp"

namespace tbc {

namespace {

const char* const kKeys[] = {"E",      "F",      "lambda", "tau",   "beta",   "experiment", "n",     "trials",
                             "seed",   "window", "M",      "points", "check", "format",     "output"};

const std::pair<Experiment, const char*> kExperiments[] = {
    {Experiment::spectrum, "spectrum"},       {Experiment::single_atom, "single-atom"},
    {Experiment::channel_evolve, "channel-evolve"}, {Experiment::walk, "walk"},
    {Experiment::rate, "rate"},               {Experiment::fcs_energy, "fcs-energy"},
    {Experiment::fcs_position, "fcs-position"}, {Experiment::verify_all, "verify-all"},
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(const std::map<std::string, std::string>& s, const std::string& key) {
  const std::string& text = s.at(key);
  T v{};
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw ConfigError("invalid value '" + text + "' for key '" + key + "'");
  }
  return v;
}

template <class T>
T optional_number(const std::map<std::string, std::string>& s, const std::string& key, T fallback) {
  return s.count(key) ? parse_number<T>(s, key) : fallback;
}

double required_param(const std::map<std::string, std::string>& s, const std::string& key) {
  if (!s.count(key)) throw ConfigError("missing required parameter '" + key + "'");
  return parse_number<double>(s, key);
}

}  // namespace

std::string experiment_name(Experiment e) {
  for (const auto& [k, name] : kExperiments)
    if (k == e) return name;
  throw std::logic_error("unknown experiment");
}

Experiment experiment_from_name(const std::string& name) {
  for (const auto& [k, n] : kExperiments)
    if (name == n) return k;
  throw ConfigError("unknown experiment '" + name + "'");
}

RunConfig config_from_settings(const std::map<std::string, std::string>& s) {
  for (const auto& [key, value] : s) {
    bool known = false;
    for (const char* k : kKeys) known = known || key == k;
    if (!known) throw ConfigError("unknown key '" + key + "'");
  }
  for (const char* k : {"E", "F", "lambda", "tau", "beta"}) required_param(s, k);
  RunConfig cfg(ModelParams(required_param(s, "E"), required_param(s, "F"), required_param(s, "lambda"),
                            required_param(s, "tau"), required_param(s, "beta")));
  if (!s.count("experiment")) throw ConfigError("missing required key 'experiment'");
  cfg.experiment = experiment_from_name(s.at("experiment"));

  int n_default = 0;
  switch (cfg.experiment) {
    case Experiment::walk: n_default = 1000; break;
    case Experiment::channel_evolve: n_default = 20; break;
    case Experiment::single_atom: n_default = 50; break;
    case Experiment::fcs_energy: n_default = 2; break;
    case Experiment::fcs_position: n_default = 100; break;
    default: break;
  }
  cfg.n = optional_number<int>(s, "n", n_default);
  cfg.trials = optional_number<std::int64_t>(s, "trials", 10000);
  cfg.seed = optional_number<std::uint64_t>(s, "seed", 1);
  cfg.window = optional_number<int>(s, "window", cfg.experiment == Experiment::fcs_energy ? 16 : 10);
  cfg.M = optional_number<int>(s, "M", cfg.n);
  cfg.points = optional_number<int>(s, "points", 201);
  cfg.check = optional_number<int>(s, "check", 0);

  if (cfg.n < 0) throw ConfigError("key 'n' must be >= 0");
  if (cfg.trials < 1) throw ConfigError("key 'trials' must be >= 1");
  if (cfg.window < 1) throw ConfigError("key 'window' must be >= 1");
  if (cfg.M < 0) throw ConfigError("key 'M' must be >= 0");
  if (cfg.points < 2) throw ConfigError("key 'points' must be >= 2");
  if (cfg.check < 0) throw ConfigError("key 'check' must be >= 0");

  if (s.count("format")) {
    const std::string& f = s.at("format");
    if (f == "csv") {
      cfg.format = OutputFormat::csv;
    } else if (f == "json") {
      cfg.format = OutputFormat::json;
    } else {
      throw ConfigError("invalid value '" + f + "' for key 'format' (csv or json)");
    }
  }
  if (s.count("output")) cfg.output = s.at("output");
  return cfg;
}

std::map<std::string, std::string> parse_config_text(const std::string& text) {
  std::map<std::string, std::string> out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    if (out.count(key)) throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    out[key] = value;
  }
  return out;
}

std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config_text(ss.str());
}

RunConfig parse_config(int argc, const char* const* argv) {
  CLI::App app("Tight-binding particle driven by repeated interactions with thermal atoms", "tbcurrent");
  app.require_subcommand(0, 1);
  app.fallthrough();

  std::map<std::string, std::string> flags;
  std::string config_path;
  std::vector<std::pair<std::string, CLI::Option*>> options;
  auto flag = [&](CLI::App& a, const std::string& key, const std::string& help) {
    options.emplace_back(key, a.add_option("--" + key, flags[key], help));
  };
  app.add_option("--config", config_path, "key = value configuration file");
  flag(app, "E", "atomic level spacing");
  flag(app, "F", "force on the particle (> 0)");
  flag(app, "lambda", "coupling strength");
  flag(app, "tau", "interaction time (> 0)");
  flag(app, "beta", "inverse temperature of the atoms");
  flag(app, "format", "csv or json");
  flag(app, "output", "output file, '-' for standard output");

  std::vector<CLI::App*> subs;
  for (const auto& [e, name] : kExperiments) {
    CLI::App* sub = app.add_subcommand(name, "run the " + std::string(name) + " experiment");
    flag(*sub, "n", "number of interactions");
    flag(*sub, "trials", "Monte Carlo trials");
    flag(*sub, "seed", "random seed");
    flag(*sub, "window", "lattice half width");
    flag(*sub, "M", "number of reservoir atoms");
    flag(*sub, "points", "grid points");
    flag(*sub, "check", "verify-all: single check id");
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream out, err;
    if (app.exit(e, out, err) == 0) throw HelpRequested(out.str());
    throw ConfigError(trim(err.str().empty() ? std::string(e.what()) : err.str()));
  }

  std::map<std::string, std::string> settings;
  if (!config_path.empty()) settings = read_config_file(config_path);
  for (const auto& [key, opt] : options)
    if (opt->count() > 0) settings[key] = flags[key];
  for (CLI::App* sub : subs)
    if (sub->parsed()) settings["experiment"] = sub->get_name();
  return config_from_settings(settings);
}

std::string resolve_output_path(const RunConfig& cfg) {
  if (cfg.output == "-") return "-";
  const char* dir = std::getenv(kOutputDirEnv);
  const bool have_dir = dir != nullptr && *dir != '\0';
  if (cfg.output.empty()) {
    if (!have_dir) return "-";
    const std::string ext = cfg.format == OutputFormat::csv ? ".csv" : ".json";
    return (std::filesystem::path(dir) / (experiment_name(cfg.experiment) + ext)).string();
  }
  const std::filesystem::path p(cfg.output);
  if (have_dir && p.is_relative()) return (std::filesystem::path(dir) / p).string();
  return cfg.output;
}

}  // namespace tbc
