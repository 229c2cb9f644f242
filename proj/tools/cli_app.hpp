// Command-line front end; main() only forwards to cli_main.
#pragma once

#include "eigrestrict/cli.hpp"
#include "eigrestrict/errors.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <exception>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

namespace eigrestrict::app {

enum ExitCode : int { kPass = 0, kVerdictFail = 1, kConfigError = 2, kNumericalError = 3 };

inline std::string flag_for(const std::string& key) {
  std::string f = key;
  for (char& ch : f)
    if (ch == '_') ch = '-';
  return "--" + f;
}

/// Maps an escaped exception to an exit code and prints it.
inline int exit_code_for(std::exception_ptr ep, std::ostream& err) {
  try {
    std::rethrow_exception(ep);
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << '\n';
    return kNumericalError;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    err << "numerical error: " << e.what() << '\n';
    return kNumericalError;
  }
}

inline int cli_main(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Weighted restriction bounds for Laplace eigenfunctions on spheres"};
  app.require_subcommand(1);

  std::map<std::string, std::map<std::string, std::string>> raw;
  std::map<std::string, std::string> config_file;
  for (const char* name : kExperiments) {
    auto* sub = app.add_subcommand(name, std::string("run the ") + name + " experiment");
    for (const char* key : kConfigKeys) {
      if (std::string(key) == "experiment") continue;
      sub->add_option(flag_for(key), raw[name][key]);
    }
    sub->add_option("--config", config_file[name], "key = value file; flags override it");
  }

  if (argc > 1 && argv[1][0] != '-' &&
      std::none_of(kExperiments.begin(), kExperiments.end(), [&](const char* e) { return std::string(argv[1]) == e; })) {
    err << "config error: unknown experiment '" << argv[1] << "' (expected one of";
    for (const char* e : kExperiments) err << ' ' << e;
    err << ")\n";
    return kConfigError;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kPass;
  } catch (const CLI::ParseError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  }

  try {
    const std::string name = app.get_subcommands().front()->get_name();
    auto* sub = app.get_subcommand(name);
    RunConfig cfg;
    if (!config_file[name].empty()) {
      std::ifstream is(config_file[name]);
      if (!is) throw ConfigError("cannot read config file '" + config_file[name] + "'");
      cfg = parse_config(is);
      if (!cfg.experiment.empty() && cfg.experiment != name)
        throw ConfigError("config file names experiment '" + cfg.experiment + "' but '" + name + "' was requested");
    }
    cfg.experiment = name;
    for (const char* key : kConfigKeys) {
      if (std::string(key) == "experiment" || sub->count(flag_for(key)) == 0) continue;
      try {
        set_config_value(cfg, key, raw[name][key]);
      } catch (const ConfigError& e) {
        throw ConfigError(flag_for(key) + ": " + e.what());
      }
    }
    const RunResult res = run(cfg, out);
    for (const auto& f : res.files) out << "wrote " << f.string() << '\n';
    return res.exit_code == 0 ? kPass : kVerdictFail;
  } catch (...) {
    return exit_code_for(std::current_exception(), err);
  }
}

}  // namespace eigrestrict::app
