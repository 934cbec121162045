#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <string>

#include "nle/config.hpp"
#include "nle/error.hpp"
#include "nle/run.hpp"

namespace {

int exit_code(nle::Errc code) {
  switch (code) {
    case nle::Errc::config_parse:
      return 2;
    case nle::Errc::config_validation:
      return 3;
    default:
      return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nonlocal and fractional linear elasticity: solves, identity checks and constant sweeps.\n"
               "Settings come from an optional key = value file; flags override file keys.\n"
               "NLE_THREADS caps the worker count (0 or unset: all cores)."};
  app.set_help_flag("--help", "Print this help message and exit");
  app.set_help_all_flag("--help-all");

  std::string command;
  std::string config_file;
  std::map<std::string, std::string> flags;
  app.add_option("command", command, "solve | verify | korn | poincare | eringen | symbol | info")
      ->required()
      ->check(CLI::IsMember(nle::subcommands()));
  app.add_option("-c,--config", config_file, "key = value configuration file");
  for (const auto& [key, help] : nle::config_keys()) app.add_option("--" + key, flags[key], help);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    nle::RunConfig cfg;
    cfg.command = command;
    if (!config_file.empty()) nle::parse_config_file(config_file, cfg);
    for (const auto& [key, help] : nle::config_keys()) {
      if (app.get_option("--" + key)->count() == 0) continue;
      nle::set_config_value(cfg, key, flags[key], "flag --" + key);
    }
    nle::validate(cfg);
    return nle::run(cfg, std::cout);
  } catch (const nle::Error& e) {
    std::cerr << "nle: " << e.what() << "\n";
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "nle: " << e.what() << "\n";
    return 1;
  }
}
