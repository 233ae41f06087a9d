#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"
#include "run_config.hpp"

namespace cli = ipdlearn::cli;

int main(int argc, char** argv) {
  CLI::App app{"Coupled replicator learning in the iterated prisoner's dilemma"};
  app.require_subcommand(1);

  struct Sub {
    CLI::App* app;
    std::map<std::string, std::string> raw;
    std::string config;
  };
  std::map<std::string, Sub> subs;
  const std::map<std::string, std::string> help = {
      {"simulate", "integrate one match and write its trajectory"},
      {"ensemble", "census of random-start matches for one class pair"},
      {"tournament", "censuses for every pair of a class list"},
      {"learning-curves", "one-sided learners against a fixed opponent"},
      {"generosity", "memory-one learning from harvested exploitation equilibria"},
      {"sweep", "tournament censuses across payoff matrices"},
      {"lv", "orbit of the reduced two-variable exploitation dynamics"},
  };
  for (const std::string& name : cli::CommandNames()) {
    Sub& s = subs[name];
    s.app = app.add_subcommand(name, help.at(name));
    for (const std::string& key : cli::ConfigKeys()) s.app->add_option("--" + key, s.raw[key]);
    s.app->add_option("--config", s.config, "flat key = value file; flags override it");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    for (auto& [name, s] : subs) {
      if (!s.app->parsed()) continue;
      cli::RunConfig cfg = cli::RunConfig::ForCommand(name);
      if (!s.config.empty()) {
        for (const auto& [k, v] : cli::ReadConfigFile(s.config)) cli::SetValue(cfg, k, v);
      }
      for (const std::string& key : cli::ConfigKeys()) {
        if (s.app->count("--" + key) > 0) cli::SetValue(cfg, key, s.raw[key]);
      }
      cli::RunCommand(cfg, std::cout);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
