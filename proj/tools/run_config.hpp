#ifndef IPDLEARN_TOOLS_RUN_CONFIG_HPP
#define IPDLEARN_TOOLS_RUN_CONFIG_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ipdlearn/experiments.hpp"

namespace ipdlearn::cli {

// Everything a command can be told, keyed by flag name without the leading
// dashes. Config files hold one `key = value` per line; '#' starts a comment.
struct RunConfig {
  std::string command;

  std::string class_x = "1234";
  std::string class_y = "1212";
  std::string classes = "1234,1232,1214,1212";  // codes, all13 or all15
  std::string payoff = "5,3,1,0";
  std::string payoffs = "5,3,1,0;5,4,2,0";
  std::size_t samples = 1000;
  std::uint64_t seed = 1;
  double dt = 0.1;
  double t_max = 1e4;
  double epsilon = 1e-4;
  double delta = 0.05;
  std::string mode = "mutual";
  std::string fixed_opponent = "0.9,0.1";
  std::string learners = "1234,1212";
  std::string times;  // empty: a log-spaced grid up to t-max
  std::size_t equilibria = 100;
  double t_extend = 1e5;
  double window_fraction = 0.1;
  double fp_tol = 1e-8;
  double cycle_tol = 1e-3;
  std::size_t stride = 10;
  bool drop_reward_edge = false;
  double structure_tol = 0.02;
  std::string init_x;  // empty: drawn from the seed
  std::string init_y;
  double x3 = 0.3;
  double y4 = 0.55;
  double lv_dt = 1e-3;
  std::size_t lv_steps = 100000;
  std::size_t jobs = 1;
  std::string out = "out";

  // Defaults that differ by command (e.g. generosity harvests from 1212 self-play).
  static RunConfig ForCommand(const std::string& command);
};

// Flag / config key names in a fixed order.
const std::vector<std::string>& ConfigKeys();

// Throws std::invalid_argument for an unknown key or an unparsable value.
void SetValue(RunConfig& cfg, const std::string& key, const std::string& value);
std::string GetValue(const RunConfig& cfg, const std::string& key);

std::vector<std::pair<std::string, std::string>> ParseConfigText(const std::string& text);
std::vector<std::pair<std::string, std::string>> ReadConfigFile(const std::string& path);
// Every key, one per line, in the config file format.
std::string ToConfigText(const RunConfig& cfg);

std::vector<double> ParseReals(const std::string& text, char sep = ',');
std::vector<InformationClass> ParseClassList(const std::string& text);

LearningConfig ToLearningConfig(const RunConfig& cfg);
EnsembleSpec ToEnsembleSpec(const RunConfig& cfg);

}  // namespace ipdlearn::cli

#endif  // IPDLEARN_TOOLS_RUN_CONFIG_HPP
