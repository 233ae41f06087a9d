#include "run_config.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <type_traits>

#include "ipdlearn/format.hpp"

namespace ipdlearn::cli {

namespace {

std::string Trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
T ParseAs(const std::string& key, const std::string& v) {
  auto bad = [&] { return std::invalid_argument("bad value for " + key + ": '" + v + "'"); };
  if constexpr (std::is_same_v<T, std::string>) {
    return v;
  } else if constexpr (std::is_same_v<T, bool>) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw bad();
  } else if constexpr (std::is_floating_point_v<T>) {
    try {
      std::size_t pos = 0;
      const double d = std::stod(v, &pos);
      if (pos != v.size()) throw bad();
      return d;
    } catch (const std::logic_error&) {
      throw bad();
    }
  } else {
    if (v.empty() || v[0] == '-') throw bad();
    try {
      std::size_t pos = 0;
      const unsigned long long n = std::stoull(v, &pos);
      if (pos != v.size()) throw bad();
      return static_cast<T>(n);
    } catch (const std::logic_error&) {
      throw bad();
    }
  }
}

template <class T>
std::string Show(const T& v) {
  if constexpr (std::is_same_v<T, std::string>) {
    return v;
  } else if constexpr (std::is_same_v<T, bool>) {
    return v ? "true" : "false";
  } else if constexpr (std::is_floating_point_v<T>) {
    return FormatReal(v);
  } else {
    return std::to_string(v);
  }
}

struct Field {
  std::string name;
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

template <class T>
Field MakeField(std::string name, T RunConfig::*member) {
  return {name,
          [member, name](RunConfig& c, const std::string& v) { c.*member = ParseAs<T>(name, v); },
          [member](const RunConfig& c) { return Show(c.*member); }};
}

const std::vector<Field>& Fields() {
  static const std::vector<Field> fields = {
      MakeField("class-x", &RunConfig::class_x),
      MakeField("class-y", &RunConfig::class_y),
      MakeField("classes", &RunConfig::classes),
      MakeField("payoff", &RunConfig::payoff),
      MakeField("payoffs", &RunConfig::payoffs),
      MakeField("samples", &RunConfig::samples),
      MakeField("seed", &RunConfig::seed),
      MakeField("dt", &RunConfig::dt),
      MakeField("t-max", &RunConfig::t_max),
      MakeField("epsilon", &RunConfig::epsilon),
      MakeField("delta", &RunConfig::delta),
      MakeField("mode", &RunConfig::mode),
      MakeField("fixed-opponent", &RunConfig::fixed_opponent),
      MakeField("learners", &RunConfig::learners),
      MakeField("times", &RunConfig::times),
      MakeField("equilibria", &RunConfig::equilibria),
      MakeField("t-extend", &RunConfig::t_extend),
      MakeField("window-fraction", &RunConfig::window_fraction),
      MakeField("fp-tol", &RunConfig::fp_tol),
      MakeField("cycle-tol", &RunConfig::cycle_tol),
      MakeField("stride", &RunConfig::stride),
      MakeField("drop-reward-edge", &RunConfig::drop_reward_edge),
      MakeField("structure-tol", &RunConfig::structure_tol),
      MakeField("init-x", &RunConfig::init_x),
      MakeField("init-y", &RunConfig::init_y),
      MakeField("x3", &RunConfig::x3),
      MakeField("y4", &RunConfig::y4),
      MakeField("lv-dt", &RunConfig::lv_dt),
      MakeField("lv-steps", &RunConfig::lv_steps),
      MakeField("jobs", &RunConfig::jobs),
      MakeField("out", &RunConfig::out),
  };
  return fields;
}

const Field& FindField(const std::string& key) {
  for (const Field& f : Fields()) {
    if (f.name == key) return f;
  }
  throw std::invalid_argument("unknown config key '" + key + "'");
}

}  // namespace

RunConfig RunConfig::ForCommand(const std::string& command) {
  RunConfig c;
  c.command = command;
  if (command == "generosity") {
    c.class_x = c.class_y = "1212";
    c.samples = 4000;  // upper bound on samples scanned for equilibria
  } else if (command == "tournament" || command == "sweep") {
    c.samples = 200;
  } else if (command == "learning-curves") {
    c.mode = "one-sided";
  }
  return c;
}

const std::vector<std::string>& ConfigKeys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const Field& f : Fields()) k.push_back(f.name);
    return k;
  }();
  return keys;
}

void SetValue(RunConfig& cfg, const std::string& key, const std::string& value) {
  FindField(key).set(cfg, value);
}

std::string GetValue(const RunConfig& cfg, const std::string& key) { return FindField(key).get(cfg); }

std::vector<std::pair<std::string, std::string>> ParseConfigText(const std::string& text) {
  std::vector<std::pair<std::string, std::string>> out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = Trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
    }
    std::string key = Trim(line.substr(0, eq));
    if (key.rfind("--", 0) == 0) key = key.substr(2);
    FindField(key);
    out.emplace_back(key, Trim(line.substr(eq + 1)));
  }
  return out;
}

std::vector<std::pair<std::string, std::string>> ReadConfigFile(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::invalid_argument("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return ParseConfigText(ss.str());
}

std::string ToConfigText(const RunConfig& cfg) {
  std::string out = "# " + cfg.command + "\n";
  for (const Field& f : Fields()) out += f.name + " = " + f.get(cfg) + "\n";
  return out;
}

std::vector<double> ParseReals(const std::string& text, char sep) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, sep)) out.push_back(ParseAs<double>("number list", Trim(tok)));
  return out;
}

std::vector<InformationClass> ParseClassList(const std::string& text) {
  if (text == "all13") return OpponentReferencingClasses();
  if (text == "all15") return EnumerateInformationClasses();
  std::vector<InformationClass> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.emplace_back(Trim(tok));
  if (out.empty()) throw std::invalid_argument("empty class list");
  return out;
}

LearningConfig ToLearningConfig(const RunConfig& c) {
  LearningConfig l;
  l.class_x = InformationClass(c.class_x);
  l.class_y = InformationClass(c.class_y);
  l.payoff = PayoffMatrix::Parse(c.payoff);
  l.dt = c.dt;
  l.t_max = c.t_max;
  l.epsilon = c.epsilon;
  l.mode = ParseLearningMode(c.mode);
  l.window_fraction = c.window_fraction;
  l.fp_tol = c.fp_tol;
  l.cycle_tol = c.cycle_tol;
  l.stride = c.stride;
  l.Validate();
  return l;
}

EnsembleSpec ToEnsembleSpec(const RunConfig& c) {
  EnsembleSpec s;
  s.learning = ToLearningConfig(c);
  s.class_x = s.learning.class_x;
  s.class_y = s.learning.class_y;
  s.samples = c.samples;
  s.seed = c.seed;
  s.jobs = c.jobs;
  s.delta = c.delta;
  s.t_extend = c.t_extend;
  s.drop_reward_edge = c.drop_reward_edge;
  s.Validate();
  return s;
}

}  // namespace ipdlearn::cli
