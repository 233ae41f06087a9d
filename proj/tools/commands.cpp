#include "commands.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "ipdlearn/analysis.hpp"
#include "ipdlearn/experiments.hpp"
#include "ipdlearn/format.hpp"
#include "ipdlearn/report_io.hpp"

namespace ipdlearn::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json Metadata(const RunConfig& cfg) {
  json config = json::object();
  for (const std::string& k : ConfigKeys()) config[k] = GetValue(cfg, k);
  return {{"artifact", "ipdlearn"},
          {"version", kArtifactVersion},
          {"command", cfg.command},
          {"seed", cfg.seed},
          {"config", config}};
}

class OutputDir {
 public:
  explicit OutputDir(const RunConfig& cfg) : cfg_(cfg), dir_(cfg.out) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec || !fs::is_directory(dir_)) {
      throw std::runtime_error("cannot create output directory '" + dir_.string() + "'");
    }
    Open("config.txt") << ToConfigText(cfg);
  }

  std::ofstream Open(const std::string& name) const {
    std::ofstream f(dir_ / name);
    if (!f) throw std::runtime_error("cannot write '" + (dir_ / name).string() + "'");
    return f;
  }

  void WriteJson(const std::string& name, json body) const {
    body["metadata"] = Metadata(cfg_);
    auto f = Open(name);
    f << body.dump(2) << '\n';
    if (!f) throw std::runtime_error("failed writing '" + (dir_ / name).string() + "'");
  }

  template <class Writer>
  void WriteText(const std::string& name, Writer&& w) const {
    auto f = Open(name);
    w(f);
    if (!f) throw std::runtime_error("failed writing '" + (dir_ / name).string() + "'");
  }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

 private:
  const RunConfig& cfg_;
  fs::path dir_;
};

std::string CountsLine(const CensusReport& r) {
  std::ostringstream os;
  for (OutcomeLabel l : kAllOutcomeLabels) os << ' ' << ToString(l) << '=' << r.count(l);
  return os.str();
}

// Tournament-style commands take their classes from --classes, or from
// --class-x when that names a whole set.
RunConfig WithClassList(RunConfig cfg, std::vector<InformationClass>& classes) {
  if (cfg.class_x == "all13" || cfg.class_x == "all15") cfg.classes = cfg.class_x;
  classes = ParseClassList(cfg.classes);
  cfg.class_x = cfg.class_y = classes.front().code();
  return cfg;
}

void Simulate(const RunConfig& cfg, std::ostream& log) {
  const EnsembleSpec spec = ToEnsembleSpec(cfg);
  auto [ix, iy] = SampleInits(spec, 0);
  if (!cfg.init_x.empty()) ix = ParseReals(cfg.init_x);
  if (!cfg.init_y.empty()) {
    iy = ParseReals(cfg.init_y);
  } else if (spec.learning.mode == LearningMode::kOneSidedX) {
    iy = ParseReals(cfg.fixed_opponent);
  }
  const ClassStrategy sx(spec.class_x, ix), sy(spec.class_y, iy);
  const Trajectory traj = IntegrateMatch(sx, sy, spec.MatchConfig());

  OutputDir out(cfg);
  out.WriteText("trajectory.csv", [&](std::ostream& os) { WriteTrajectoryCsv(traj, os); });
  json outcome = TrajectoryOutcomeJson(traj, spec.learning.payoff, spec.delta,
                                       {cfg.structure_tol, cfg.epsilon, cfg.cycle_tol});
  outcome["init_x"] = RoundedArray(ix);
  outcome["init_y"] = RoundedArray(iy);
  out.WriteJson("outcome.json", outcome);
  log << "label " << outcome["label"].get<std::string>() << ", attractor "
      << outcome["attractor"].get<std::string>() << ", u=" << FormatReal(outcome["u"].get<double>())
      << " v=" << FormatReal(outcome["v"].get<double>()) << '\n';
}

void Ensemble(const RunConfig& cfg, std::ostream& log) {
  const EnsembleSpec spec = ToEnsembleSpec(cfg);
  const CensusReport r = RunMatchEnsemble(spec);
  OutputDir out(cfg);
  out.WriteText("census.csv", [&](std::ostream& os) { WriteCensusCsv(r, os); });
  out.WriteJson("census.json", CensusJson(r));
  log << r.class_x.code() << " vs " << r.class_y.code() << ':' << CountsLine(r) << '\n';
}

void Tournament(const RunConfig& raw, std::ostream& log) {
  std::vector<InformationClass> classes;
  const RunConfig cfg = WithClassList(raw, classes);
  const TournamentReport t = RunClassTournament(classes, ToEnsembleSpec(cfg));
  OutputDir out(cfg);
  for (const CensusReport& c : t.cells) {
    out.WriteText("census_" + c.class_x.code() + "_" + c.class_y.code() + ".csv",
                  [&](std::ostream& os) { WriteCensusCsv(c, os); });
  }
  out.WriteJson("tournament.json", TournamentJson(t));
  log << t.cells.size() << " pairs\n";
  for (const ExploitEdge& e : ExploitationEdges(t)) {
    log << "  " << e.exploiter.code() << " exploits " << e.exploited.code() << " (" << e.count
        << ")\n";
  }
}

void LearningCurves(const RunConfig& cfg, std::ostream& log) {
  const EnsembleSpec spec = ToEnsembleSpec(cfg);
  const ClassStrategy opponent(spec.class_y, ParseReals(cfg.fixed_opponent));
  const std::vector<double> times =
      cfg.times.empty() ? DefaultTimeGrid(cfg.t_max) : ParseReals(cfg.times);
  const OneSidedTable t = RunOneSidedLearning(spec, ParseClassList(cfg.learners), opponent, times);
  OutputDir out(cfg);
  out.WriteText("learning_curves.csv", [&](std::ostream& os) { WriteOneSidedCsv(t, os); });
  out.WriteJson("learning_curves.json", OneSidedJson(t));
  for (std::size_t l = 0; l < t.learners.size(); ++l) {
    log << t.learners[l].code() << ": final mean payoff " << FormatReal(t.mean_u[l].back()) << '\n';
  }
}

void Generosity(const RunConfig& cfg, std::ostream& log) {
  const GenerosityReport r = RunGenerosityExperiment(cfg.equilibria, ToEnsembleSpec(cfg));
  OutputDir out(cfg);
  out.WriteText("generosity.csv", [&](std::ostream& os) { WriteGenerosityCsv(r, os); });
  out.WriteJson("generosity.json", GenerosityJson(r));
  log << r.cases.size() << " exploitation equilibria from " << r.scanned
      << " samples; mean du=" << FormatReal(r.mean_du) << " dv=" << FormatReal(r.mean_dv) << '\n';
}

void Sweep(const RunConfig& raw, std::ostream& log) {
  std::vector<InformationClass> classes;
  const RunConfig cfg = WithClassList(raw, classes);
  std::vector<std::array<double, 4>> matrices;
  std::stringstream ss(cfg.payoffs);
  std::string tok;
  while (std::getline(ss, tok, ';')) {
    const std::vector<double> v = ParseReals(tok);
    if (v.size() != 4) throw std::invalid_argument("each payoff needs four values T,R,P,S: '" + tok + "'");
    matrices.push_back({v[0], v[1], v[2], v[3]});
  }
  const auto entries = RunSubmodularitySweep(matrices, classes, ToEnsembleSpec(cfg));
  OutputDir out(cfg);
  out.WriteJson("sweep.json", {{"entries", SweepJson(entries)}});
  for (const SweepEntry& e : entries) {
    log << e.payoff.ToString() << (e.submodular ? " (submodular)" : "") << ':';
    for (std::size_t k = 0; k < kAllOutcomeLabels.size(); ++k) {
      log << ' ' << ToString(kAllOutcomeLabels[k]) << '=' << e.counts[k];
    }
    log << '\n';
  }
}

void Lv(const RunConfig& cfg, std::ostream& log) {
  const PayoffMatrix pm = PayoffMatrix::Parse(cfg.payoff);
  const LVState start{cfg.x3, cfg.y4};
  const auto orbit = IntegrateLv(start, pm, cfg.lv_dt, cfg.lv_steps);
  const double h0 = LvInvariant(start, pm);
  double drift = 0.0;
  for (const LVState& s : orbit) drift = std::max(drift, std::abs(LvInvariant(s, pm) - h0));

  json body = {{"payoff", pm.ToString()},
               {"submodular", IsSubmodular(pm)},
               {"start", {Rounded(start.x3), Rounded(start.y4)}},
               {"H0", Rounded(h0)},
               {"max_H_drift", Rounded(drift)},
               {"duration", Rounded(cfg.lv_dt * static_cast<double>(cfg.lv_steps))}};
  try {
    const LvFixedPoint fp = ComputeLvFixedPoint(pm);
    body["fixed_point"] = {{"x3", Rounded(fp.x3)}, {"y4", Rounded(fp.y4)},
                           {"u", Rounded(fp.u)},   {"v", Rounded(fp.v)}};
  } catch (const std::domain_error&) {
    body["fixed_point"] = nullptr;
  }
  OutputDir out(cfg);
  out.WriteText("lv.csv", [&](std::ostream& os) {
    os << "time,x3,y4,H\n";
    for (std::size_t k = 0; k < orbit.size(); k += std::max<std::size_t>(cfg.stride, 1)) {
      os << FormatReal(cfg.lv_dt * static_cast<double>(k)) << ',' << FormatReal(orbit[k].x3) << ','
         << FormatReal(orbit[k].y4) << ',' << FormatReal(LvInvariant(orbit[k], pm)) << '\n';
    }
  });
  out.WriteJson("lv.json", body);
  log << "H0=" << FormatReal(h0) << ", max drift " << FormatReal(drift) << '\n';
}

}  // namespace

const std::vector<std::string>& CommandNames() {
  static const std::vector<std::string> names = {
      "simulate", "ensemble", "tournament", "learning-curves", "generosity", "sweep", "lv"};
  return names;
}

std::vector<double> DefaultTimeGrid(double t_max, std::size_t n) {
  std::vector<double> t;
  for (std::size_t k = 0; k <= n; ++k) {
    t.push_back(std::pow(t_max + 1.0, static_cast<double>(k) / static_cast<double>(n)) - 1.0);
  }
  t.back() = t_max;
  return t;
}

void RunCommand(const RunConfig& cfg, std::ostream& log) {
  if (cfg.command == "simulate") return Simulate(cfg, log);
  if (cfg.command == "ensemble") return Ensemble(cfg, log);
  if (cfg.command == "tournament") return Tournament(cfg, log);
  if (cfg.command == "learning-curves") return LearningCurves(cfg, log);
  if (cfg.command == "generosity") return Generosity(cfg, log);
  if (cfg.command == "sweep") return Sweep(cfg, log);
  if (cfg.command == "lv") return Lv(cfg, log);
  throw std::invalid_argument("unknown command '" + cfg.command + "'");
}

}  // namespace ipdlearn::cli
