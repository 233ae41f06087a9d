#include "ipdlearn/report_io.hpp"

#include <ostream>
#include <string>

#include "ipdlearn/format.hpp"

namespace ipdlearn {

using nlohmann::json;

double Rounded(double v) { return std::stod(FormatReal(v)); }

json RoundedArray(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(Rounded(x));
  return a;
}

json DistributionJson(const OutcomeDistribution& p) {
  return RoundedArray({p.cc(), p.cd(), p.dc(), p.dd()});
}

std::string JoinReals(const std::vector<double>& v, char sep) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out.push_back(sep);
    out += FormatReal(v[i]);
  }
  return out;
}

namespace {

json CountsJson(const std::array<std::size_t, 6>& counts) {
  json c = json::object();
  for (std::size_t k = 0; k < kAllOutcomeLabels.size(); ++k) {
    c[std::string(ToString(kAllOutcomeLabels[k]))] = counts[k];
  }
  return c;
}

json Matrix(const std::vector<std::vector<double>>& m) {
  json a = json::array();
  for (const auto& row : m) a.push_back(RoundedArray(row));
  return a;
}

}  // namespace

void WriteCensusCsv(const CensusReport& r, std::ostream& os) {
  os << "sample_id,seed,init_x,init_y,final_x,final_y,p_cc,p_cd,p_dc,p_dd,u,v,label,attractor,"
        "t_end,dropped\n";
  for (const SampleRecord& s : r.records) {
    os << s.id << ',' << s.seed << ',' << JoinReals(s.init_x) << ',' << JoinReals(s.init_y) << ','
       << JoinReals(s.final_x) << ',' << JoinReals(s.final_y);
    for (int k = 0; k < 4; ++k) os << ',' << FormatReal(s.window_average.p[k]);
    os << ',' << FormatReal(s.u) << ',' << FormatReal(s.v) << ',' << ToString(s.label) << ','
       << ToString(s.attractor) << ',' << FormatReal(s.t_end) << ',' << (s.dropped ? 1 : 0) << '\n';
  }
}

json CensusJson(const CensusReport& r) {
  return {
      {"class_x", r.class_x.code()},
      {"class_y", r.class_y.code()},
      {"payoff", r.payoff.ToString()},
      {"samples", r.records.size()},
      {"kept", r.kept()},
      {"dropped", r.dropped},
      {"counts", CountsJson(r.counts)},
      {"mean_u", Rounded(r.mean_u)},
      {"mean_v", Rounded(r.mean_v)},
      {"direction", {{"x_exploits", r.x_exploits}, {"y_exploits", r.y_exploits}}},
  };
}

json TournamentJson(const TournamentReport& t) {
  json classes = json::array();
  for (const auto& c : t.classes) classes.push_back(c.code());
  json cells = json::array();
  for (const auto& c : t.cells) cells.push_back(CensusJson(c));
  json edges = json::array();
  for (const auto& e : ExploitationEdges(t)) {
    edges.push_back({{"exploiter", e.exploiter.code()},
                     {"exploited", e.exploited.code()},
                     {"count", e.count},
                     {"exploiter_refines", Refines(e.exploiter, e.exploited)}});
  }
  return {
      {"classes", classes},
      {"pairs", t.cells.size()},
      {"cells", cells},
      {"exploit_counts", t.exploit_counts},
      {"exploitation_edges", edges},
      {"mean_payoff", Matrix(t.mean_payoff)},
      {"payoff_difference", Matrix(t.payoff_difference)},
      {"class_mean_payoff", RoundedArray(t.class_mean_payoff)},
  };
}

void WriteOneSidedCsv(const OneSidedTable& t, std::ostream& os) {
  os << "time";
  for (const auto& l : t.learners) os << ",u_" << l.code();
  os << '\n';
  for (std::size_t k = 0; k < t.times.size(); ++k) {
    os << FormatReal(t.times[k]);
    for (std::size_t l = 0; l < t.learners.size(); ++l) os << ',' << FormatReal(t.mean_u[l][k]);
    os << '\n';
  }
}

json OneSidedJson(const OneSidedTable& t) {
  json learners = json::array();
  json terminal = json::object();
  for (std::size_t l = 0; l < t.learners.size(); ++l) {
    learners.push_back(t.learners[l].code());
    double mean = 0.0;
    for (double u : t.terminal_u[l]) mean += u;
    if (!t.terminal_u[l].empty()) mean /= static_cast<double>(t.terminal_u[l].size());
    terminal[t.learners[l].code()] = Rounded(mean);
  }
  return {{"learners", learners},
          {"opponent", {{"class", t.opponent.info_class.code()}, {"probs", RoundedArray(t.opponent.probs)}}},
          {"samples", t.init.size()},
          {"times", RoundedArray(t.times)},
          {"mean_terminal_u", terminal}};
}

void WriteGenerosityCsv(const GenerosityReport& r, std::ostream& os) {
  os << "sample_id,exploiter,exploiter_before,opponent,after,u_before,v_before,u_after,v_after\n";
  for (const GenerosityCase& c : r.cases) {
    os << c.sample_id << ',' << (c.exploiter == Seat::kX ? 'x' : 'y') << ','
       << JoinReals(c.exploiter_before) << ',' << JoinReals(c.opponent) << ','
       << JoinReals({c.after.x.begin(), c.after.x.end()}) << ',' << FormatReal(c.u_before) << ','
       << FormatReal(c.v_before) << ',' << FormatReal(c.u_after) << ',' << FormatReal(c.v_after)
       << '\n';
  }
}

json GenerosityJson(const GenerosityReport& r) {
  return {{"class_exploiter", r.class_exploiter.code()},
          {"class_opponent", r.class_opponent.code()},
          {"scanned", r.scanned},
          {"equilibria", r.cases.size()},
          {"mean_du", Rounded(r.mean_du)},
          {"mean_dv", Rounded(r.mean_dv)}};
}

json SweepJson(const std::vector<SweepEntry>& entries) {
  json a = json::array();
  for (const SweepEntry& e : entries) {
    a.push_back({{"payoff", e.payoff.ToString()},
                 {"submodular", e.submodular},
                 {"counts", CountsJson(e.counts)},
                 {"tournament", TournamentJson(e.tournament)}});
  }
  return a;
}

json TrajectoryOutcomeJson(const Trajectory& traj, const PayoffMatrix& pm, double delta,
                           const StructureTolerances& tol) {
  const auto [u, v] = traj.window_payoffs(pm);
  const ExploitationStructure st = CheckExploitationStructure(traj, tol);
  return {
      {"class_x", traj.class_x.code()},
      {"class_y", traj.class_y.code()},
      {"label", ToString(ClassifyOutcome(traj.window_average, delta))},
      {"attractor", ToString(traj.attractor)},
      {"window_start", Rounded(traj.window_start)},
      {"window_average", DistributionJson(traj.window_average)},
      {"u", Rounded(u)},
      {"v", Rounded(v)},
      {"final_x", RoundedArray(traj.x.back())},
      {"final_y", RoundedArray(traj.y.back())},
      {"exploitation_structure",
       {{"holds", st.holds},
        {"exploiter", st.exploiter == Seat::kX ? "x" : "y"},
        {"pattern_error", Rounded(st.pattern_error)}}},
  };
}

}  // namespace ipdlearn
