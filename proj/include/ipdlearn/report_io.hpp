#ifndef IPDLEARN_REPORT_IO_HPP
#define IPDLEARN_REPORT_IO_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "ipdlearn/analysis.hpp"
#include "ipdlearn/dynamics.hpp"
#include "ipdlearn/experiments.hpp"

namespace ipdlearn {

inline constexpr const char* kArtifactVersion = "0.3.0";

// Rounds to the 12 significant digits used in every output file.
double Rounded(double v);
nlohmann::json RoundedArray(const std::vector<double>& v);
nlohmann::json DistributionJson(const OutcomeDistribution& p);

std::string JoinReals(const std::vector<double>& v, char sep = ';');

// sample_id,seed,init_x,init_y,final_x,final_y,p_cc,p_cd,p_dc,p_dd,u,v,label,
// attractor,t_end,dropped. Strategy columns hold the block values joined by ';'.
void WriteCensusCsv(const CensusReport& r, std::ostream& os);
nlohmann::json CensusJson(const CensusReport& r);

nlohmann::json TournamentJson(const TournamentReport& t);

// time, then one mean-payoff column per learner class.
void WriteOneSidedCsv(const OneSidedTable& t, std::ostream& os);
nlohmann::json OneSidedJson(const OneSidedTable& t);

void WriteGenerosityCsv(const GenerosityReport& r, std::ostream& os);
nlohmann::json GenerosityJson(const GenerosityReport& r);

nlohmann::json SweepJson(const std::vector<SweepEntry>& entries);

nlohmann::json TrajectoryOutcomeJson(const Trajectory& traj, const PayoffMatrix& pm, double delta,
                                     const StructureTolerances& tol);

}  // namespace ipdlearn

#endif  // IPDLEARN_REPORT_IO_HPP
