#ifndef IPDLEARN_EXPERIMENTS_HPP
#define IPDLEARN_EXPERIMENTS_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "ipdlearn/analysis.hpp"
#include "ipdlearn/dynamics.hpp"
#include "ipdlearn/game_model.hpp"

namespace ipdlearn {

// Seeding. Every per-sample seed is
//   Mix64(master ^ Mix64(pair_id ^ Mix64(index)))
// where Mix64 is the SplitMix64 output function and pair_id is the 64-bit
// FNV-1a hash of the two class codes in sorted order joined by ':'. Each
// seat's initial strategy is drawn from std::mt19937_64 seeded with
// Mix64(sample_seed + role), role 0 for the class that sorts first and 1 for
// the other (by seat for self-play), so swapping the class pair swaps the
// initial strategies along with the seats.
std::uint64_t Mix64(std::uint64_t z);
std::uint64_t PairId(const InformationClass& a, const InformationClass& b);
std::uint64_t SampleSeed(std::uint64_t master, std::uint64_t pair_id, std::uint64_t index);

// Uniform point on the class's cube [0,1]^blocks. Doubles are built from the
// top 53 bits of each 64-bit draw.
std::vector<double> DrawClassPoint(const InformationClass& c, std::uint64_t stream_seed);

struct EnsembleSpec {
  InformationClass class_x{"1234"};
  InformationClass class_y{"1212"};
  LearningConfig learning;  // its class fields are replaced by class_x / class_y
  std::size_t samples = 1000;
  std::uint64_t seed = 1;
  std::size_t jobs = 1;
  double delta = 0.05;
  // Samples that end neither in CC nor DD on an undecided attractor are
  // continued up to this time before labeling. 0 disables.
  double t_extend = 1e5;
  // Drop samples with one payoff at R and the other strictly between P and R
  // (mutual cooperation excepted).
  bool drop_reward_edge = false;

  LearningConfig MatchConfig() const;
  // Throws std::invalid_argument on zero samples, zero jobs, bad delta or an
  // invalid learning configuration.
  void Validate() const;
};

struct SampleRecord {
  std::size_t id = 0;
  std::uint64_t seed = 0;
  std::vector<double> init_x, init_y;
  std::vector<double> final_x, final_y;
  OutcomeDistribution window_average;
  double u = 0.0, v = 0.0;  // trailing-window payoffs
  OutcomeLabel label = OutcomeLabel::kOther;
  AttractorLabel attractor = AttractorLabel::kUndecided;
  double t_end = 0.0;
  bool dropped = false;  // removed by the reward-edge filter
};

struct CensusReport {
  InformationClass class_x{"1234"};
  InformationClass class_y{"1234"};
  PayoffMatrix payoff = PayoffMatrix::Standard();
  std::vector<SampleRecord> records;
  std::array<std::size_t, 6> counts{};  // indexed like kAllOutcomeLabels
  std::size_t dropped = 0;
  double mean_u = 0.0, mean_v = 0.0;
  // Exploitation-labeled samples by which seat earned more.
  std::size_t x_exploits = 0, y_exploits = 0;

  std::size_t count(OutcomeLabel l) const { return counts[static_cast<std::size_t>(l)]; }
  std::size_t kept() const { return records.size() - dropped; }
};

// Runs fn(0..n-1) on `jobs` threads. Results must be written to per-index
// slots; the call returns after every index is done and rethrows the first
// exception by index.
void ParallelFor(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)>& fn);

// Initial block probabilities (x, y) of sample `index`.
std::pair<std::vector<double>, std::vector<double>> SampleInits(const EnsembleSpec& spec,
                                                                std::size_t index);
SampleRecord RunSample(const EnsembleSpec& spec, std::size_t index);

// The record together with the trajectory it was labeled from (the extended
// one when the extension rule fired; its times then start at t_max).
struct SampleRun {
  SampleRecord record;
  Trajectory trajectory;
};
SampleRun RunSampleDetailed(const EnsembleSpec& spec, std::size_t index);
CensusReport RunMatchEnsemble(const EnsembleSpec& spec);

struct OneSidedTable {
  std::vector<InformationClass> learners;
  ClassStrategy opponent{InformationClass("1212"), {0.9, 0.1}};
  std::vector<double> times;
  std::vector<std::vector<double>> mean_u;      // [learner][time]
  std::vector<std::vector<double>> terminal_u;  // [learner][sample], payoff at t_max
  std::vector<std::vector<double>> init;        // shared start on the coarsest learner class
};

// Every learner starts from the same point: a uniform draw on the coarsest
// learner class, which all the other learners must refine, read off on each
// learner's blocks. The opponent never moves. Values at each requested time
// are taken from the last stored sample at or before it.
OneSidedTable RunOneSidedLearning(const EnsembleSpec& spec,
                                  const std::vector<InformationClass>& learners,
                                  const ClassStrategy& fixed_opponent,
                                  const std::vector<double>& sample_times);

struct GenerosityCase {
  std::size_t sample_id = 0;
  Seat exploiter = Seat::kX;
  std::vector<double> exploiter_before;  // class strategy of the exploiting seat
  std::vector<double> opponent;          // frozen class strategy of the other seat
  MemoryOneStrategy after;               // memory-one learner at t_max
  double u_before = 0.0, v_before = 0.0;  // exploiter first
  double u_after = 0.0, v_after = 0.0;
};

struct GenerosityReport {
  InformationClass class_exploiter{"1212"};
  InformationClass class_opponent{"1212"};
  std::size_t scanned = 0;
  std::vector<GenerosityCase> cases;
  double mean_du = 0.0, mean_dv = 0.0;
};

// Harvests the first n_equilibria exploitation-labeled samples (by index, at
// most spec.samples scanned) of a self-play ensemble (class_x == class_y); then the
// exploiting seat switches to the memory-one embedding of its strategy and
// learns one-sidedly against the frozen opponent. Throws
// std::invalid_argument for a payoff matrix that is not submodular.
GenerosityReport RunGenerosityExperiment(std::size_t n_equilibria, const EnsembleSpec& spec);

struct TournamentReport {
  std::vector<InformationClass> classes;
  std::vector<CensusReport> cells;  // upper triangle incl. diagonal, row-major
  // exploit_counts[i][j], i != j: samples in which class i's seat earned more
  // under an exploitation label against class j. Diagonal: all exploitation
  // samples of the self-play census.
  std::vector<std::vector<std::size_t>> exploit_counts;
  std::vector<std::vector<double>> mean_payoff;         // class i's mean against class j
  std::vector<std::vector<double>> payoff_difference;   // mean of (own - other) for class i vs j
  std::vector<double> class_mean_payoff;                // class i averaged over its matches

  const CensusReport& cell(std::size_t i, std::size_t j) const;
};

TournamentReport RunClassTournament(const std::vector<InformationClass>& classes,
                                    const EnsembleSpec& spec);

struct ExploitEdge {
  InformationClass exploiter{"1234"};
  InformationClass exploited{"1234"};
  std::size_t count = 0;
};

// Directed edges i -> j with exploit_counts[i][j] >= min_count, i != j.
std::vector<ExploitEdge> ExploitationEdges(const TournamentReport& t, std::size_t min_count = 1);
// Edges whose exploiter strictly refines the exploited class.
std::vector<ExploitEdge> ComplexExploitsSimple(const TournamentReport& t,
                                               std::size_t min_count = 1);

struct SweepEntry {
  PayoffMatrix payoff = PayoffMatrix::Standard();
  bool submodular = false;
  TournamentReport tournament;
  std::array<std::size_t, 6> counts{};  // summed over all pairs
};

// Every matrix is validated before the first run; a (T,R,P,S) violating
// T>R>P>S throws std::invalid_argument.
std::vector<SweepEntry> RunSubmodularitySweep(const std::vector<std::array<double, 4>>& matrices,
                                              const std::vector<InformationClass>& classes,
                                              const EnsembleSpec& spec);

}  // namespace ipdlearn

#endif  // IPDLEARN_EXPERIMENTS_HPP
