#ifndef IPDLEARN_ANALYSIS_HPP
#define IPDLEARN_ANALYSIS_HPP

#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "ipdlearn/dynamics.hpp"
#include "ipdlearn/equilibrium.hpp"
#include "ipdlearn/game_model.hpp"
#include "ipdlearn/gradients.hpp"

namespace ipdlearn {

enum class OutcomeLabel {
  kMutualCooperation,
  kMutualDefection,
  kAlternating,
  kExploitByX,
  kExploitByY,
  kOther,
};

inline constexpr std::array<OutcomeLabel, 6> kAllOutcomeLabels{
    OutcomeLabel::kMutualCooperation, OutcomeLabel::kMutualDefection, OutcomeLabel::kAlternating,
    OutcomeLabel::kExploitByX,        OutcomeLabel::kExploitByY,      OutcomeLabel::kOther};

std::string_view ToString(OutcomeLabel l);
OutcomeLabel ParseOutcomeLabel(std::string_view s);
bool IsExploitation(OutcomeLabel l);

// Labels a (time-averaged) outcome distribution. The checks run in the order
// mutual cooperation, mutual defection, alternating, exploitation, so every
// input gets exactly one label. Throws std::invalid_argument unless
// 0 < delta < 0.5.
OutcomeLabel ClassifyOutcome(const OutcomeDistribution& p, double delta = 0.05);

// Reduced exploitation regime: the exploiter has x2 = x4 = 0 and the
// exploited player y2 = 0, y3 = 1; only x3 and y4 move.
struct LVState {
  double x3 = 0.0;
  double y4 = 0.0;
};

// (dx3/dt, dy4/dt) of the reduced system. Both share the positive factor
// y4 (1 - x3) / (1 + y4 - x3 + y4 x3)^2. Throws std::domain_error outside
// the open unit square or when the denominator vanishes.
std::pair<double, double> LvVelocity(const LVState& s, const PayoffMatrix& pm);

struct LvFixedPoint {
  double x3 = 0.0;
  double y4 = 0.0;
  double u = 0.0;  // exploiter's payoff at the fixed point
  double v = 0.0;  // exploited player's payoff
};

// x3* = (P-S)/(T-P), y4* = (T-2P+S)/(T-S), payoffs ((T+S)/2, P).
// Throws std::domain_error when the fixed point is not interior (T+S <= 2P).
LvFixedPoint ComputeLvFixedPoint(const PayoffMatrix& pm);

// H = -(P-S)(ln x3 + 2 ln(1-y4)) + (T-P) x3 - (T-S) y4, constant along
// orbits of LvVelocity. Throws std::domain_error outside the open square.
double LvInvariant(const LVState& s, const PayoffMatrix& pm);

// Classical RK4 on LvVelocity; returns the states at every step including
// the initial one.
std::vector<LVState> IntegrateLv(const LVState& start, const PayoffMatrix& pm, double dt,
                                 std::size_t steps);

// Stationary distribution of the reduced regime, (0, y4 x3, y4, 1 - x3)
// normalized.
OutcomeDistribution ExploitationPattern(double x3, double y4);

struct ExploitationStructure {
  bool holds = false;
  Seat exploiter = Seat::kX;
  double pattern_error = 0.0;  // L-inf gap between window average and pattern
};

struct StructureTolerances {
  double tol = 0.02;
  double epsilon = 1e-4;
  double cycle_tol = 1e-3;
};

// Checks, for either seat as the exploiter, that over the trailing window
// the exploiter's x2, x4 and the exploited y2 stay below tol + eps, y3 stays
// above 1 - tol - eps, x1 and y1 move by less than tol, and the window
// average matches the averaged exploitation pattern within tol with
// p_DC > p_CD from the exploiter's view. For limit-cycle trajectories x3 and
// y4 must also swing by more than cycle_tol.
ExploitationStructure CheckExploitationStructure(const Trajectory& traj,
                                                 const StructureTolerances& tol = {});

// T - R - P + S > 0.
bool IsSubmodular(const PayoffMatrix& pm);

}  // namespace ipdlearn

#endif  // IPDLEARN_ANALYSIS_HPP
