#ifndef IPDLEARN_EQUILIBRIUM_HPP
#define IPDLEARN_EQUILIBRIUM_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>

#include <Eigen/Core>

#include "ipdlearn/game_model.hpp"

namespace ipdlearn {

// Column = previous outcome, row = next outcome, both in (CC, CD, DC, DD)
// order from the focal player's view. Columns sum to one.
using TransitionMatrix = Eigen::Matrix4d;

// Thrown where a unique stationary state is required but the chain has none
// (strategies on the boundary of the unit cube).
class DegenerateEquilibrium : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct OutcomeDistribution {
  Vec4 p = Vec4::Zero();

  double cc() const { return p[kCC]; }
  double cd() const { return p[kCD]; }
  double dc() const { return p[kDC]; }
  double dd() const { return p[kDD]; }

  // The same distribution seen from the other seat (CD and DC swapped).
  OutcomeDistribution SeatSwapped() const { return {Vec4(p[kCC], p[kDC], p[kCD], p[kDD])}; }
};

TransitionMatrix BuildTransitionMatrix(const MemoryOneStrategy& x, const MemoryOneStrategy& y);

// Closed-form stationary state of the repeated game. Returns nullopt when the
// normalization sum of the four unnormalized terms is below 1e-12 in
// magnitude, or when a strategy component sits exactly at 0 or 1.
std::optional<OutcomeDistribution> StationaryClosedForm(const MemoryOneStrategy& x,
                                                        const MemoryOneStrategy& y);

struct PowerIterationResult {
  OutcomeDistribution dist;
  bool converged = false;
  std::size_t iterations = 0;
};

// Iterates p <- M p from the uniform distribution until the L1 change is below tol.
PowerIterationResult StationaryPowerIteration(const TransitionMatrix& m, double tol = 1e-13,
                                              std::size_t max_iter = 1000000);

// Null vector of (E - M) normalized to sum one, via a pivoted 4x4 solve.
// Throws DegenerateEquilibrium when the stationary state is not unique.
OutcomeDistribution StationaryLinearSolve(const TransitionMatrix& m);

// Closed form where valid, otherwise the linear solve.
OutcomeDistribution StationaryState(const MemoryOneStrategy& x, const MemoryOneStrategy& y);

// Monte Carlo estimate: plays n_rounds rounds starting from CC and returns the
// outcome frequencies of the rounds after burn_in. The generator is a
// SplitMix64 stream started at `seed`; each round consumes one 64-bit draw,
// whose high and low 32-bit halves decide the two players' actions.
OutcomeDistribution SimulateRepeatedGame(const MemoryOneStrategy& x, const MemoryOneStrategy& y,
                                         std::uint64_t seed, std::uint64_t n_rounds,
                                         std::uint64_t burn_in = 0);

// Long-run standard deviation (times sqrt(n)) of the empirical frequency of
// each outcome along the chain, from the fundamental matrix (E - M + p 1^T)^-1.
// This is the binomial variance p(1-p) inflated by the chain's autocorrelation.
Vec4 AsymptoticFrequencySigma(const TransitionMatrix& m, const OutcomeDistribution& stationary);

// (u_e, v_e): focal and opponent expected payoffs.
std::pair<double, double> ExpectedPayoffs(const OutcomeDistribution& p, const PayoffMatrix& pm);

}  // namespace ipdlearn

#endif  // IPDLEARN_EQUILIBRIUM_HPP
