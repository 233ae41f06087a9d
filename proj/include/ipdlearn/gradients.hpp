#ifndef IPDLEARN_GRADIENTS_HPP
#define IPDLEARN_GRADIENTS_HPP

#include <array>
#include <cstddef>

#include "ipdlearn/equilibrium.hpp"
#include "ipdlearn/game_model.hpp"

namespace ipdlearn {

enum class Seat { kX, kY };

// d p_e / d s_n, where s is the strategy of `seat` and n its component
// (0-based). The vector is expressed in the seat's own outcome order, so
// dotting it with PayoffMatrix::focal() gives that seat's payoff gradient.
struct EquilibriumGradient {
  Seat seat = Seat::kX;
  std::size_t component = 0;
  Vec4 d = Vec4::Zero();
};

// Solves (E - M) v = p_n (p_C - p_D) under sum(v) = 0, where p_C / p_D are
// the one-step outcome distributions after the learner plays C / D from
// outcome n. Throws DegenerateEquilibrium at boundary strategies.
EquilibriumGradient GradientLinearSolve(const MemoryOneStrategy& x, const MemoryOneStrategy& y,
                                        Seat seat, std::size_t n);

// All four component gradients for the focal seat from one factorization.
std::array<Vec4, 4> GradientsLinearSolve(const MemoryOneStrategy& x, const MemoryOneStrategy& y);

struct SeriesGradient {
  EquilibriumGradient gradient;
  std::size_t terms = 0;          // t values summed, t = 0 .. terms-1
  double last_term_l1 = 0.0;      // truncation indicator
};

// p_n * sum_{t=0}^{t_max} M^t (p_C - p_D), stopping early once a term's L1
// norm drops below 1e-12.
SeriesGradient GradientSeries(const MemoryOneStrategy& x, const MemoryOneStrategy& y, Seat seat,
                              std::size_t n, std::size_t t_max);

// Central difference of the closed-form stationary state with step h.
// Throws std::invalid_argument if s_n +- h leaves (0,1).
EquilibriumGradient GradientFiniteDifference(const MemoryOneStrategy& x,
                                             const MemoryOneStrategy& y, Seat seat,
                                             std::size_t n, double h);

// d(p_e . u)/d x_n for n = 0..3 via one adjoint solve. This is the payoff
// gradient the learning dynamics need.
Vec4 PayoffGradient(const MemoryOneStrategy& x, const MemoryOneStrategy& y, const Vec4& u);

// Both seats' payoff gradients, each in the seat's own component order,
// sharing one stationary state and transition matrix.
struct SeatPayoffGradients {
  OutcomeDistribution stationary;  // focal (x) view
  Vec4 x;
  Vec4 y;
};
SeatPayoffGradients PayoffGradients(const MemoryOneStrategy& x, const MemoryOneStrategy& y,
                                    const PayoffMatrix& pm);

}  // namespace ipdlearn

#endif  // IPDLEARN_GRADIENTS_HPP
