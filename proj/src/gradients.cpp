#include "ipdlearn/gradients.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/LU>

namespace ipdlearn {

namespace {

constexpr std::array<std::size_t, 4> kOpponentView{kCC, kDC, kCD, kDD};

// p_C - p_D for component n of the focal player: the opponent answers
// outcome n with its own cooperation probability.
Vec4 ForcedActionDifference(const MemoryOneStrategy& y, std::size_t n) {
  const double yc = y[kOpponentView[n]];
  return {yc, 1.0 - yc, -yc, -(1.0 - yc)};
}

// (E - M) with its last row replaced by the normalization row. The rows of
// E - M sum to zero, so no information is lost.
Eigen::Matrix4d ConstrainedSystem(const TransitionMatrix& m) {
  Eigen::Matrix4d a = Eigen::Matrix4d::Identity() - m;
  a.row(3).setOnes();
  return a;
}

const MemoryOneStrategy& Learner(const MemoryOneStrategy& x, const MemoryOneStrategy& y, Seat s) {
  return s == Seat::kX ? x : y;
}
const MemoryOneStrategy& Other(const MemoryOneStrategy& x, const MemoryOneStrategy& y, Seat s) {
  return s == Seat::kX ? y : x;
}

void CheckComponent(std::size_t n) {
  if (n > 3) throw std::out_of_range("strategy component index must be 0..3");
}

}  // namespace

std::array<Vec4, 4> GradientsLinearSolve(const MemoryOneStrategy& x, const MemoryOneStrategy& y) {
  const TransitionMatrix m = BuildTransitionMatrix(x, y);
  const Eigen::Matrix4d a = ConstrainedSystem(m);
  Eigen::FullPivLU<Eigen::Matrix4d> lu(a);
  if (!lu.isInvertible()) {
    throw DegenerateEquilibrium("constrained gradient system is singular");
  }
  const OutcomeDistribution pe = StationaryState(x, y);
  std::array<Vec4, 4> out;
  for (std::size_t n = 0; n < 4; ++n) {
    Vec4 b = pe.p[n] * ForcedActionDifference(y, n);
    b[3] = 0.0;
    out[n] = lu.solve(b);
  }
  return out;
}

EquilibriumGradient GradientLinearSolve(const MemoryOneStrategy& x, const MemoryOneStrategy& y,
                                        Seat seat, std::size_t n) {
  CheckComponent(n);
  auto all = GradientsLinearSolve(Learner(x, y, seat), Other(x, y, seat));
  return {seat, n, all[n]};
}

SeriesGradient GradientSeries(const MemoryOneStrategy& x, const MemoryOneStrategy& y, Seat seat,
                              std::size_t n, std::size_t t_max) {
  CheckComponent(n);
  const MemoryOneStrategy& me = Learner(x, y, seat);
  const MemoryOneStrategy& other = Other(x, y, seat);
  const TransitionMatrix m = BuildTransitionMatrix(me, other);
  const OutcomeDistribution pe = StationaryState(me, other);

  SeriesGradient res;
  res.gradient.seat = seat;
  res.gradient.component = n;
  Vec4 term = pe.p[n] * ForcedActionDifference(other, n);
  Vec4 sum = term;
  res.terms = 1;
  res.last_term_l1 = term.lpNorm<1>();
  for (std::size_t t = 1; t <= t_max && res.last_term_l1 >= 1e-12; ++t) {
    term = m * term;
    sum += term;
    res.terms = t + 1;
    res.last_term_l1 = term.lpNorm<1>();
  }
  res.gradient.d = sum;
  return res;
}

EquilibriumGradient GradientFiniteDifference(const MemoryOneStrategy& x,
                                             const MemoryOneStrategy& y, Seat seat,
                                             std::size_t n, double h) {
  CheckComponent(n);
  MemoryOneStrategy me = Learner(x, y, seat);
  const MemoryOneStrategy& other = Other(x, y, seat);
  if (!(me[n] - h > 0.0 && me[n] + h < 1.0)) {
    throw std::invalid_argument("finite-difference step leaves (0,1)");
  }
  const double base = me[n];
  me[n] = base + h;
  auto plus = StationaryClosedForm(me, other);
  me[n] = base - h;
  auto minus = StationaryClosedForm(me, other);
  if (!plus || !minus) throw DegenerateEquilibrium("closed form degenerate near finite-difference point");
  return {seat, n, (plus->p - minus->p) / (2.0 * h)};
}

namespace {

// u . A^-1 b_n = (A^-T u) . b_n, so one transposed solve serves all n.
Vec4 AdjointPayoffGradient(const TransitionMatrix& m, const Vec4& pe,
                           const MemoryOneStrategy& other, const Vec4& u) {
  const Eigen::Matrix4d a = ConstrainedSystem(m);
  const Vec4 w = a.transpose().inverse() * u;
  if (!w.allFinite()) throw DegenerateEquilibrium("constrained gradient system is singular");
  Vec4 g;
  for (std::size_t n = 0; n < 4; ++n) {
    const double yc = other[kOpponentView[n]];
    // b_n = p_n (yc, 1-yc, -yc, *) with the normalization entry zeroed
    g[n] = pe[n] * (w[0] * yc + w[1] * (1.0 - yc) - w[2] * yc);
  }
  return g;
}

}  // namespace

Vec4 PayoffGradient(const MemoryOneStrategy& x, const MemoryOneStrategy& y, const Vec4& u) {
  const TransitionMatrix m = BuildTransitionMatrix(x, y);
  return AdjointPayoffGradient(m, StationaryState(x, y).p, y, u);
}

SeatPayoffGradients PayoffGradients(const MemoryOneStrategy& x, const MemoryOneStrategy& y,
                                    const PayoffMatrix& pm) {
  const TransitionMatrix mx = BuildTransitionMatrix(x, y);
  SeatPayoffGradients out;
  out.stationary = StationaryState(x, y);
  // The opponent's chain is the same chain with CD and DC relabeled.
  TransitionMatrix my;
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      my(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          mx(static_cast<Eigen::Index>(kOpponentView[i]), static_cast<Eigen::Index>(kOpponentView[j]));
    }
  }
  const Vec4 u = pm.focal();
  out.x = AdjointPayoffGradient(mx, out.stationary.p, y, u);
  out.y = AdjointPayoffGradient(my, out.stationary.SeatSwapped().p, x, u);
  return out;
}

}  // namespace ipdlearn
