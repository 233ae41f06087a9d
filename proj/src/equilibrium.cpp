#include "ipdlearn/equilibrium.hpp"

#include <cmath>

#include <Eigen/LU>

namespace ipdlearn {

namespace {

// Index the opponent uses for each focal outcome: focal CD is the
// opponent's DC and vice versa.
constexpr std::array<std::size_t, 4> kOpponentView{kCC, kDC, kCD, kDD};

}  // namespace

TransitionMatrix BuildTransitionMatrix(const MemoryOneStrategy& x, const MemoryOneStrategy& y) {
  TransitionMatrix m;
  for (std::size_t j = 0; j < 4; ++j) {
    const double xc = x[j];
    const double yc = y[kOpponentView[j]];
    m(kCC, j) = xc * yc;
    m(kCD, j) = xc * (1.0 - yc);
    m(kDC, j) = (1.0 - xc) * yc;
    m(kDD, j) = (1.0 - xc) * (1.0 - yc);
  }
  return m;
}

std::optional<OutcomeDistribution> StationaryClosedForm(const MemoryOneStrategy& xs,
                                                        const MemoryOneStrategy& ys) {
  if (!xs.IsInterior() || !ys.IsInterior()) return std::nullopt;
  const double x1 = xs[0], x2 = xs[1], x3 = xs[2], x4 = xs[3];
  const double y1 = ys[0], y2 = ys[1], y3 = ys[2], y4 = ys[3];
  const double xb1 = 1.0 - x1, xb2 = 1.0 - x2;
  const double yb1 = 1.0 - y1, yb2 = 1.0 - y2;

  Vec4 w;
  w[kCC] = (x4 + (x3 - x4) * y2) * (y4 + (y3 - y4) * x2) - x3 * y3 * (x2 - x4) * (y2 - y4);
  w[kCD] = (x4 + (x3 - x4) * y4) * (yb2 - (y1 - y2) * x1) - x4 * yb1 * (x1 - x3) * (y2 - y4);
  w[kDC] = (xb2 - (x1 - x2) * y1) * (y4 + (y3 - y4) * x4) - xb1 * y4 * (x2 - x4) * (y1 - y3);
  w[kDD] = (xb2 - (x1 - x2) * y3) * (yb2 - (y1 - y2) * x3) - xb2 * yb2 * (x1 - x3) * (y1 - y3);

  const double norm = w.sum();
  if (!(std::abs(norm) >= 1e-12)) return std::nullopt;
  return OutcomeDistribution{w / norm};
}

PowerIterationResult StationaryPowerIteration(const TransitionMatrix& m, double tol,
                                              std::size_t max_iter) {
  PowerIterationResult res;
  Vec4 p = Vec4::Constant(0.25);
  for (std::size_t it = 1; it <= max_iter; ++it) {
    Vec4 next = m * p;
    const double change = (next - p).lpNorm<1>();
    p = next;
    if (change < tol) {
      res.converged = true;
      res.iterations = it;
      break;
    }
    res.iterations = it;
  }
  res.dist.p = p / p.sum();
  return res;
}

OutcomeDistribution StationaryLinearSolve(const TransitionMatrix& m) {
  Eigen::Matrix4d a = Eigen::Matrix4d::Identity() - m;
  a.row(3).setOnes();
  Eigen::FullPivLU<Eigen::Matrix4d> lu(a);
  if (!lu.isInvertible()) {
    throw DegenerateEquilibrium("transition matrix has no unique stationary state");
  }
  Vec4 p = lu.solve(Vec4(0.0, 0.0, 0.0, 1.0));
  return {p};
}

OutcomeDistribution StationaryState(const MemoryOneStrategy& x, const MemoryOneStrategy& y) {
  if (auto p = StationaryClosedForm(x, y)) return *p;
  return StationaryLinearSolve(BuildTransitionMatrix(x, y));
}

OutcomeDistribution SimulateRepeatedGame(const MemoryOneStrategy& x, const MemoryOneStrategy& y,
                                         std::uint64_t seed, std::uint64_t n_rounds,
                                         std::uint64_t burn_in) {
  if (n_rounds <= burn_in) {
    throw std::invalid_argument("n_rounds must exceed burn_in");
  }
  // Thresholds on 32-bit draws: cooperate iff draw < prob * 2^32.
  constexpr double kScale = 4294967296.0;
  std::array<std::uint64_t, 4> tx{}, ty{};
  for (std::size_t j = 0; j < 4; ++j) {
    tx[j] = static_cast<std::uint64_t>(x[j] * kScale);
    ty[j] = static_cast<std::uint64_t>(y[kOpponentView[j]] * kScale);
  }
  // SplitMix64 stream: a Weyl sequence passed through the SplitMix64 output
  // function. Roughly twice as fast as mt19937_64, which matters at 1e9 rounds.
  std::uint64_t weyl = seed;
  auto next = [&weyl] {
    std::uint64_t z = (weyl += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  };
  std::array<std::uint64_t, 4> counts{};
  std::size_t state = kCC;
  for (std::uint64_t r = 0; r < n_rounds; ++r) {
    const std::uint64_t draw = next();
    // Outcome index: bit 1 set if x defects, bit 0 set if y defects.
    state = (static_cast<std::size_t>((draw >> 32) >= tx[state]) << 1) |
            static_cast<std::size_t>((draw & 0xffffffffULL) >= ty[state]);
    if (r >= burn_in) ++counts[state];
  }
  const double n = static_cast<double>(n_rounds - burn_in);
  OutcomeDistribution out;
  for (std::size_t i = 0; i < 4; ++i) out.p[i] = static_cast<double>(counts[i]) / n;
  return out;
}

Vec4 AsymptoticFrequencySigma(const TransitionMatrix& m, const OutcomeDistribution& stationary) {
  // Column-stochastic chain: Z = (E - M + pi 1^T)^-1, and the long-run
  // variance of the occupation frequency of state i is pi_i (2 Z_ii - 1 - pi_i).
  const Vec4& pi = stationary.p;
  Eigen::Matrix4d a = Eigen::Matrix4d::Identity() - m + pi * Vec4::Ones().transpose();
  Eigen::Matrix4d z = a.inverse();
  Vec4 sigma;
  for (int i = 0; i < 4; ++i) {
    const double var = pi[i] * (2.0 * z(i, i) - 1.0 - pi[i]);
    sigma[i] = std::sqrt(std::max(var, 0.0));
  }
  return sigma;
}

std::pair<double, double> ExpectedPayoffs(const OutcomeDistribution& p, const PayoffMatrix& pm) {
  return {p.p.dot(pm.focal()), p.p.dot(pm.opponent())};
}

}  // namespace ipdlearn
