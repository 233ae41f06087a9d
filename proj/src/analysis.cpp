#include "ipdlearn/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace ipdlearn {

std::string_view ToString(OutcomeLabel l) {
  switch (l) {
    case OutcomeLabel::kMutualCooperation: return "mutual_cooperation";
    case OutcomeLabel::kMutualDefection: return "mutual_defection";
    case OutcomeLabel::kAlternating: return "alternating";
    case OutcomeLabel::kExploitByX: return "exploit_by_x";
    case OutcomeLabel::kExploitByY: return "exploit_by_y";
    case OutcomeLabel::kOther: return "other";
  }
  return "other";
}

OutcomeLabel ParseOutcomeLabel(std::string_view s) {
  for (OutcomeLabel l : kAllOutcomeLabels) {
    if (ToString(l) == s) return l;
  }
  throw std::invalid_argument("unknown outcome label '" + std::string(s) + "'");
}

bool IsExploitation(OutcomeLabel l) {
  return l == OutcomeLabel::kExploitByX || l == OutcomeLabel::kExploitByY;
}

OutcomeLabel ClassifyOutcome(const OutcomeDistribution& p, double delta) {
  if (!(delta > 0.0 && delta < 0.5)) throw std::invalid_argument("delta must lie in (0, 0.5)");
  if (p.cc() > 1.0 - delta) return OutcomeLabel::kMutualCooperation;
  if (p.dd() > 1.0 - delta) return OutcomeLabel::kMutualDefection;
  if (std::abs(p.cd() - 0.5) < delta && std::abs(p.dc() - 0.5) < delta) {
    return OutcomeLabel::kAlternating;
  }
  if (p.dc() - p.cd() > delta) return OutcomeLabel::kExploitByX;
  if (p.cd() - p.dc() > delta) return OutcomeLabel::kExploitByY;
  return OutcomeLabel::kOther;
}

namespace {

void CheckInterior(const LVState& s) {
  if (!(s.x3 > 0.0 && s.x3 < 1.0 && s.y4 > 0.0 && s.y4 < 1.0)) {
    throw std::domain_error("reduced state must lie in the open unit square");
  }
}

}  // namespace

std::pair<double, double> LvVelocity(const LVState& s, const PayoffMatrix& pm) {
  CheckInterior(s);
  const double T = pm.T(), P = pm.P(), S = pm.S();
  const double den = 1.0 + s.y4 - s.x3 + s.y4 * s.x3;
  if (std::abs(den) < 1e-12) throw std::domain_error("reduced system denominator vanishes");
  const double f = s.y4 * (1.0 - s.x3) / (den * den);
  const double dx3 = s.x3 * ((T - 2.0 * P + S) - (T - S) * s.y4) * f;
  const double dy4 = (1.0 - s.y4) * ((T - P) * s.x3 - (P - S)) * f;
  return {dx3, dy4};
}

LvFixedPoint ComputeLvFixedPoint(const PayoffMatrix& pm) {
  const double T = pm.T(), P = pm.P(), S = pm.S();
  if (!(T + S > 2.0 * P)) {
    throw std::domain_error("reduced fixed point is not interior: needs T + S > 2P");
  }
  const double x3 = (P - S) / (T - P);
  if (!(x3 < 1.0)) throw std::domain_error("reduced fixed point is not interior: x3* >= 1");
  return {x3, (T - 2.0 * P + S) / (T - S), 0.5 * (T + S), P};
}

double LvInvariant(const LVState& s, const PayoffMatrix& pm) {
  CheckInterior(s);
  const double T = pm.T(), P = pm.P(), S = pm.S();
  return -(P - S) * (std::log(s.x3) + 2.0 * std::log(1.0 - s.y4)) + (T - P) * s.x3 -
         (T - S) * s.y4;
}

std::vector<LVState> IntegrateLv(const LVState& start, const PayoffMatrix& pm, double dt,
                                 std::size_t steps) {
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  std::vector<LVState> out;
  out.reserve(steps + 1);
  out.push_back(start);
  LVState s = start;
  for (std::size_t k = 0; k < steps; ++k) {
    auto [a1, b1] = LvVelocity(s, pm);
    auto [a2, b2] = LvVelocity({s.x3 + 0.5 * dt * a1, s.y4 + 0.5 * dt * b1}, pm);
    auto [a3, b3] = LvVelocity({s.x3 + 0.5 * dt * a2, s.y4 + 0.5 * dt * b2}, pm);
    auto [a4, b4] = LvVelocity({s.x3 + dt * a3, s.y4 + dt * b3}, pm);
    s.x3 += dt / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4);
    s.y4 += dt / 6.0 * (b1 + 2.0 * b2 + 2.0 * b3 + b4);
    out.push_back(s);
  }
  return out;
}

OutcomeDistribution ExploitationPattern(double x3, double y4) {
  Vec4 p(0.0, y4 * x3, y4, 1.0 - x3);
  return {p / p.sum()};
}

namespace {

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void Add(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  double width() const { return hi - lo; }
};

ExploitationStructure CheckSeat(const Trajectory& traj, Seat exploiter, std::size_t first,
                                const StructureTolerances& tol) {
  ExploitationStructure res;
  res.exploiter = exploiter;
  const bool x_exploits = exploiter == Seat::kX;
  const InformationClass& ce = x_exploits ? traj.class_x : traj.class_y;
  const InformationClass& co = x_exploits ? traj.class_y : traj.class_x;
  const double low = tol.tol + tol.epsilon;
  const double high = 1.0 - tol.tol - tol.epsilon;

  bool bounds_ok = true;
  Range e1, o1, e3, o4;
  Vec4 pattern_sum = Vec4::Zero();
  std::size_t count = 0;
  for (std::size_t k = first; k < traj.times.size(); ++k) {
    const auto& ve = x_exploits ? traj.x[k] : traj.y[k];
    const auto& vo = x_exploits ? traj.y[k] : traj.x[k];
    const MemoryOneStrategy e = ClassStrategy(ce, ve).Embed();
    const MemoryOneStrategy o = ClassStrategy(co, vo).Embed();
    if (!(e[kCD] < low && e[kDD] < low && o[kCD] < low && o[kDC] > high)) bounds_ok = false;
    e1.Add(e[kCC]);
    o1.Add(o[kCC]);
    e3.Add(e[kDC]);
    o4.Add(o[kDD]);
    pattern_sum += ExploitationPattern(e[kDC], o[kDD]).p;
    ++count;
  }
  if (count == 0) return res;

  const OutcomeDistribution avg =
      x_exploits ? traj.window_average : traj.window_average.SeatSwapped();
  res.pattern_error = (pattern_sum / static_cast<double>(count) - avg.p).lpNorm<Eigen::Infinity>();

  bool oscillation_ok = true;
  if (traj.attractor == AttractorLabel::kLimitCycle) {
    oscillation_ok = e3.width() > tol.cycle_tol && o4.width() > tol.cycle_tol;
  }
  res.holds = bounds_ok && e1.width() < tol.tol && o1.width() < tol.tol &&
              res.pattern_error < tol.tol && avg.dc() > avg.cd() && oscillation_ok;
  return res;
}

}  // namespace

ExploitationStructure CheckExploitationStructure(const Trajectory& traj,
                                                 const StructureTolerances& tol) {
  std::size_t first = 0;
  while (first < traj.times.size() && traj.times[first] < traj.window_start - 1e-9) ++first;
  ExploitationStructure by_x = CheckSeat(traj, Seat::kX, first, tol);
  if (by_x.holds) return by_x;
  ExploitationStructure by_y = CheckSeat(traj, Seat::kY, first, tol);
  if (by_y.holds) return by_y;
  return traj.window_average.dc() >= traj.window_average.cd() ? by_x : by_y;
}

bool IsSubmodular(const PayoffMatrix& pm) { return pm.T() - pm.R() - pm.P() + pm.S() > 0.0; }

}  // namespace ipdlearn
