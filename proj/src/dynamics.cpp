#include "ipdlearn/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "ipdlearn/format.hpp"
#include "ipdlearn/gradients.hpp"

namespace ipdlearn {

std::string_view ToString(LearningMode m) {
  return m == LearningMode::kMutual ? "mutual" : "one-sided";
}

LearningMode ParseLearningMode(std::string_view s) {
  if (s == "mutual") return LearningMode::kMutual;
  if (s == "one-sided" || s == "one_sided") return LearningMode::kOneSidedX;
  throw std::invalid_argument("mode must be mutual or one-sided, got '" + std::string(s) + "'");
}

std::string_view ToString(AttractorLabel a) {
  switch (a) {
    case AttractorLabel::kFixedPoint: return "fixed_point";
    case AttractorLabel::kLimitCycle: return "limit_cycle";
    case AttractorLabel::kUndecided: return "undecided";
  }
  return "undecided";
}

void LearningConfig::Validate() const {
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (!(t_max > 0.0)) throw std::invalid_argument("t_max must be positive");
  if (!(epsilon > 0.0 && epsilon < 0.5)) throw std::invalid_argument("epsilon must lie in (0, 0.5)");
  if (!(window_fraction > 0.0 && window_fraction < 1.0)) {
    throw std::invalid_argument("trailing window must be shorter than t_max");
  }
  if (window() < dt) throw std::invalid_argument("trailing window shorter than one step");
  if (stride == 0) throw std::invalid_argument("stride must be positive");
}

std::pair<Vec4, Vec4> MemoryOneVelocity(const MemoryOneStrategy& x, const MemoryOneStrategy& y,
                                        const PayoffMatrix& pm) {
  const SeatPayoffGradients g = PayoffGradients(x, y, pm);
  const Vec4& gx = g.x;
  const Vec4& gy = g.y;
  Vec4 vx, vy;
  for (std::size_t n = 0; n < 4; ++n) {
    vx[n] = x[n] * (1.0 - x[n]) * gx[n];
    vy[n] = y[n] * (1.0 - y[n]) * gy[n];
  }
  return {vx, vy};
}

namespace {

std::vector<double> SumOverBlocks(const InformationClass& c, const Vec4& v) {
  std::vector<double> out(c.num_blocks(), 0.0);
  for (std::size_t i = 0; i < 4; ++i) out[c.block_of(i)] += v[i];
  return out;
}

// Integration state: x blocks followed by y blocks.
using State = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 8, 1>;

class MatchField {
 public:
  explicit MatchField(const LearningConfig& cfg)
      : cx_(cfg.class_x), cy_(cfg.class_y), pm_(cfg.payoff), mode_(cfg.mode),
        nx_(cx_.num_blocks()), ny_(cy_.num_blocks()) {}

  std::size_t size() const { return nx_ + ny_; }

  MemoryOneStrategy EmbedX(const State& s) const {
    MemoryOneStrategy m;
    for (std::size_t i = 0; i < 4; ++i) m[i] = s[static_cast<Eigen::Index>(cx_.block_of(i))];
    return m;
  }
  MemoryOneStrategy EmbedY(const State& s) const {
    MemoryOneStrategy m;
    for (std::size_t i = 0; i < 4; ++i) m[i] = s[static_cast<Eigen::Index>(nx_ + cy_.block_of(i))];
    return m;
  }

  State operator()(const State& s) const {
    const MemoryOneStrategy x = EmbedX(s), y = EmbedY(s);
    State out = State::Zero(static_cast<Eigen::Index>(size()));
    if (mode_ == LearningMode::kOneSidedX) {
      const Vec4 gx = PayoffGradient(x, y, pm_.focal());
      for (std::size_t i = 0; i < 4; ++i) {
        out[static_cast<Eigen::Index>(cx_.block_of(i))] += x[i] * (1.0 - x[i]) * gx[i];
      }
    } else {
      const SeatPayoffGradients g = PayoffGradients(x, y, pm_);
      const Vec4& gx = g.x;
      const Vec4& gy = g.y;
      for (std::size_t i = 0; i < 4; ++i) {
        out[static_cast<Eigen::Index>(cx_.block_of(i))] += x[i] * (1.0 - x[i]) * gx[i];
      }
      for (std::size_t i = 0; i < 4; ++i) {
        out[static_cast<Eigen::Index>(nx_ + cy_.block_of(i))] += y[i] * (1.0 - y[i]) * gy[i];
      }
    }
    return out;
  }

  std::size_t nx() const { return nx_; }

 private:
  InformationClass cx_, cy_;
  PayoffMatrix pm_;
  LearningMode mode_;
  std::size_t nx_, ny_;
};

State Project(State s, double eps) {
  for (Eigen::Index i = 0; i < s.size(); ++i) s[i] = std::clamp(s[i], eps, 1.0 - eps);
  return s;
}

}  // namespace

std::pair<std::vector<double>, std::vector<double>> ClassVelocity(const ClassStrategy& sx,
                                                                  const ClassStrategy& sy,
                                                                  const PayoffMatrix& pm) {
  auto [vx, vy] = MemoryOneVelocity(sx.Embed(), sy.Embed(), pm);
  return {SumOverBlocks(sx.info_class, vx), SumOverBlocks(sy.info_class, vy)};
}

Trajectory IntegrateMatch(const ClassStrategy& init_x, const ClassStrategy& init_y,
                          const LearningConfig& cfg) {
  cfg.Validate();
  if (!(init_x.info_class == cfg.class_x) || !(init_y.info_class == cfg.class_y)) {
    throw std::invalid_argument("initial strategies do not match the configured classes");
  }
  const MatchField field(cfg);
  const double eps = cfg.epsilon;
  const double dt = cfg.dt;
  const auto n_steps = static_cast<std::size_t>(std::llround(cfg.t_max / dt));
  const auto window_steps = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(cfg.window() / dt)));
  const std::size_t window_begin = n_steps - std::min(window_steps, n_steps);

  State s(static_cast<Eigen::Index>(field.size()));
  for (std::size_t i = 0; i < field.nx(); ++i) s[static_cast<Eigen::Index>(i)] = init_x.probs[i];
  for (std::size_t i = 0; i < init_y.probs.size(); ++i) {
    s[static_cast<Eigen::Index>(field.nx() + i)] = init_y.probs[i];
  }
  s = Project(s, eps);

  Trajectory traj;
  traj.class_x = cfg.class_x;
  traj.class_y = cfg.class_y;
  traj.window_start = static_cast<double>(window_begin) * dt;
  const std::size_t n_samples = n_steps / cfg.stride + 2;
  traj.times.reserve(n_samples);
  traj.x.reserve(n_samples);
  traj.y.reserve(n_samples);
  traj.u.reserve(n_samples);
  traj.v.reserve(n_samples);

  auto record = [&](std::size_t step, const OutcomeDistribution& pe) {
    auto [u, v] = ExpectedPayoffs(pe, cfg.payoff);
    traj.times.push_back(static_cast<double>(step) * dt);
    traj.x.emplace_back(s.data(), s.data() + field.nx());
    traj.y.emplace_back(s.data() + field.nx(), s.data() + s.size());
    traj.u.push_back(u);
    traj.v.push_back(v);
  };

  Vec4 window_sum = Vec4::Zero();
  std::size_t window_count = 0;
  for (std::size_t step = 0; step <= n_steps; ++step) {
    const OutcomeDistribution pe = StationaryState(field.EmbedX(s), field.EmbedY(s));
    if (step % cfg.stride == 0 || step == n_steps) record(step, pe);
    if (step >= window_begin) {
      window_sum += pe.p;
      ++window_count;
    }
    if (step == n_steps) break;

    const State k1 = field(s);
    const State k2 = field(Project(s + 0.5 * dt * k1, eps));
    const State k3 = field(Project(s + 0.5 * dt * k2, eps));
    const State k4 = field(Project(s + dt * k3, eps));
    State next = s + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!next.allFinite()) {
      throw IntegrationFailure("non-finite strategy", static_cast<double>(step + 1) * dt);
    }
    s = Project(next, eps);
  }
  traj.window_average.p = window_sum / static_cast<double>(window_count);
  traj.attractor = DetectAttractor(traj, cfg);
  return traj;
}

AttractorLabel DetectAttractor(const Trajectory& traj, const LearningConfig& cfg) {
  if (traj.times.size() < 3) return AttractorLabel::kUndecided;
  const double t_end = traj.times.back();
  const double t_begin = t_end - cfg.window();
  std::size_t first = 0;
  while (first < traj.times.size() && traj.times[first] < t_begin - 1e-9) ++first;
  if (traj.times.size() - first < 3) return AttractorLabel::kUndecided;

  auto component = [&](std::size_t k, std::size_t c) {
    return c < traj.x[k].size() ? traj.x[k][c] : traj.y[k][c - traj.x[k].size()];
  };
  const std::size_t n_comp = traj.x[first].size() + traj.y[first].size();

  double max_speed = 0.0;
  for (std::size_t k = first + 1; k < traj.times.size(); ++k) {
    const double h = traj.times[k] - traj.times[k - 1];
    if (h <= 0.0) continue;
    for (std::size_t c = 0; c < n_comp; ++c) {
      max_speed = std::max(max_speed, std::abs(component(k, c) - component(k - 1, c)) / h);
    }
  }
  if (max_speed < cfg.fp_tol) return AttractorLabel::kFixedPoint;

  // Oscillation: after removing a least-squares linear trend, some component
  // still swings by more than cycle_tol, and the trend moves it by at most a
  // quarter of that swing over the window. Components drifting slowly along
  // neutral directions neither qualify nor disqualify.
  const std::size_t n = traj.times.size() - first;
  double t_mean = 0.0;
  for (std::size_t k = first; k < traj.times.size(); ++k) t_mean += traj.times[k];
  t_mean /= static_cast<double>(n);
  double t_var = 0.0;
  for (std::size_t k = first; k < traj.times.size(); ++k) {
    t_var += (traj.times[k] - t_mean) * (traj.times[k] - t_mean);
  }
  const double span = traj.times.back() - traj.times[first];
  for (std::size_t c = 0; c < n_comp; ++c) {
    double mean = 0.0;
    for (std::size_t k = first; k < traj.times.size(); ++k) mean += component(k, c);
    mean /= static_cast<double>(n);
    double cov = 0.0;
    for (std::size_t k = first; k < traj.times.size(); ++k) {
      cov += (traj.times[k] - t_mean) * (component(k, c) - mean);
    }
    const double slope = cov / t_var;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t k = first; k < traj.times.size(); ++k) {
      const double r = component(k, c) - mean - slope * (traj.times[k] - t_mean);
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    const double amplitude = hi - lo;
    if (amplitude > cfg.cycle_tol && std::abs(slope) * span <= 0.25 * amplitude) {
      return AttractorLabel::kLimitCycle;
    }
  }
  return AttractorLabel::kUndecided;
}

void WriteTrajectoryCsv(const Trajectory& traj, std::ostream& os) {
  auto block_names = [](char seat, const InformationClass& c) {
    std::vector<std::string> names;
    for (const auto& b : c.blocks()) {
      names.push_back(std::string(1, seat) + c.code() + "_" + std::to_string(b.front() + 1));
    }
    return names;
  };
  os << "time";
  for (const auto& n : block_names('x', traj.class_x)) os << ',' << n;
  for (const auto& n : block_names('y', traj.class_y)) os << ',' << n;
  os << ",u,v\n";
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    os << FormatReal(traj.times[k]);
    for (double val : traj.x[k]) os << ',' << FormatReal(val);
    for (double val : traj.y[k]) os << ',' << FormatReal(val);
    os << ',' << FormatReal(traj.u[k]) << ',' << FormatReal(traj.v[k]) << '\n';
  }
}

}  // namespace ipdlearn
