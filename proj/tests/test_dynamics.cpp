#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "ipdlearn/analysis.hpp"
#include "ipdlearn/dynamics.hpp"
#include "ipdlearn/gradients.hpp"
#include "test_support.hpp"

using namespace ipdlearn;
using doctest::Approx;

namespace {

LearningConfig Config(const char* cx, const char* cy, double t_max) {
  LearningConfig c;
  c.class_x = InformationClass(cx);
  c.class_y = InformationClass(cy);
  c.t_max = t_max;
  return c;
}

// Reference integrator written against the memory-one field only: RK4 on
// embedded 4-vectors where every outcome of a block moves with the block's
// summed velocity, projected like the library does.
std::pair<MemoryOneStrategy, MemoryOneStrategy> ReferenceIntegrate(
    const ClassStrategy& sx, const ClassStrategy& sy, const LearningConfig& cfg) {
  using V8 = Eigen::Matrix<double, 8, 1>;
  auto field = [&](const V8& s) {
    MemoryOneStrategy x{{s[0], s[1], s[2], s[3]}}, y{{s[4], s[5], s[6], s[7]}};
    auto [vx, vy] = MemoryOneVelocity(x, y, cfg.payoff);
    V8 out;
    for (std::size_t i = 0; i < 4; ++i) {
      double bx = 0, by = 0;
      for (std::size_t j : sx.info_class.blocks()[sx.info_class.block_of(i)]) bx += vx[j];
      for (std::size_t j : sy.info_class.blocks()[sy.info_class.block_of(i)]) by += vy[j];
      out[i] = bx;
      out[4 + i] = by;
    }
    return out;
  };
  auto project = [&](V8 s) {
    for (int i = 0; i < 8; ++i) s[i] = std::clamp(s[i], cfg.epsilon, 1 - cfg.epsilon);
    return s;
  };
  V8 s;
  const MemoryOneStrategy ex = sx.Embed(), ey = sy.Embed();
  for (std::size_t i = 0; i < 4; ++i) {
    s[i] = ex[i];
    s[4 + i] = ey[i];
  }
  s = project(s);
  const double dt = cfg.dt;
  const auto steps = static_cast<long>(std::llround(cfg.t_max / dt));
  for (long k = 0; k < steps; ++k) {
    const V8 k1 = field(s);
    const V8 k2 = field(project(s + 0.5 * dt * k1));
    const V8 k3 = field(project(s + 0.5 * dt * k2));
    const V8 k4 = field(project(s + dt * k3));
    s = project(s + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4));
  }
  return {MemoryOneStrategy{{s[0], s[1], s[2], s[3]}}, MemoryOneStrategy{{s[4], s[5], s[6], s[7]}}};
}

}  // namespace

TEST_CASE("learning mode names") {
  CHECK(ParseLearningMode("mutual") == LearningMode::kMutual);
  CHECK(ParseLearningMode("one-sided") == LearningMode::kOneSidedX);
  CHECK(ToString(LearningMode::kOneSidedX) == "one-sided");
  CHECK_THROWS_AS(ParseLearningMode("both"), std::invalid_argument);
  CHECK(ToString(AttractorLabel::kLimitCycle) == "limit_cycle");
}

TEST_CASE("config validation") {
  LearningConfig c;
  CHECK_NOTHROW(c.Validate());
  c.dt = 0;
  CHECK_THROWS_AS(c.Validate(), std::invalid_argument);
  c = {};
  c.epsilon = 0.5;
  CHECK_THROWS_AS(c.Validate(), std::invalid_argument);
  c = {};
  c.window_fraction = 1.0;
  CHECK_THROWS_AS(c.Validate(), std::invalid_argument);
  c = {};
  c.stride = 0;
  CHECK_THROWS_AS(c.Validate(), std::invalid_argument);

  const LearningConfig cfg = Config("1234", "1212", 10);
  CHECK_THROWS_AS(IntegrateMatch(ClassStrategy(InformationClass("1212"), {0.5, 0.5}),
                                 ClassStrategy(InformationClass("1212"), {0.5, 0.5}), cfg),
                  std::invalid_argument);
}

TEST_CASE("velocity near the boundary is bounded by the logistic factor") {
  std::mt19937_64 rng(31);
  const PayoffMatrix pm = PayoffMatrix::Standard();
  const double eps = 1e-4;
  for (int k = 0; k < 100; ++k) {
    auto x = testing::RandomStrategy(rng);
    const auto y = testing::RandomStrategy(rng);
    const std::size_t n = static_cast<std::size_t>(k % 4);
    x[n] = eps;
    const auto [vx, vy] = MemoryOneVelocity(x, y, pm);
    const Vec4 d = GradientLinearSolve(x, y, Seat::kX, n).d;
    CHECK(std::abs(vx[n]) <= eps * (1 - eps) * (pm.T() - pm.S()) * d.lpNorm<1>() + 1e-18);
  }
}

TEST_CASE("symmetric states have symmetric velocities") {
  std::mt19937_64 rng(32);
  for (int k = 0; k < 50; ++k) {
    const auto x = testing::RandomStrategy(rng);
    const auto [vx, vy] = MemoryOneVelocity(x, x, PayoffMatrix::Standard());
    CHECK((vx - vy).lpNorm<Eigen::Infinity>() < 1e-12);
  }
}

TEST_CASE("class velocity sums memory-one velocities over blocks") {
  std::mt19937_64 rng(33);
  const PayoffMatrix pm = PayoffMatrix::Standard();
  for (int k = 0; k < 50; ++k) {
    const ClassStrategy sx(InformationClass("1212"), {0.1 + 0.8 * (k % 7) / 7.0, 0.3});
    const ClassStrategy sy(InformationClass("1232"), {0.2, 0.6, 0.4 + 0.01 * k});
    const auto [vx, vy] = MemoryOneVelocity(sx.Embed(), sy.Embed(), pm);
    const auto [bx, by] = ClassVelocity(sx, sy, pm);
    CHECK(bx[0] == Approx(vx[0] + vx[2]).epsilon(1e-12));
    CHECK(bx[1] == Approx(vx[1] + vx[3]).epsilon(1e-12));
    CHECK(by[0] == Approx(vy[0]).epsilon(1e-12));
    CHECK(by[1] == Approx(vy[1] + vy[3]).epsilon(1e-12));
    CHECK(by[2] == Approx(vy[2]).epsilon(1e-12));
  }
  // The full class moves exactly like the memory-one field.
  const ClassStrategy m(InformationClass("1234"), {0.2, 0.4, 0.6, 0.8});
  const auto [mx, my] = ClassVelocity(m, m, pm);
  const auto [vx, vy] = MemoryOneVelocity(m.Embed(), m.Embed(), pm);
  for (std::size_t i = 0; i < 4; ++i) CHECK(mx[i] == vx[i]);
}

TEST_CASE("exploitation configuration is a rest point of x3 and y4") {
  const double eps = 1e-6;
  const PayoffMatrix pm = PayoffMatrix::Standard();
  for (double x1 : {0.2, 0.5, 0.9}) {
    const MemoryOneStrategy x{{x1, eps, 0.25, eps}}, y{{0.7, eps, 1 - eps, 0.6}};
    const auto [vx, vy] = MemoryOneVelocity(x, y, pm);
    CHECK(std::abs(vx[2]) < 1e-5);
    CHECK(std::abs(vy[3]) < 1e-5);
    // x1 and y1 are neutral: their velocities vanish with eps.
    CHECK(std::abs(vx[0]) < 10 * eps);
    CHECK(std::abs(vy[0]) < 10 * eps);
  }
  // Away from the rest point the full field reduces to the two-variable system.
  const MemoryOneStrategy x{{0.5, 1e-8, 0.3, 1e-8}}, y{{0.5, 1e-8, 1 - 1e-8, 0.7}};
  const auto [vx, vy] = MemoryOneVelocity(x, y, pm);
  const auto [a, b] = LvVelocity({0.3, 0.7}, pm);
  CHECK(vx[2] == Approx(a).epsilon(1e-6));
  CHECK(vy[3] == Approx(b).epsilon(1e-6));
}

TEST_CASE("integration stays in the box and is deterministic") {
  const LearningConfig cfg = Config("1234", "1212", 300);
  const ClassStrategy sx(InformationClass("1234"), {0.3, 0.9, 0.01, 0.7});
  const ClassStrategy sy(InformationClass("1212"), {0.0, 1.0});
  const Trajectory a = IntegrateMatch(sx, sy, cfg);
  const Trajectory b = IntegrateMatch(sx, sy, cfg);
  CHECK(a.x == b.x);
  CHECK(a.y == b.y);
  CHECK(a.u == b.u);
  REQUIRE(a.times.size() == 301);
  CHECK(a.times.back() == Approx(300.0));
  CHECK(a.window_start == Approx(270.0));
  for (std::size_t k = 0; k < a.times.size(); ++k) {
    for (double v : a.x[k]) CHECK((v >= cfg.epsilon && v <= 1 - cfg.epsilon));
    for (double v : a.y[k]) CHECK((v >= cfg.epsilon && v <= 1 - cfg.epsilon));
    CHECK(a.u[k] >= 0.0);
    CHECK(a.u[k] <= 5.0);
  }
  // Initial values are projected onto the box.
  CHECK(a.y[0] == std::vector<double>{cfg.epsilon, 1 - cfg.epsilon});
  CHECK(a.window_average.p.sum() == Approx(1.0));
}

TEST_CASE("one-sided learning freezes the opponent") {
  LearningConfig cfg = Config("1212", "1212", 200);
  cfg.mode = LearningMode::kOneSidedX;
  const ClassStrategy opp(InformationClass("1212"), {0.9, 0.1});
  const Trajectory t = IntegrateMatch(ClassStrategy(InformationClass("1212"), {0.3, 0.6}), opp, cfg);
  for (const auto& y : t.y) CHECK(y == opp.probs);
  // With a fixed opponent, the learner's payoff never decreases.
  for (std::size_t k = 1; k < t.u.size(); ++k) CHECK(t.u[k] >= t.u[k - 1] - 1e-9);
  CHECK(t.u.back() > t.u.front());
}

TEST_CASE("class-constrained integration matches the embedded reference") {
  LearningConfig cfg = Config("1212", "1234", 50);
  const ClassStrategy sx(InformationClass("1212"), {0.4, 0.7});
  const ClassStrategy sy(InformationClass("1234"), {0.6, 0.2, 0.5, 0.3});
  const Trajectory t = IntegrateMatch(sx, sy, cfg);
  const auto [rx, ry] = ReferenceIntegrate(sx, sy, cfg);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(std::abs(t.final_x().Embed()[i] - rx[i]) < 1e-12);
    CHECK(std::abs(t.final_y().Embed()[i] - ry[i]) < 1e-12);
  }
}

TEST_CASE("mutual defection is the only outcome for the unconditional class") {
  const LearningConfig cfg = Config("1111", "1212", 500);
  for (double p : {0.2, 0.5, 0.95}) {
    const Trajectory t = IntegrateMatch(ClassStrategy(InformationClass("1111"), {p}),
                                        ClassStrategy(InformationClass("1212"), {0.8, 0.4}), cfg);
    const auto [u, v] = t.window_payoffs(cfg.payoff);
    CHECK(u == Approx(1.0).epsilon(1e-2));
    CHECK(v == Approx(1.0).epsilon(1e-2));
    CHECK(t.x.back()[0] == Approx(cfg.epsilon));
  }
}

TEST_CASE("halving the step barely moves converged payoffs") {
  for (const auto& [ix, iy] : std::vector<std::pair<std::vector<double>, std::vector<double>>>{
           {{0.8, 0.3, 0.6, 0.4}, {0.7, 0.2}},
           {{0.2, 0.5, 0.3, 0.6}, {0.4, 0.5}},
           {{0.9, 0.1, 0.8, 0.2}, {0.9, 0.3}}}) {
    LearningConfig cfg = Config("1234", "1212", 2000);
    const ClassStrategy sx(cfg.class_x, ix), sy(cfg.class_y, iy);
    const Trajectory a = IntegrateMatch(sx, sy, cfg);
    cfg.dt /= 2;
    cfg.stride *= 2;
    const Trajectory b = IntegrateMatch(sx, sy, cfg);
    CHECK(a.attractor == b.attractor);
    CHECK(ClassifyOutcome(a.window_average) == ClassifyOutcome(b.window_average));
    // On a cycle the window average depends on the phase, which drifts with
    // the step size; only settled payoffs are compared.
    if (a.attractor != AttractorLabel::kFixedPoint) continue;
    const auto [u1, v1] = a.window_payoffs(cfg.payoff);
    const auto [u2, v2] = b.window_payoffs(cfg.payoff);
    CHECK(std::abs(u1 - u2) <= 1e-4);
    CHECK(std::abs(v1 - v2) <= 1e-4);
  }
}

TEST_CASE("exploitation orbit is a limit cycle with neutral x1 and y1") {
  const LearningConfig cfg = Config("1234", "1234", 10000);
  const double e = cfg.epsilon;
  const ClassStrategy sx(cfg.class_x, {0.5, e, 0.28, e}), sy(cfg.class_y, {0.5, e, 1 - e, 0.6});
  const Trajectory t = IntegrateMatch(sx, sy, cfg);
  CHECK(t.attractor == AttractorLabel::kLimitCycle);
  CHECK(std::abs(t.x.back()[0] - 0.5) < 0.1);
  CHECK(std::abs(t.y.back()[0] - 0.5) < 0.1);
  const auto [u, v] = t.window_payoffs(cfg.payoff);
  CHECK(u > v);

  const ClassStrategy sx2(cfg.class_x, {0.8, e, 0.28, e});
  const Trajectory t2 = IntegrateMatch(sx2, sy, cfg);
  CHECK(std::abs(t2.x.back()[0] - t.x.back()[0]) > 0.2);
}

TEST_CASE("attractor detection on synthetic samples") {
  LearningConfig cfg = Config("1212", "1212", 1000);
  auto make = [&](auto f) {
    Trajectory t;
    t.class_x = t.class_y = cfg.class_x;
    for (int k = 0; k <= 1000; ++k) {
      const double time = k;
      t.times.push_back(time);
      t.x.push_back({f(time), 0.5});
      t.y.push_back({0.5, 0.5});
      t.u.push_back(1);
      t.v.push_back(1);
    }
    return t;
  };
  CHECK(DetectAttractor(make([](double) { return 0.3; }), cfg) == AttractorLabel::kFixedPoint);
  CHECK(DetectAttractor(make([](double t) { return 0.5 + 0.1 * std::sin(t / 5); }), cfg) ==
        AttractorLabel::kLimitCycle);
  // A slow drift alongside an oscillation still counts as a cycle.
  CHECK(DetectAttractor(make([](double t) { return 0.5 + 0.05 * std::sin(t / 5) + 1e-5 * t; }),
                        cfg) == AttractorLabel::kLimitCycle);
  CHECK(DetectAttractor(make([](double t) { return 0.2 + 1e-4 * t; }), cfg) ==
        AttractorLabel::kUndecided);
  CHECK(DetectAttractor(make([](double t) { return 0.5 + 1e-5 * std::sin(t / 5); }), cfg) ==
        AttractorLabel::kUndecided);
}

TEST_CASE("trajectory csv") {
  const LearningConfig cfg = Config("1212", "1214", 2);
  const Trajectory t = IntegrateMatch(ClassStrategy(cfg.class_x, {0.5, 0.5}),
                                      ClassStrategy(cfg.class_y, {0.5, 0.5, 0.5}), cfg);
  std::ostringstream os;
  WriteTrajectoryCsv(t, os);
  std::istringstream is(os.str());
  std::string header;
  std::getline(is, header);
  CHECK(header == "time,x1212_1,x1212_2,y1214_1,y1214_2,y1214_4,u,v");
  int rows = 0;
  for (std::string line; std::getline(is, line);) ++rows;
  CHECK(rows == static_cast<int>(t.times.size()));
}
