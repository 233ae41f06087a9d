#include <doctest.h>

#include <cmath>
#include <random>

#include "ipdlearn/gradients.hpp"
#include "test_support.hpp"

using namespace ipdlearn;
using doctest::Approx;

namespace {

// d p_e / d x_n by central differences of the test's own stationary solver.
Vec4 NaiveDerivative(MemoryOneStrategy x, const MemoryOneStrategy& y, std::size_t n, double h) {
  const double base = x[n];
  x[n] = base + h;
  const Vec4 plus = testing::NaiveStationary(testing::NaiveTransition(x, y));
  x[n] = base - h;
  const Vec4 minus = testing::NaiveStationary(testing::NaiveTransition(x, y));
  return (plus - minus) / (2 * h);
}

}  // namespace

TEST_CASE("gradient at the uniform point") {
  const MemoryOneStrategy half{{0.5, 0.5, 0.5, 0.5}};
  for (std::size_t n = 0; n < 4; ++n) {
    const auto g = GradientLinearSolve(half, half, Seat::kX, n);
    CHECK(std::abs(g.d.sum()) < 1e-14);
    // M is rank one here, so the series stops after its first term.
    const auto s = GradientSeries(half, half, Seat::kX, n, 100);
    CHECK(s.terms == 2);
    CHECK(s.last_term_l1 == 0.0);
    CHECK((s.gradient.d - Vec4(0.125, 0.125, -0.125, -0.125)).lpNorm<1>() == 0.0);
    CHECK((g.d - s.gradient.d).lpNorm<1>() < 1e-15);
  }
  // With t_max = 0 only the first term p_n (p_C - p_D) remains.
  const MemoryOneStrategy x{{0.3, 0.6, 0.2, 0.7}}, y{{0.9, 0.1, 0.8, 0.4}};
  const auto s0 = GradientSeries(x, y, Seat::kX, 1, 0);
  const double pn = StationaryState(x, y).p[kCD];
  // After focal CD the opponent looks at its DC entry, y3 = 0.8.
  CHECK((s0.gradient.d - pn * Vec4(0.8, 0.2, -0.8, -0.2)).lpNorm<1>() < 1e-15);
  CHECK(s0.terms == 1);
}

TEST_CASE("three gradient evaluations agree") {
  std::mt19937_64 rng(21);
  for (int k = 0; k < 100; ++k) {
    const auto x = testing::RandomStrategy(rng, 0.02), y = testing::RandomStrategy(rng, 0.02);
    for (Seat seat : {Seat::kX, Seat::kY}) {
      for (std::size_t n = 0; n < 4; ++n) {
        const Vec4 lin = GradientLinearSolve(x, y, seat, n).d;
        const Vec4 ser = GradientSeries(x, y, seat, n, 1000000).gradient.d;
        const Vec4 fd = GradientFiniteDifference(x, y, seat, n, 1e-6).d;
        CHECK((lin - ser).lpNorm<Eigen::Infinity>() < 1e-8);
        CHECK((lin - fd).lpNorm<Eigen::Infinity>() <= 1e-6 * lin.lpNorm<Eigen::Infinity>());
        CHECK(std::abs(lin.sum()) < 1e-12);
        if (seat == Seat::kX) {
          CHECK((lin - NaiveDerivative(x, y, n, 1e-6)).lpNorm<Eigen::Infinity>() < 1e-7);
        }
      }
    }
  }
}

TEST_CASE("seat y gradient is the seat x gradient with players swapped") {
  std::mt19937_64 rng(22);
  for (int k = 0; k < 50; ++k) {
    const auto x = testing::RandomStrategy(rng), y = testing::RandomStrategy(rng);
    for (std::size_t n = 0; n < 4; ++n) {
      CHECK(GradientLinearSolve(x, y, Seat::kY, n).d == GradientLinearSolve(y, x, Seat::kX, n).d);
    }
  }
}

TEST_CASE("finite difference converges at second order") {
  const MemoryOneStrategy x{{0.3, 0.6, 0.2, 0.7}}, y{{0.9, 0.1, 0.8, 0.4}};
  const Vec4 exact = GradientLinearSolve(x, y, Seat::kX, 2).d;
  const double e1 = (GradientFiniteDifference(x, y, Seat::kX, 2, 2e-2).d - exact).norm();
  const double e2 = (GradientFiniteDifference(x, y, Seat::kX, 2, 1e-2).d - exact).norm();
  CHECK(e1 / e2 == Approx(4.0).epsilon(0.1));

  CHECK_THROWS_AS(GradientFiniteDifference(x, y, Seat::kX, 2, 0.25), std::invalid_argument);
  CHECK_THROWS_AS(GradientFiniteDifference(x, y, Seat::kX, 4, 1e-6), std::out_of_range);
}

TEST_CASE("payoff gradients are linear in the payoff vector") {
  std::mt19937_64 rng(23);
  const PayoffMatrix a = PayoffMatrix::Standard(), b(5, 4, 2, 0);
  for (int k = 0; k < 50; ++k) {
    const auto x = testing::RandomStrategy(rng), y = testing::RandomStrategy(rng);
    const auto d = GradientsLinearSolve(x, y);
    for (const PayoffMatrix& pm : {a, b}) {
      const Vec4 g = PayoffGradient(x, y, pm.focal());
      const SeatPayoffGradients both = PayoffGradients(x, y, pm);
      const auto dy = GradientsLinearSolve(y, x);
      for (std::size_t n = 0; n < 4; ++n) {
        CHECK(g[n] == Approx(d[n].dot(pm.focal())).epsilon(1e-10));
        CHECK(both.x[n] == Approx(g[n]).epsilon(1e-10));
        CHECK(both.y[n] == Approx(dy[n].dot(pm.focal())).epsilon(1e-10));
      }
      CHECK((both.stationary.p - StationaryState(x, y).p).lpNorm<1>() < 1e-14);
    }
  }
}

TEST_CASE("gradients need a unique stationary state") {
  const MemoryOneStrategy tft{{1, 0, 1, 0}};
  CHECK_THROWS_AS(GradientLinearSolve(tft, tft, Seat::kX, 0), DegenerateEquilibrium);
}
