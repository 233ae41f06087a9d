#ifndef IPDLEARN_DYNAMICS_HPP
#define IPDLEARN_DYNAMICS_HPP

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "ipdlearn/equilibrium.hpp"
#include "ipdlearn/game_model.hpp"

namespace ipdlearn {

enum class LearningMode { kMutual, kOneSidedX };

std::string_view ToString(LearningMode m);
LearningMode ParseLearningMode(std::string_view s);

struct LearningConfig {
  InformationClass class_x{"1234"};
  InformationClass class_y{"1234"};
  PayoffMatrix payoff = PayoffMatrix::Standard();
  double dt = 0.1;
  double t_max = 1e4;
  double epsilon = 1e-4;
  LearningMode mode = LearningMode::kMutual;
  double window_fraction = 0.1;  // trailing window = window_fraction * t_max
  double fp_tol = 1e-8;
  double cycle_tol = 1e-3;
  std::size_t stride = 10;  // steps between stored samples

  double window() const { return window_fraction * t_max; }
  // Throws std::invalid_argument on dt <= 0, epsilon outside (0, 0.5), an
  // empty or full-length window, or stride 0.
  void Validate() const;
};

enum class AttractorLabel { kFixedPoint, kLimitCycle, kUndecided };
std::string_view ToString(AttractorLabel a);

struct Trajectory {
  InformationClass class_x{"1234"};
  InformationClass class_y{"1234"};
  std::vector<double> times;
  std::vector<std::vector<double>> x;  // block probabilities per sample
  std::vector<std::vector<double>> y;
  std::vector<double> u;
  std::vector<double> v;

  AttractorLabel attractor = AttractorLabel::kUndecided;
  OutcomeDistribution window_average;  // time average of p_e over the trailing window
  double window_start = 0.0;

  ClassStrategy final_x() const { return {class_x, x.back()}; }
  ClassStrategy final_y() const { return {class_y, y.back()}; }
  std::pair<double, double> window_payoffs(const PayoffMatrix& pm) const {
    return ExpectedPayoffs(window_average, pm);
  }
};

class IntegrationFailure : public std::runtime_error {
 public:
  IntegrationFailure(const std::string& what, double time)
      : std::runtime_error(what + " at t=" + std::to_string(time)), time_(time) {}
  double time() const { return time_; }

 private:
  double time_;
};

// Replicator learning velocity of both players' memory-one strategies:
// xdot_n = x_n (1 - x_n) (d p_e / d x_n . u), and likewise for y from its
// own seat.
std::pair<Vec4, Vec4> MemoryOneVelocity(const MemoryOneStrategy& x, const MemoryOneStrategy& y,
                                        const PayoffMatrix& pm);

// Block velocities: each block moves with the sum of the memory-one
// velocities of its outcomes, evaluated at the embedded strategies.
std::pair<std::vector<double>, std::vector<double>> ClassVelocity(const ClassStrategy& sx,
                                                                  const ClassStrategy& sy,
                                                                  const PayoffMatrix& pm);

// Fixed-step RK4 with projection onto [eps, 1-eps] after every step. Stage
// arguments are projected onto the same box.
Trajectory IntegrateMatch(const ClassStrategy& init_x, const ClassStrategy& init_y,
                          const LearningConfig& cfg);

// Classifies the stored samples in the trailing window of `traj`.
AttractorLabel DetectAttractor(const Trajectory& traj, const LearningConfig& cfg);

// Trajectory CSV: time, x-blocks, y-blocks, u, v. Block columns are named
// by seat, class code and block label, e.g. x1212_1, x1212_2.
void WriteTrajectoryCsv(const Trajectory& traj, std::ostream& os);

}  // namespace ipdlearn

#endif  // IPDLEARN_DYNAMICS_HPP
