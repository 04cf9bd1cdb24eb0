#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <variant>

namespace adrc {

struct TrajectorySample {
  double q = 0.0;
  double qdot = 0.0;
  double qddot = 0.0;
};

// Unit step at step_time scaled by amplitude and passed through five
// identical first-order lags 1/(tc s + 1). The cascade states are part of the
// simulated ODE; q_d is the last state and its derivatives are exact linear
// combinations of the last three.
//
// Note: the step through a 5th-order lag is only C^4 at the switch instant.
class FilteredStepGen {
 public:
  static constexpr std::size_t kOrder = 5;

  FilteredStepGen() = default;
  FilteredStepGen(double step_time, double amplitude, double time_constant = 0.5);

  [[nodiscard]] double step_time() const { return step_time_; }
  [[nodiscard]] double amplitude() const { return amplitude_; }
  [[nodiscard]] double time_constant() const { return time_constant_; }

  [[nodiscard]] double input(double t) const { return t >= step_time_ ? amplitude_ : 0.0; }
  void derivative(std::span<const double> z, double t, std::span<double> dz) const;
  [[nodiscard]] TrajectorySample sample(std::span<const double> z) const;

  [[nodiscard]] std::span<const double> states() const { return states_; }
  void reset() { states_.fill(0.0); }
  // Sample at t from the owned cascade, then advance it to t + dt.
  TrajectorySample sample_and_advance(double t, double dt);

 private:
  double step_time_ = 7.5;
  double amplitude_ = 1.0;
  double time_constant_ = 0.5;
  std::array<double, kOrder> states_{};
};

// q_d = a sin(w t); stateless.
struct SinusoidGen {
  double amplitude = 0.0;
  double angular_rate = 0.0;

  [[nodiscard]] TrajectorySample sample(double t) const;
};

using Trajectory = std::variant<FilteredStepGen, SinusoidGen>;

// Number of ODE states a generator contributes to the coupled system.
std::size_t trajectory_state_size(const Trajectory& gen);

// Returns (q_d, q_d', q_d'') at t. Stateful generators then advance their
// internal state by dt, so consecutive calls on a uniform grid walk the
// trajectory.
TrajectorySample traj_sample(Trajectory& gen, double t, double dt);

}  // namespace adrc
