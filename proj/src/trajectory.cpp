#include "adrc/trajectory.hpp"

#include "adrc/rk4.hpp"

#include <cmath>
#include <stdexcept>

namespace adrc {

FilteredStepGen::FilteredStepGen(double step_time, double amplitude, double time_constant)
    : step_time_(step_time), amplitude_(amplitude), time_constant_(time_constant) {
  if (!(time_constant > 0.0)) throw std::invalid_argument("filter time constant must be positive");
}

void FilteredStepGen::derivative(std::span<const double> z, double t, std::span<double> dz) const {
  double upstream = input(t);
  for (std::size_t i = 0; i < kOrder; ++i) {
    dz[i] = (upstream - z[i]) / time_constant_;
    upstream = z[i];
  }
}

TrajectorySample FilteredStepGen::sample(std::span<const double> z) const {
  const double tc = time_constant_;
  const double z3 = z[kOrder - 3];
  const double z4 = z[kOrder - 2];
  const double z5 = z[kOrder - 1];
  return {z5, (z4 - z5) / tc, (z3 - 2.0 * z4 + z5) / (tc * tc)};
}

TrajectorySample FilteredStepGen::sample_and_advance(double t, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("trajectory step must be positive");
  const TrajectorySample s = sample(states_);
  rk4_step<kOrder>([this](double tt, std::span<const double> z, std::span<double> dz) { derivative(z, tt, dz); },
                   t, dt, states_);
  return s;
}

TrajectorySample SinusoidGen::sample(double t) const {
  const double s = std::sin(angular_rate * t);
  const double c = std::cos(angular_rate * t);
  return {amplitude * s, amplitude * angular_rate * c, -amplitude * angular_rate * angular_rate * s};
}

std::size_t trajectory_state_size(const Trajectory& gen) {
  return std::holds_alternative<FilteredStepGen>(gen) ? FilteredStepGen::kOrder : 0;
}

TrajectorySample traj_sample(Trajectory& gen, double t, double dt) {
  if (auto* step = std::get_if<FilteredStepGen>(&gen)) return step->sample_and_advance(t, dt);
  return std::get<SinusoidGen>(gen).sample(t);
}

}  // namespace adrc
