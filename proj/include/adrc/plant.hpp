#pragma once

#include <functional>
#include <stdexcept>

namespace adrc {

class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Single-DOF mechanical system  J(q) q'' + h(q, q') + h_m(q, q') + tau*(t) = tau.
struct PlantModel {
  std::function<double(double q)> inertia;
  std::function<double(double q, double qdot)> unmodeled;
  std::function<double(double q, double qdot)> modeled;
  std::function<double(double t)> external_disturbance;
};

struct PlantState {
  double q = 0.0;
  double qdot = 0.0;
};

// What the controller believes about the plant: a constant inertia and a
// model of h_m evaluated on estimated quantities.
struct ModelEstimate {
  double inertia = 1.0;
  std::function<double(double q, double qdot)> modeled;

  [[nodiscard]] double modeled_at(double q, double qdot) const { return modeled ? modeled(q, qdot) : 0.0; }
};

struct PlantDerivative {
  double qdot;
  double qddot;
};

// External disturbance a*sin(w t) + offset, switched on for t >= start.
struct DisturbanceSchedule {
  double amplitude = 0.0;
  double angular_rate = 0.0;
  double offset = 0.0;
  double start = 0.0;

  [[nodiscard]] double operator()(double t) const;
};

PlantDerivative plant_derivative(const PlantModel& m, const PlantState& s, double tau, double t);

// Lumped total disturbance acting on the tracking-error dynamics:
//   f = qdd_d - (tau - h_m - h - tau*) / J + (tau - hm_hat) / J_hat
// hm_hat is evaluated at (q, qdot_hat) by the caller-supplied estimate.
double total_disturbance_truth(const PlantModel& m, const ModelEstimate& est, const PlantState& s, double tau,
                               double qddot_desired, double t, double qdot_hat);

// Mass-spring-damper J q'' + c q' + k q = tau - tau*. The defaults
// (J = 1, c = 2, k = 1) realise G(s) = 1/(s+1)^2.
PlantModel preset_double_lag(double inertia = 1.0, double damping = 2.0, double stiffness = 1.0,
                             std::function<double(double)> disturbance = {});

}  // namespace adrc
