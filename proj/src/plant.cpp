#include "adrc/plant.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace adrc {

namespace {

double evaluate_inertia(const PlantModel& m, double q) {
  const double j = m.inertia ? m.inertia(q) : 1.0;
  if (!(j > 0.0)) throw ModelError("plant inertia must be positive, got J(" + std::to_string(q) + ") = " +
                                   std::to_string(j));
  return j;
}

double call_or_zero(const std::function<double(double, double)>& fn, double a, double b) {
  return fn ? fn(a, b) : 0.0;
}

}  // namespace

double DisturbanceSchedule::operator()(double t) const {
  if (t < start) return 0.0;
  return offset + amplitude * std::sin(angular_rate * t);
}

PlantDerivative plant_derivative(const PlantModel& m, const PlantState& s, double tau, double t) {
  const double j = evaluate_inertia(m, s.q);
  const double ext = m.external_disturbance ? m.external_disturbance(t) : 0.0;
  const double h = call_or_zero(m.unmodeled, s.q, s.qdot);
  const double hm = call_or_zero(m.modeled, s.q, s.qdot);
  return {s.qdot, (tau - h - hm - ext) / j};
}

double total_disturbance_truth(const PlantModel& m, const ModelEstimate& est, const PlantState& s, double tau,
                               double qddot_desired, double t, double qdot_hat) {
  if (!(est.inertia > 0.0)) throw ModelError("estimated inertia must be positive");
  const double j = evaluate_inertia(m, s.q);
  const double ext = m.external_disturbance ? m.external_disturbance(t) : 0.0;
  const double h = call_or_zero(m.unmodeled, s.q, s.qdot);
  const double hm = call_or_zero(m.modeled, s.q, s.qdot);
  const double hm_hat = est.modeled_at(s.q, qdot_hat);
  return qddot_desired - (tau - hm - h - ext) / j + (tau - hm_hat) / est.inertia;
}

PlantModel preset_double_lag(double inertia, double damping, double stiffness,
                             std::function<double(double)> disturbance) {
  PlantModel m;
  m.inertia = [inertia](double) { return inertia; };
  m.unmodeled = [damping, stiffness](double q, double qdot) { return damping * qdot + stiffness * q; };
  m.external_disturbance = std::move(disturbance);
  return m;
}

}  // namespace adrc
