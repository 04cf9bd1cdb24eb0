#include "adrc/control.hpp"

#include <stdexcept>

namespace adrc {

void ControllerParams::validate() const {
  if (!(kp > 0.0) || !(kd > 0.0)) throw std::invalid_argument("controller gains kp and kd must be positive");
  if (!(t_on >= 0.0)) throw std::invalid_argument("controller activation time must be non-negative");
}

double control_law(const ControllerParams& p, const ModelEstimate& est, double q, double qdot_hat,
                   const Estimates& x, double t) {
  if (t < p.t_on) return 0.0;
  return est.modeled_at(q, qdot_hat) + est.inertia * (x.f + p.kp * x.e + p.kd * x.edot);
}

double effective_input(const ModelEstimate& est, double tau, double q, double qdot_hat) {
  return (tau - est.modeled_at(q, qdot_hat)) / est.inertia;
}

double closed_loop_residual(double e, double edot, double f_tilde, double edot_tilde, const ControllerParams& p,
                            double e_tilde) {
  return -p.kp * e - p.kd * edot + f_tilde + p.kd * edot_tilde + p.kp * e_tilde;
}

}  // namespace adrc
