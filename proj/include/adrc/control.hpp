#pragma once

#include "adrc/observers.hpp"
#include "adrc/plant.hpp"

namespace adrc {

struct ControllerParams {
  double kp = 4.0;
  double kd = 4.0;
  double t_on = 1.0;  // controller output is held at zero before this time

  void validate() const;
};

// tau = hm_hat(q, qdot_hat) + J_hat (f_hat + kp e_hat + kd edot_hat) for t >= t_on,
// zero before. qdot_hat is the rate estimate qdot_d - edot_hat.
double control_law(const ControllerParams& p, const ModelEstimate& est, double q, double qdot_hat,
                   const Estimates& x, double t);

// (tau - hm_hat) / J_hat, the input term shared by the observers.
double effective_input(const ModelEstimate& est, double tau, double q, double qdot_hat);

// Predicted error acceleration of the closed loop,
//   e'' = -kp e - kd e' + f_tilde + kd edot_tilde + kp e_tilde.
// The last term vanishes when the position estimate is exact.
double closed_loop_residual(double e, double edot, double f_tilde, double edot_tilde, const ControllerParams& p,
                            double e_tilde = 0.0);

}  // namespace adrc
