#pragma once

#include "adrc/simkernel.hpp"
#include "adrc/smallmat.hpp"

#include <filesystem>
#include <span>
#include <stdexcept>
#include <vector>

namespace adrc {

// Input-to-state bound on the observation error of the n = 3 Luenberger ESO:
//   |x~(t)| <= c1 |x~(0)| exp(-gamma t) + 2|P|/(nu w) sup|f'| + 2 w^2 |P|/nu sup|w|
// with H^T P + P H + w I = 0, H = A3 - l3 c3, c1 = sqrt(lmax/lmin) and
// gamma = w (1 - nu) / (2 lmax).
struct IssObserverBound {
  smallmat::SymMat p = smallmat::SymMat::identity(3);
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  double p_norm = 0.0;
  double bandwidth = 0.0;
  double nu = 0.5;
  double c1 = 0.0;
  double decay_rate = 0.0;
  double disturbance_gain = 0.0;  // multiplies sup|f'|
  double noise_gain = 0.0;        // multiplies sup|w|
  double fdot_sup = 0.0;
  double noise_sup = 0.0;
  double initial_error = 0.0;

  [[nodiscard]] double operator()(double t) const;
};

IssObserverBound iss_observer_bound(double bandwidth, double nu, double fdot_sup, double noise_sup,
                                    double initial_error);

// Bound on the combined control error eps = [e, e'] driven by the
// observation error through k = [kp, kd, 1]. With position_coupling off the
// kp entry is dropped, k = [0, kd, 1], which is only valid when e is known
// exactly:
//   |eps(t)| <= sqrt(lmax/lmin) |eps(0)| exp(-gamma t) + 2|P||k|/(nu rho) sup|x~|
// with H^T P + P H + rho I = 0, H = [[0, 1], [-kp, -kd]].
struct IssControlBound {
  smallmat::SymMat p = smallmat::SymMat::identity(2);
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  double p_norm = 0.0;
  double k_norm = 0.0;
  double rho = 1.0;
  double nu = 0.5;
  double c1 = 0.0;
  double decay_rate = 0.0;
  double gain = 0.0;  // multiplies sup|x~|
  double observation_sup = 0.0;
  double initial_error = 0.0;

  [[nodiscard]] double operator()(double t) const;
};

IssControlBound iss_control_bound(double kp, double kd, double rho, double nu, double observation_sup,
                                  double initial_error, bool position_coupling = true);

struct BoundReport {
  bool pass = true;
  double min_margin = 0.0;  // min over samples of bound - actual
  std::vector<double> t;
  std::vector<double> actual;
  std::vector<double> bound;
};

void write_bound_csv(const BoundReport& r, const std::filesystem::path& path);

// Checks the observation-error bound pointwise on a logged run. sup|f'|
// comes from a five-point derivative of f_true and sup|w| from y - e.
// Only the n = 3 Luenberger observer is covered.
BoundReport bound_check(const RunRecord& run, ObserverKind kind, double bandwidth, double nu = 0.5);

// Control-error bound evaluated from the activation time t_on onwards.
BoundReport control_bound_check(const RunRecord& run, const ControllerParams& ctrl, double nu = 0.5,
                                double rho = 1.0);

class TuningError : public std::runtime_error {
 public:
  TuningError(const std::string& what, double je_low, double je_high)
      : std::runtime_error(what), je_low_(je_low), je_high_(je_high) {}
  [[nodiscard]] double je_low() const { return je_low_; }
  [[nodiscard]] double je_high() const { return je_high_; }

 private:
  double je_low_;
  double je_high_;
};

struct TuneResult {
  double bandwidth = 0.0;
  double je = 0.0;
  int evaluations = 0;
};

struct TuneOptions {
  double rel_tol = 1e-3;
  int max_iterations = 40;
  int max_expansions = 8;
};

// Log-scale bisection on omega_o for J_e(omega_o) = target, assuming J_e
// decreases with omega_o inside the bracket. The bracket is widened by
// factors of two (the upper edge never beyond the RK4 stability margin)
// before giving up with TuningError.
TuneResult tune_omega(double target_je, const ScenarioConfig& tmpl, double lo, double hi,
                      const TuneOptions& opt = {});

struct SpectrumBin {
  double omega = 0.0;  // rad/s
  double magnitude = 0.0;
};

// One-sided magnitude periodogram of the mean-removed, Hann-windowed signal.
// Magnitudes are scaled so their squares sum to the windowed signal energy.
std::vector<SpectrumBin> error_spectrum(std::span<const double> e, double dt);

// Index of the largest bin above DC.
std::size_t dominant_peak(std::span<const SpectrumBin> spectrum);
std::size_t nearest_bin(std::span<const SpectrumBin> spectrum, double omega);

void write_spectrum_csv(std::span<const SpectrumBin> spectrum, const std::filesystem::path& path);

}  // namespace adrc
