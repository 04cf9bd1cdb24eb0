#include "adrc/analysis.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <mutex>
#include <numbers>

namespace adrc {

using smallmat::Mat;
using smallmat::SymMat;

namespace {

void check_nu(double nu) {
  if (!(nu > 0.0 && nu < 1.0)) throw std::invalid_argument("majorization constant nu must lie in (0, 1)");
}

double sup_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// FFTW planning is not thread-safe; execution is.
std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

double IssObserverBound::operator()(double t) const {
  return c1 * initial_error * std::exp(-decay_rate * t) + disturbance_gain * fdot_sup + noise_gain * noise_sup;
}

IssObserverBound iss_observer_bound(double bandwidth, double nu, double fdot_sup, double noise_sup,
                                    double initial_error) {
  check_nu(nu);
  if (!(bandwidth > 0.0)) throw std::invalid_argument("observer bandwidth must be positive");
  const double w = bandwidth;
  const Mat h(3, 3, {-3 * w, 1, 0, -3 * w * w, 0, 1, -w * w * w, 0, 0});
  IssObserverBound b;
  // H^T P + P H + w I = 0 is the form that makes V = x^T P x / 2 decrease.
  b.p = smallmat::solve_lyapunov(h.transposed(), SymMat::identity(3, w));
  const auto ext = smallmat::eig_extremes(b.p);
  b.lambda_min = ext.min;
  b.lambda_max = ext.max;
  b.p_norm = ext.max;
  b.bandwidth = w;
  b.nu = nu;
  b.c1 = std::sqrt(ext.max / ext.min);
  b.decay_rate = w * (1.0 - nu) / (2.0 * ext.max);
  b.disturbance_gain = 2.0 * b.p_norm / (nu * w);
  b.noise_gain = 2.0 * w * w * b.p_norm / nu;
  b.fdot_sup = fdot_sup;
  b.noise_sup = noise_sup;
  b.initial_error = initial_error;
  return b;
}

double IssControlBound::operator()(double t) const {
  return c1 * initial_error * std::exp(-decay_rate * t) + gain * observation_sup;
}

IssControlBound iss_control_bound(double kp, double kd, double rho, double nu, double observation_sup,
                                  double initial_error, bool position_coupling) {
  check_nu(nu);
  if (!(kp > 0.0) || !(kd > 0.0)) throw std::invalid_argument("controller gains must be positive");
  if (!(rho > 0.0)) throw std::invalid_argument("rho must be positive");
  const Mat h(2, 2, {0, 1, -kp, -kd});
  IssControlBound b;
  b.p = smallmat::solve_lyapunov(h.transposed(), SymMat::identity(2, rho));
  const auto ext = smallmat::eig_extremes(b.p);
  b.lambda_min = ext.min;
  b.lambda_max = ext.max;
  b.p_norm = ext.max;
  b.k_norm = std::sqrt((position_coupling ? kp * kp : 0.0) + kd * kd + 1.0);
  b.rho = rho;
  b.nu = nu;
  b.c1 = std::sqrt(ext.max / ext.min);
  b.decay_rate = rho * (1.0 - nu) / (2.0 * ext.max);
  b.gain = 2.0 * b.p_norm * b.k_norm / (nu * rho);
  b.observation_sup = observation_sup;
  b.initial_error = initial_error;
  return b;
}

namespace {

void require_truth(const RunRecord& run) {
  const std::size_t n = run.size();
  if (n < 5 || run.f_true.size() != n || run.e.size() != n || run.e_hat.size() != n || run.edot_hat.size() != n ||
      run.f_hat.size() != n || run.y.size() != n) {
    throw std::invalid_argument("bound check needs complete truth and estimate series (at least 5 samples)");
  }
}

std::vector<double> observation_error_norm(const RunRecord& run) {
  const std::size_t n = run.size();
  const std::vector<double> edot =
      run.edot.size() == n ? run.edot : finite_difference(run.e, run.t[1] - run.t[0]);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = run.e[i] - run.e_hat[i];
    const double b = edot[i] - run.edot_hat[i];
    const double c = run.f_true[i] - run.f_hat[i];
    out[i] = std::sqrt(a * a + b * b + c * c);
  }
  return out;
}

void finish(BoundReport& rep) {
  rep.min_margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < rep.t.size(); ++i) {
    const double margin = rep.bound[i] - rep.actual[i];
    rep.min_margin = std::min(rep.min_margin, margin);
    if (!(rep.actual[i] <= rep.bound[i])) rep.pass = false;
  }
}

}  // namespace

BoundReport bound_check(const RunRecord& run, ObserverKind kind, double bandwidth, double nu) {
  if (kind != ObserverKind::Eso3) {
    throw std::invalid_argument("the observation-error bound is only established for the n = 3 Luenberger ESO");
  }
  require_truth(run);
  const std::size_t n = run.size();
  const double dt = run.t[1] - run.t[0];
  const double fdot_sup = sup_abs(finite_difference(run.f_true, dt));
  double noise_sup = 0.0;
  for (std::size_t i = 0; i < n; ++i) noise_sup = std::max(noise_sup, std::abs(run.y[i] - run.e[i]));

  BoundReport rep;
  rep.actual = observation_error_norm(run);
  const IssObserverBound b = iss_observer_bound(bandwidth, nu, fdot_sup, noise_sup, rep.actual.front());
  rep.t = run.t;
  rep.bound.resize(n);
  for (std::size_t i = 0; i < n; ++i) rep.bound[i] = b(run.t[i] - run.t.front());
  finish(rep);
  return rep;
}

BoundReport control_bound_check(const RunRecord& run, const ControllerParams& ctrl, double nu, double rho) {
  require_truth(run);
  const std::size_t n = run.size();
  const std::vector<double> edot =
      run.edot.size() == n ? run.edot : finite_difference(run.e, run.t[1] - run.t[0]);
  const std::vector<double> obs = observation_error_norm(run);
  const auto first = static_cast<std::size_t>(
      std::lower_bound(run.t.begin(), run.t.end(), ctrl.t_on) - run.t.begin());
  if (first >= n) throw std::invalid_argument("run ends before the controller is switched on");

  double obs_sup = 0.0;
  for (std::size_t i = first; i < n; ++i) obs_sup = std::max(obs_sup, obs[i]);
  const double eps0 = std::hypot(run.e[first], edot[first]);
  const IssControlBound b = iss_control_bound(ctrl.kp, ctrl.kd, rho, nu, obs_sup, eps0);

  BoundReport rep;
  for (std::size_t i = first; i < n; ++i) {
    rep.t.push_back(run.t[i]);
    rep.actual.push_back(std::hypot(run.e[i], edot[i]));
    rep.bound.push_back(b(run.t[i] - run.t[first]));
  }
  finish(rep);
  return rep;
}

void write_bound_csv(const BoundReport& r, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << "t,actual,bound\n";
  for (std::size_t i = 0; i < r.t.size(); ++i) {
    out << format_double(r.t[i]) << ',' << format_double(r.actual[i]) << ',' << format_double(r.bound[i]) << '\n';
  }
}

TuneResult tune_omega(double target_je, const ScenarioConfig& tmpl, double lo, double hi, const TuneOptions& opt) {
  if (!(target_je > 0.0)) throw std::invalid_argument("target J_e must be positive");
  if (!(lo > 0.0 && hi > lo)) throw std::invalid_argument("tuning bracket must satisfy 0 < lo < hi");

  TuneResult res;
  auto je_at = [&](double w) {
    ScenarioConfig cfg = tmpl;
    cfg.observer.bandwidth = w;
    ++res.evaluations;
    const RunRecord r = run_scenario(cfg);
    return r.diverged ? std::numeric_limits<double>::infinity() : r.criteria.je;
  };
  auto close_enough = [&](double je) { return std::abs(je - target_je) <= opt.rel_tol * target_je; };

  const double w_cap = kMaxBandwidthStep / tmpl.dt;
  hi = std::min(hi, w_cap);
  if (!(hi > lo)) throw std::invalid_argument("tuning bracket lies above the RK4 stability margin");

  double j_lo = je_at(lo);
  if (close_enough(j_lo)) return {lo, j_lo, res.evaluations};
  for (int i = 0; i < opt.max_expansions && j_lo < target_je; ++i) {
    lo *= 0.5;
    j_lo = je_at(lo);
    if (close_enough(j_lo)) return {lo, j_lo, res.evaluations};
  }
  double j_hi = je_at(hi);
  if (close_enough(j_hi)) return {hi, j_hi, res.evaluations};
  for (int i = 0; i < opt.max_expansions && j_hi > target_je && hi < w_cap; ++i) {
    hi = std::min(2.0 * hi, w_cap);
    j_hi = je_at(hi);
    if (close_enough(j_hi)) return {hi, j_hi, res.evaluations};
  }
  if (!(j_lo > target_je && j_hi < target_je)) {
    throw TuningError("target J_e = " + format_double(target_je) + " is not bracketed: J_e ranges over [" +
                          format_double(std::min(j_lo, j_hi)) + ", " + format_double(std::max(j_lo, j_hi)) +
                          "] for omega_o in [" + format_double(lo) + ", " + format_double(hi) + "]",
                      j_lo, j_hi);
  }

  double log_lo = std::log10(lo);
  double log_hi = std::log10(hi);
  for (int it = 0; it < opt.max_iterations; ++it) {
    const double mid = std::pow(10.0, 0.5 * (log_lo + log_hi));
    const double j = je_at(mid);
    if (close_enough(j)) return {mid, j, res.evaluations};
    if (j > target_je) {
      log_lo = std::log10(mid);
    } else {
      log_hi = std::log10(mid);
    }
  }
  throw TuningError("bisection did not reach the J_e tolerance within " + std::to_string(opt.max_iterations) +
                        " iterations",
                    j_lo, j_hi);
}

std::vector<SpectrumBin> error_spectrum(std::span<const double> e, double dt) {
  const std::size_t n = e.size();
  if (n < 16) throw std::invalid_argument("spectrum needs at least 16 samples");
  if (!(dt > 0.0)) throw std::invalid_argument("sample period must be positive");

  double mean = 0.0;
  for (double v : e) mean += v;
  mean /= static_cast<double>(n);

  const std::size_t bins = n / 2 + 1;
  double* in = fftw_alloc_real(n);
  fftw_complex* out = fftw_alloc_complex(bins);
  fftw_plan plan;
  {
    std::lock_guard lock(fftw_planner_mutex());
    plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in, out, FFTW_ESTIMATE);
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double w = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n)));
    in[i] = w * (e[i] - mean);
  }
  fftw_execute(plan);

  std::vector<SpectrumBin> spec(bins);
  const double domega = 2.0 * std::numbers::pi / (static_cast<double>(n) * dt);
  for (std::size_t k = 0; k < bins; ++k) {
    const bool unpaired = k == 0 || (n % 2 == 0 && k == n / 2);
    const double scale = std::sqrt((unpaired ? 1.0 : 2.0) / static_cast<double>(n));
    spec[k] = {static_cast<double>(k) * domega, std::hypot(out[k][0], out[k][1]) * scale};
  }
  {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }
  fftw_free(in);
  fftw_free(out);
  return spec;
}

std::size_t dominant_peak(std::span<const SpectrumBin> spectrum) {
  if (spectrum.size() < 2) throw std::invalid_argument("spectrum has no bins above DC");
  std::size_t best = 1;
  for (std::size_t k = 2; k < spectrum.size(); ++k) {
    if (spectrum[k].magnitude > spectrum[best].magnitude) best = k;
  }
  return best;
}

std::size_t nearest_bin(std::span<const SpectrumBin> spectrum, double omega) {
  if (spectrum.empty()) throw std::invalid_argument("empty spectrum");
  std::size_t best = 0;
  for (std::size_t k = 1; k < spectrum.size(); ++k) {
    if (std::abs(spectrum[k].omega - omega) < std::abs(spectrum[best].omega - omega)) best = k;
  }
  return best;
}

void write_spectrum_csv(std::span<const SpectrumBin> spectrum, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << "omega_rad_s,magnitude\n";
  for (const auto& b : spectrum) out << format_double(b.omega) << ',' << format_double(b.magnitude) << '\n';
}

}  // namespace adrc
