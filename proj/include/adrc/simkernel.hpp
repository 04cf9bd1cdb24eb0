#pragma once

#include "adrc/control.hpp"
#include "adrc/observers.hpp"
#include "adrc/plant.hpp"
#include "adrc/trajectory.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace adrc {

// Invalid scenario description. key() names the offending setting in
// "section.key" form.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string key, const std::string& what) : std::invalid_argument(what), key_(std::move(key)) {}
  [[nodiscard]] const std::string& key() const { return key_; }

 private:
  std::string key_;
};

// Maximum accepted omega_o * dt. Observer poles sit near -omega_o and the
// real-axis stability limit of classical RK4 is about 2.785.
inline constexpr double kMaxBandwidthStep = 2.0;
inline constexpr double kDivergenceLimit = 1e12;

struct PlantConfig {
  double inertia = 1.0;
  double damping = 2.0;
  double stiffness = 1.0;
  std::function<double(double q, double qdot)> modeled;  // h_m hook, zero when empty
  std::optional<double> initial_q;                       // default q_d(0)
  std::optional<double> initial_qdot;                    // default q_d'(0)
};

struct ObserverConfig {
  ObserverKind kind = ObserverKind::Eso3;
  double bandwidth = 100.0;
  double resonant_rate = 15.0;
  std::vector<AmBlockGain> am_gains;  // empty: defaults for the order
  // Start from the true extended state instead of zeros.
  bool initialize_from_truth = false;
};

enum class NoiseKind { None, Gaussian };

struct NoiseConfig {
  NoiseKind kind = NoiseKind::None;
  double variance = 0.0;
};

// Time-integral criteria over [0, T_sim]. Integral reports the raw
// integrals (the scale the reference tables are quoted in); TimeAverage
// divides them by T_sim.
enum class CriteriaScale { Integral, TimeAverage };

struct ScenarioConfig {
  PlantConfig plant;
  Trajectory trajectory = FilteredStepGen(7.5, 1.0, 0.5);
  ObserverConfig observer;
  ModelEstimate estimate;
  ControllerParams controller;
  NoiseConfig noise;
  DisturbanceSchedule disturbance{2.5, 15.0, 0.0, 5.0};
  double t_sim = 20.0;
  double dt = 1e-3;
  std::uint64_t seed = 1;
  CriteriaScale criteria_scale = CriteriaScale::Integral;

  void validate() const;
  [[nodiscard]] std::size_t steps() const;
};

struct Criteria {
  double je = 0.0;
  double ju = 0.0;
  double jf = 0.0;
};

struct RunRecord {
  std::vector<double> t, q, q_d, e, y, e_hat, edot_hat, f_hat, f_true, tau;
  std::vector<double> edot;  // true error rate, kept in memory only
  Criteria criteria;
  bool diverged = false;

  [[nodiscard]] std::size_t size() const { return t.size(); }
  void reserve(std::size_t n);
};

// Per-step zero-mean Gaussian samples of the given variance from a seeded
// 64-bit Mersenne Twister. Zero variance yields exact zeros.
class NoiseStream {
 public:
  NoiseStream(std::uint64_t seed, double variance);
  double next();

 private:
  std::mt19937_64 rng_;
  std::normal_distribution<double> dist_;
  bool silent_;
};

PlantModel build_plant(const ScenarioConfig& cfg);

RunRecord run_scenario(const ScenarioConfig& cfg);

// Runs independent scenarios concurrently; results keep the input order.
std::vector<RunRecord> run_batch(std::span<const ScenarioConfig> cfgs, unsigned threads = 0);

// Trapezoidal quadrature of |e|, tau^2 and |f - f_hat| over the record.
Criteria criteria(std::span<const double> t, std::span<const double> e, std::span<const double> tau,
                  std::span<const double> f_true, std::span<const double> f_hat,
                  CriteriaScale scale = CriteriaScale::Integral);
Criteria criteria(const RunRecord& r, CriteriaScale scale = CriteriaScale::Integral);

// Derivative of a uniformly sampled signal: five-point central stencil in
// the interior, lower-order stencils near the ends.
std::vector<double> finite_difference(std::span<const double> v, double dt);

inline constexpr const char* kRunCsvHeader = "t,q,q_d,e,y,e_hat,edot_hat,f_hat,f_true,tau";

void write_run_csv(const RunRecord& r, const std::filesystem::path& path);
RunRecord read_run_csv(const std::filesystem::path& path);
void write_summary(const RunRecord& r, const ScenarioConfig& cfg, const std::filesystem::path& path);

// Shortest round-trip decimal text, independent of the global locale.
std::string format_double(double v);

}  // namespace adrc
