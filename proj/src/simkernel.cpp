#include "adrc/simkernel.hpp"

#include "adrc/rk4.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <future>
#include <sstream>
#include <thread>

namespace adrc {

namespace {

// trajectory cascade + plant + largest observer
constexpr std::size_t kStateCapacity = FilteredStepGen::kOrder + 2 + 8;

struct Layout {
  std::size_t traj = 0;
  std::size_t plant = 0;
  std::size_t obs = 0;
  std::size_t size = 0;
};

struct Signals {
  TrajectorySample desired;
  double e = 0.0;
  double edot = 0.0;
  Estimates est;
  double qdot_hat = 0.0;
  double tau = 0.0;
};

class CoupledSystem {
 public:
  explicit CoupledSystem(const ScenarioConfig& cfg)
      : cfg_(cfg),
        plant_(build_plant(cfg)),
        observer_(cfg.observer.kind, cfg.observer.bandwidth, cfg.observer.resonant_rate, cfg.observer.am_gains),
        trajectory_(cfg.trajectory) {
    layout_.traj = 0;
    layout_.plant = trajectory_state_size(trajectory_);
    layout_.obs = layout_.plant + 2;
    layout_.size = layout_.obs + observer_.state_size();
  }

  [[nodiscard]] const Layout& layout() const { return layout_; }
  [[nodiscard]] const PlantModel& plant() const { return plant_; }
  [[nodiscard]] const ObserverInstance& observer() const { return observer_; }

  [[nodiscard]] TrajectorySample desired(std::span<const double> x, double t) const {
    if (const auto* step = std::get_if<FilteredStepGen>(&trajectory_)) {
      return step->sample(x.subspan(layout_.traj, FilteredStepGen::kOrder));
    }
    return std::get<SinusoidGen>(trajectory_).sample(t);
  }

  [[nodiscard]] Signals signals(std::span<const double> x, double t) const {
    Signals s;
    s.desired = desired(x, t);
    s.e = s.desired.q - x[layout_.plant];
    s.edot = s.desired.qdot - x[layout_.plant + 1];
    s.est = observer_.estimates(x.subspan(layout_.obs, observer_.state_size()));
    s.qdot_hat = s.desired.qdot - s.est.edot;
    s.tau = control_law(cfg_.controller, cfg_.estimate, x[layout_.plant], s.qdot_hat, s.est, t);
    return s;
  }

  void derivative(double t, std::span<const double> x, std::span<double> dx, double noise) const {
    if (const auto* step = std::get_if<FilteredStepGen>(&trajectory_)) {
      step->derivative(x.subspan(layout_.traj, FilteredStepGen::kOrder), t,
                       dx.subspan(layout_.traj, FilteredStepGen::kOrder));
    }
    const Signals s = signals(x, t);
    const PlantState ps{x[layout_.plant], x[layout_.plant + 1]};
    const PlantDerivative pd = plant_derivative(plant_, ps, s.tau, t);
    dx[layout_.plant] = pd.qdot;
    dx[layout_.plant + 1] = pd.qddot;
    const EsoInput in{s.e + noise, effective_input(cfg_.estimate, s.tau, ps.q, s.qdot_hat)};
    observer_.derivative(x.subspan(layout_.obs, observer_.state_size()), in,
                         dx.subspan(layout_.obs, observer_.state_size()));
  }

 private:
  const ScenarioConfig& cfg_;
  PlantModel plant_;
  ObserverInstance observer_;
  Trajectory trajectory_;
  Layout layout_;
};

double observer_order(ObserverKind kind) { return variant_of(kind) == EsoVariant::Standard3 ? 3 : 5; }

}  // namespace

void ScenarioConfig::validate() const {
  if (!(dt > 0.0)) throw ConfigError("sim.dt", "sim.dt must be positive");
  if (!(t_sim >= dt)) throw ConfigError("sim.t_sim", "sim.t_sim must be at least one step");
  if (!(plant.inertia > 0.0)) throw ConfigError("plant.inertia", "plant.inertia must be positive");
  if (!(estimate.inertia > 0.0)) throw ConfigError("controller.j_hat", "controller.j_hat must be positive");
  if (!(controller.kp > 0.0)) throw ConfigError("controller.kp", "controller.kp must be positive");
  if (!(controller.kd > 0.0)) throw ConfigError("controller.kd", "controller.kd must be positive");
  if (!(controller.t_on >= 0.0)) throw ConfigError("controller.t_on", "controller.t_on must be non-negative");
  if (!(noise.variance >= 0.0)) throw ConfigError("noise.variance", "noise.variance must be non-negative");
  if (!(observer.bandwidth > 0.0)) throw ConfigError("observer.omega_o", "observer.omega_o must be positive");
  if (variant_of(observer.kind) == EsoVariant::Resonant5 && !(observer.resonant_rate > 0.0)) {
    throw ConfigError("observer.omega_r", "observer.omega_r must be positive for resonant observers");
  }
  if (!observer.am_gains.empty() && observer.am_gains.size() + 1 != observer_order(observer.kind)) {
    throw ConfigError("observer.alpha", "observer.alpha needs one gain pair per observer block");
  }
  if (observer.bandwidth * dt > kMaxBandwidthStep) {
    throw ConfigError("observer.omega_o",
                      "stability margin violated: omega_o * dt = " + format_double(observer.bandwidth * dt) +
                          " exceeds " + format_double(kMaxBandwidthStep) + "; reduce sim.dt or observer.omega_o");
  }
  if (const auto* step = std::get_if<FilteredStepGen>(&trajectory); step && !(step->time_constant() > 0.0)) {
    throw ConfigError("trajectory.time_constant", "trajectory.time_constant must be positive");
  }
}

std::size_t ScenarioConfig::steps() const { return static_cast<std::size_t>(std::llround(t_sim / dt)); }

void RunRecord::reserve(std::size_t n) {
  for (auto* v : {&t, &q, &q_d, &e, &y, &e_hat, &edot_hat, &f_hat, &f_true, &tau, &edot}) v->reserve(n);
}

NoiseStream::NoiseStream(std::uint64_t seed, double variance)
    : rng_(seed), dist_(0.0, variance > 0.0 ? std::sqrt(variance) : 1.0), silent_(!(variance > 0.0)) {}

double NoiseStream::next() { return silent_ ? 0.0 : dist_(rng_); }

PlantModel build_plant(const ScenarioConfig& cfg) {
  PlantModel m = preset_double_lag(cfg.plant.inertia, cfg.plant.damping, cfg.plant.stiffness, cfg.disturbance);
  m.modeled = cfg.plant.modeled;
  return m;
}

RunRecord run_scenario(const ScenarioConfig& cfg) {
  cfg.validate();
  const CoupledSystem sys(cfg);
  const Layout& lay = sys.layout();
  const std::size_t n_steps = cfg.steps();

  std::array<double, kStateCapacity> state{};
  const std::span<double> x(state.data(), lay.size);
  const TrajectorySample d0 = sys.desired(x, 0.0);
  x[lay.plant] = cfg.plant.initial_q.value_or(d0.q);
  x[lay.plant + 1] = cfg.plant.initial_qdot.value_or(d0.qdot);
  if (cfg.observer.initialize_from_truth) {
    const ObserverInstance& obs = sys.observer();
    const PlantState ps{x[lay.plant], x[lay.plant + 1]};
    const std::size_t order = observer_order(cfg.observer.kind);
    // Only [e, e', f] are known at t = 0; higher disturbance derivatives start at zero.
    std::vector<double> z(order, 0.0);
    z[0] = d0.q - ps.q;
    z[1] = d0.qdot - ps.qdot;
    const double qdot_hat = d0.qdot - z[1];
    const double f0 = total_disturbance_truth(sys.plant(), cfg.estimate, ps, 0.0, d0.qddot, 0.0, qdot_hat);
    z[2] = f0;
    if (cfg.controller.t_on <= 0.0) {
      // f is affine in tau and tau depends on f; solve the fixed point.
      const double slope =
          total_disturbance_truth(sys.plant(), cfg.estimate, ps, 1.0, d0.qddot, 0.0, qdot_hat) - f0;
      const double j_hat = cfg.estimate.inertia;
      const double bias = cfg.estimate.modeled_at(ps.q, qdot_hat) +
                          j_hat * (cfg.controller.kp * z[0] + cfg.controller.kd * z[1]);
      z[2] = (f0 + slope * bias) / (1.0 - slope * j_hat);
    }
    ObserverInstance seeded = obs;
    seeded.set_extended_state(z);
    std::copy(seeded.state().begin(), seeded.state().end(), x.begin() + static_cast<std::ptrdiff_t>(lay.obs));
  }

  RunRecord rec;
  rec.reserve(n_steps + 1);
  NoiseStream noise(cfg.seed, cfg.noise.kind == NoiseKind::Gaussian ? cfg.noise.variance : 0.0);

  for (std::size_t k = 0; k <= n_steps; ++k) {
    const double t = static_cast<double>(k) * cfg.dt;
    const double w = noise.next();

    bool finite = true;
    for (double v : x) finite = finite && std::isfinite(v) && std::abs(v) <= kDivergenceLimit;
    if (!finite) {
      rec.diverged = true;
      break;
    }

    const Signals s = sys.signals(x, t);
    const PlantState ps{x[lay.plant], x[lay.plant + 1]};
    rec.t.push_back(t);
    rec.q.push_back(ps.q);
    rec.q_d.push_back(s.desired.q);
    rec.e.push_back(s.e);
    rec.y.push_back(s.e + w);
    rec.e_hat.push_back(s.est.e);
    rec.edot_hat.push_back(s.est.edot);
    rec.f_hat.push_back(s.est.f);
    rec.f_true.push_back(total_disturbance_truth(sys.plant(), cfg.estimate, ps, s.tau, s.desired.qddot, t,
                                                 s.qdot_hat));
    rec.tau.push_back(s.tau);
    rec.edot.push_back(s.edot);

    if (k == n_steps) break;
    rk4_step<kStateCapacity>(
        [&sys, w](double tt, std::span<const double> xs, std::span<double> dxs) { sys.derivative(tt, xs, dxs, w); },
        t, cfg.dt, x);
  }

  if (rec.diverged) {
    const double nan = std::nan("");
    rec.criteria = {nan, nan, nan};
  } else {
    rec.criteria = criteria(rec, cfg.criteria_scale);
  }
  return rec;
}

std::vector<RunRecord> run_batch(std::span<const ScenarioConfig> cfgs, unsigned threads) {
  std::vector<RunRecord> out(cfgs.size());
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(cfgs.size(), 1)));
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < cfgs.size(); i = next++) out[i] = run_scenario(cfgs[i]);
  };
  std::vector<std::future<void>> jobs;
  for (unsigned i = 0; i < threads; ++i) jobs.push_back(std::async(std::launch::async, worker));
  for (auto& j : jobs) j.get();
  return out;
}

Criteria criteria(std::span<const double> t, std::span<const double> e, std::span<const double> tau,
                  std::span<const double> f_true, std::span<const double> f_hat, CriteriaScale scale) {
  const std::size_t n = t.size();
  if (n == 0) throw std::invalid_argument("criteria: empty series");
  if (e.size() != n || tau.size() != n || f_true.size() != n || f_hat.size() != n) {
    throw std::invalid_argument("criteria: series lengths differ");
  }
  Criteria c;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double h = 0.5 * (t[i + 1] - t[i]);
    c.je += h * (std::abs(e[i]) + std::abs(e[i + 1]));
    c.ju += h * (tau[i] * tau[i] + tau[i + 1] * tau[i + 1]);
    c.jf += h * (std::abs(f_true[i] - f_hat[i]) + std::abs(f_true[i + 1] - f_hat[i + 1]));
  }
  if (scale == CriteriaScale::TimeAverage) {
    const double span = t.back() - t.front();
    if (!(span > 0.0)) throw std::invalid_argument("criteria: time-averaged criteria need a positive span");
    c.je /= span;
    c.ju /= span;
    c.jf /= span;
  }
  return c;
}

Criteria criteria(const RunRecord& r, CriteriaScale scale) {
  return criteria(r.t, r.e, r.tau, r.f_true, r.f_hat, scale);
}

std::vector<double> finite_difference(std::span<const double> v, double dt) {
  const std::size_t n = v.size();
  std::vector<double> d(n, 0.0);
  if (n < 3) {
    if (n == 2) d[0] = d[1] = (v[1] - v[0]) / dt;
    return d;
  }
  d[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * dt);
  d[n - 1] = (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * dt);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (i >= 2 && i + 2 < n) {
      d[i] = (-v[i + 2] + 8.0 * v[i + 1] - 8.0 * v[i - 1] + v[i - 2]) / (12.0 * dt);
    } else {
      d[i] = (v[i + 1] - v[i - 1]) / (2.0 * dt);
    }
  }
  return d;
}

std::string format_double(double v) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return {buf.data(), res.ptr};
}

void write_run_csv(const RunRecord& r, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << kRunCsvHeader << '\n';
  std::string line;
  for (std::size_t i = 0; i < r.size(); ++i) {
    line.clear();
    for (const auto* col : {&r.t, &r.q, &r.q_d, &r.e, &r.y, &r.e_hat, &r.edot_hat, &r.f_hat, &r.f_true, &r.tau}) {
      if (!line.empty()) line += ',';
      line += format_double((*col)[i]);
    }
    out << line << '\n';
  }
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

RunRecord read_run_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(path.string() + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kRunCsvHeader) {
    throw std::runtime_error(path.string() + ": unexpected header '" + line + "'");
  }
  RunRecord r;
  auto cols = std::array{&r.t, &r.q, &r.q_d, &r.e, &r.y, &r.e_hat, &r.edot_hat, &r.f_hat, &r.f_true, &r.tau};
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const char* p = line.data();
    const char* end = line.data() + line.size();
    for (std::size_t c = 0; c < cols.size(); ++c) {
      double v = 0.0;
      const auto res = std::from_chars(p, end, v);
      if (res.ec != std::errc{}) {
        throw std::runtime_error(path.string() + ": bad number in row " + std::to_string(row));
      }
      cols[c]->push_back(v);
      p = res.ptr;
      if (c + 1 < cols.size()) {
        if (p == end || *p != ',') {
          throw std::runtime_error(path.string() + ": too few columns in row " + std::to_string(row));
        }
        ++p;
      }
    }
    if (p != end) throw std::runtime_error(path.string() + ": too many columns in row " + std::to_string(row));
  }
  if (r.size() >= 2) r.edot = finite_difference(r.e, r.t[1] - r.t[0]);
  if (!r.t.empty()) r.criteria = criteria(r);
  return r;
}

void write_summary(const RunRecord& r, const ScenarioConfig& cfg, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << "observer=" << observer_tag(cfg.observer.kind) << '\n'
      << "omega_o=" << format_double(cfg.observer.bandwidth) << '\n'
      << "seed=" << cfg.seed << '\n'
      << "criteria_scale=" << (cfg.criteria_scale == CriteriaScale::Integral ? "integral" : "time_average") << '\n'
      << "diverged=" << (r.diverged ? "true" : "false") << '\n'
      << "J_e=" << format_double(r.criteria.je) << '\n'
      << "J_u=" << format_double(r.criteria.ju) << '\n'
      << "J_f=" << format_double(r.criteria.jf) << '\n';
}

}  // namespace adrc
