#include "adrc/commands.hpp"

#include "adrc/analysis.hpp"
#include "adrc/config.hpp"

#include <algorithm>
#include <fstream>
#include <vector>

namespace adrc {

namespace fs = std::filesystem;

namespace {

void ensure_dir(const fs::path& dir) {
  if (!dir.empty()) fs::create_directories(dir);
}

int report_config_error(const ConfigError& ex, Streams io) {
  io.err << "config error [" << ex.key() << "]: " << ex.what() << '\n';
  return kExitConfig;
}

}  // namespace

int cmd_run(const fs::path& config, const fs::path& out_dir, std::optional<std::uint64_t> seed, Streams io) {
  ScenarioConfig cfg;
  try {
    cfg = load_config(config);
    if (seed) cfg.seed = *seed;
  } catch (const ConfigError& ex) {
    return report_config_error(ex, io);
  }
  const RunRecord r = run_scenario(cfg);
  ensure_dir(out_dir);
  write_run_csv(r, out_dir / "run.csv");
  write_summary(r, cfg, out_dir / "summary.txt");
  if (r.diverged) {
    io.err << "run diverged at t = " << format_double(r.t.back()) << " s\n";
    return kExitDiverged;
  }
  io.out << observer_tag(cfg.observer.kind) << " omega_o=" << format_double(cfg.observer.bandwidth)
         << " J_e=" << format_double(r.criteria.je) << " J_u=" << format_double(r.criteria.ju)
         << " J_f=" << format_double(r.criteria.jf) << '\n';
  return kExitOk;
}

int cmd_compare(int scenario, const fs::path& out_dir, std::uint64_t seed, unsigned threads, Streams io) {
  std::vector<ScenarioConfig> cfgs;
  try {
    for (std::size_t i = 0; i < kAllObserverKinds.size(); ++i) {
      ScenarioConfig cfg = preset_config(scenario, kAllObserverKinds[i]);
      cfg.seed = seed + i;
      cfgs.push_back(std::move(cfg));
    }
  } catch (const ConfigError& ex) {
    return report_config_error(ex, io);
  }
  const std::vector<RunRecord> runs = run_batch(cfgs, threads);

  ensure_dir(out_dir);
  std::ofstream table(out_dir / "table.csv");
  if (!table) {
    io.err << "cannot write " << (out_dir / "table.csv").string() << '\n';
    return kExitConfig;
  }
  table << "observer,omega_o,J_e,J_u,J_f\n";
  bool diverged = false;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const auto& c = runs[i].criteria;
    const std::string row = std::string(observer_label(cfgs[i].observer.kind)) + ',' +
                            format_double(cfgs[i].observer.bandwidth) + ',' + format_double(c.je) + ',' +
                            format_double(c.ju) + ',' + format_double(c.jf);
    table << row << '\n';
    io.out << row << '\n';
    write_run_csv(runs[i], out_dir / ("run_" + std::string(observer_tag(cfgs[i].observer.kind)) + ".csv"));
    diverged = diverged || runs[i].diverged;
  }
  return diverged ? kExitDiverged : kExitOk;
}

int cmd_tune(const fs::path& config, double target_je, double lo, double hi, Streams io) {
  ScenarioConfig cfg;
  try {
    cfg = load_config(config);
  } catch (const ConfigError& ex) {
    return report_config_error(ex, io);
  }
  try {
    const TuneResult r = tune_omega(target_je, cfg, lo, hi);
    io.out << "omega_o=" << format_double(r.bandwidth) << " J_e=" << format_double(r.je)
           << " runs=" << r.evaluations << '\n';
    return kExitOk;
  } catch (const TuningError& ex) {
    io.err << "tuning failed: " << ex.what() << '\n';
    return kExitTuning;
  } catch (const std::invalid_argument& ex) {
    io.err << "tuning error: " << ex.what() << '\n';
    return kExitConfig;
  }
}

int cmd_spectrum(const fs::path& run_csv, const fs::path& out_file, double from, Streams io) {
  try {
    const RunRecord r = read_run_csv(run_csv);
    if (r.size() < 2) throw std::invalid_argument("run log has fewer than two samples");
    const auto first = static_cast<std::size_t>(std::lower_bound(r.t.begin(), r.t.end(), from) - r.t.begin());
    const std::span<const double> window(r.e.data() + first, r.e.size() - first);
    const auto spec = error_spectrum(window, r.t[1] - r.t[0]);
    if (out_file.has_parent_path()) ensure_dir(out_file.parent_path());
    write_spectrum_csv(spec, out_file);
    const auto k = dominant_peak(spec);
    io.out << "peak omega=" << format_double(spec[k].omega) << " rad/s magnitude=" << format_double(spec[k].magnitude)
           << " resolution=" << format_double(spec[1].omega) << " rad/s\n";
    return kExitOk;
  } catch (const std::exception& ex) {
    io.err << "spectrum error: " << ex.what() << '\n';
    return kExitConfig;
  }
}

int cmd_bound_check(const fs::path& run_csv, const fs::path& config, double nu,
                    const std::optional<fs::path>& out_file, Streams io) {
  if (!(nu > 0.0 && nu < 1.0)) {
    io.err << "config error [nu]: nu must lie in (0, 1), got " << format_double(nu) << '\n';
    return kExitConfig;
  }
  ScenarioConfig cfg;
  try {
    cfg = load_config(config);
  } catch (const ConfigError& ex) {
    return report_config_error(ex, io);
  }
  if (cfg.observer.kind != ObserverKind::Eso3) {
    io.err << "config error [observer.variant]: the bound covers eso3 only\n";
    return kExitConfig;
  }
  BoundReport rep;
  try {
    const RunRecord r = read_run_csv(run_csv);
    rep = bound_check(r, cfg.observer.kind, cfg.observer.bandwidth, nu);
  } catch (const std::exception& ex) {
    io.err << "bound check error: " << ex.what() << '\n';
    return kExitConfig;
  }
  if (out_file) {
    if (out_file->has_parent_path()) ensure_dir(out_file->parent_path());
    write_bound_csv(rep, *out_file);
  }
  io.out << (rep.pass ? "PASS" : "FAIL") << " min_margin=" << format_double(rep.min_margin) << '\n';
  return rep.pass ? kExitOk : kExitCheckFailed;
}

}  // namespace adrc
