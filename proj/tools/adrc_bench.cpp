#include "adrc/commands.hpp"

#include "CLI11.hpp"

#include <iostream>
#include <string>

int main(int argc, char** argv) {
  CLI::App app{"ADRC extended-state observer benchmark"};
  app.require_subcommand(1);
  adrc::Streams io{std::cout, std::cerr};
  int status = adrc::kExitOk;

  std::string config;
  std::string out = ".";
  std::uint64_t seed = 1;

  auto* run = app.add_subcommand("run", "simulate one scenario");
  run->add_option("config", config, "scenario config file")->required();
  run->add_option("--out", out, "output directory");
  auto* run_seed = run->add_option("--seed", seed, "noise seed (overrides sim.seed)");
  run->callback([&] {
    status = adrc::cmd_run(config, out, run_seed->count() ? std::optional(seed) : std::nullopt, io);
  });

  int scenario = 1;
  unsigned threads = 0;
  auto* compare = app.add_subcommand("compare", "all six observers at reference bandwidths");
  compare->add_option("scenario", scenario, "1 (noise-free) or 2 (noisy)")->required();
  compare->add_option("--out", out, "output directory");
  compare->add_option("--seed", seed, "base noise seed");
  compare->add_option("--threads", threads, "worker threads, 0 = hardware");
  compare->callback([&] { status = adrc::cmd_compare(scenario, out, seed, threads, io); });

  double target = 0.01;
  std::vector<double> bracket{10.0, 1000.0};
  auto* tune = app.add_subcommand("tune", "find omega_o giving a target J_e");
  tune->add_option("config", config, "scenario config file")->required();
  tune->add_option("--target-je", target, "target J_e")->required();
  tune->add_option("--bracket", bracket, "initial omega_o bracket lo hi")->expected(2);
  tune->callback([&] { status = adrc::cmd_tune(config, target, bracket[0], bracket[1], io); });

  std::string run_csv;
  std::string out_file = "spectrum.csv";
  double from = 5.0;
  auto* spectrum = app.add_subcommand("spectrum", "error magnitude spectrum of a logged run");
  spectrum->add_option("run_csv", run_csv, "run.csv from a previous run")->required();
  spectrum->add_option("--out", out_file, "output CSV");
  spectrum->add_option("--from", from, "discard samples before this time [s]");
  spectrum->callback([&] { status = adrc::cmd_spectrum(run_csv, out_file, from, io); });

  double nu = 0.5;
  std::string bound_out;
  auto* bound = app.add_subcommand("bound-check", "check the observation-error ISS bound on a logged run");
  bound->add_option("run_csv", run_csv, "run.csv from a previous run")->required();
  bound->add_option("config", config, "config the run was produced with")->required();
  bound->add_option("--nu", nu, "majorization constant in (0, 1)");
  bound->add_option("--out", bound_out, "output CSV with t,actual,bound");
  bound->callback([&] {
    status = adrc::cmd_bound_check(run_csv, config, nu,
                                   bound_out.empty() ? std::nullopt : std::optional<std::filesystem::path>(bound_out),
                                   io);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : adrc::kExitConfig;
  }
  return status;
}
