#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>

namespace adrc {

enum ExitCode : int {
  kExitOk = 0,
  kExitDiverged = 1,
  kExitConfig = 2,
  kExitTuning = 3,
  kExitCheckFailed = 4,
};

struct Streams {
  std::ostream& out;
  std::ostream& err;
};

// Writes run.csv and summary.txt into out_dir.
int cmd_run(const std::filesystem::path& config, const std::filesystem::path& out_dir,
            std::optional<std::uint64_t> seed, Streams io);

// All six observers at their reference bandwidths. Writes table.csv
// (observer,omega_o,J_e,J_u,J_f) and one run_<tag>.csv per observer. Noisy
// runs use seed, seed + 1, ... in observer order.
int cmd_compare(int scenario, const std::filesystem::path& out_dir, std::uint64_t seed, unsigned threads,
                Streams io);

int cmd_tune(const std::filesystem::path& config, double target_je, double lo, double hi, Streams io);

// Periodogram of e over samples with t >= from.
int cmd_spectrum(const std::filesystem::path& run_csv, const std::filesystem::path& out_file, double from,
                 Streams io);

// Observation-error bound on a logged run; out_file receives t,actual,bound
// when given. Exit 4 if the bound is violated anywhere.
int cmd_bound_check(const std::filesystem::path& run_csv, const std::filesystem::path& config, double nu,
                    const std::optional<std::filesystem::path>& out_file, Streams io);

}  // namespace adrc
