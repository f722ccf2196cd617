// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "aircomp/driver.hpp"

namespace aircomp {

enum class SweepVariable { kNr, kNrf, kK, kL, kSnrDb };
enum class Scheme { kLagrangeSca, kLagrangeBcd, kFd, kFdZf };

std::string_view to_string(SweepVariable v);
std::string_view to_string(Scheme s);
SweepVariable parse_sweep_variable(std::string_view text);
Scheme parse_scheme(std::string_view text);

struct ExperimentSpec {
  std::string name = "custom";
  SweepVariable sweep_variable = SweepVariable::kNr;
  std::vector<Real> sweep_values;
  // Fixed parameters. `power` is ignored; P is derived from snr_db, sigma^2
  // and beta so that the stored config never disagrees with the SNR.
  SystemConfig fixed;
  Real snr_db = 10;
  bool nt_equals_l = true;  // N_t follows L, as in every preset
  std::vector<Scheme> schemes;
  int trials = 500;
  std::uint64_t base_seed = 1;
  DriverConfig driver;
  bool fixed_tx = false;       // FD only: keep V_k = sqrt(P/L)[I; 0], no transmit updates
  bool record_timing = false;  // off keeps CSVs byte-identical across runs

  void validate() const;

  /// Scenario at one sweep point.
  SystemConfig config_at(Real sweep_value) const;
};

struct ExperimentRow {
  Scheme scheme = Scheme::kFd;
  Real sweep_value = 0;
  Real mean_mse = 0;
  Real std_error = 0;
  Real mean_outer_iters = 0;
  Real mean_wall_time = 0;
  int trials = 0;    // trials that entered the mean
  int excluded = 0;  // aborted or failed trials
  // Final MSE of every trial in index order (NaN when excluded); lets
  // callers form paired statistics across schemes.
  std::vector<Real> samples;
};

struct ExperimentResult {
  SweepVariable sweep_variable = SweepVariable::kNr;
  std::uint64_t base_seed = 0;
  int trials = 0;  // seed range is trial_seeds(base_seed, s, 0 .. trials-1)
  std::vector<ExperimentRow> rows;  // ordered by scheme, then sweep value

  const ExperimentRow& row(Scheme scheme, Real sweep_value) const;
};

/// Runs every (sweep value, trial) cell on a bounded worker pool. Channels
/// and the initial state are drawn once per cell and shared by all schemes.
ExperimentResult run_experiment(const ExperimentSpec& spec, int threads = 1);

/// Parses the key = value config format. Unknown keys are errors.
ExperimentSpec parse_spec(std::string_view text);
ExperimentSpec load_spec(const std::filesystem::path& path);
std::string format_spec(const ExperimentSpec& spec);

/// Preset scenarios "fig2" ... "fig9".
ExperimentSpec figure_preset(std::string_view name);
std::vector<std::string> figure_names();

/// Thread count from the flag, else AIRCOMP_THREADS, else 1.
int resolve_threads(int flag);

}  // namespace aircomp
