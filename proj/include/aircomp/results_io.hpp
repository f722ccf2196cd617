// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "aircomp/experiment.hpp"

namespace aircomp {

inline constexpr const char* kResultsHeader =
    "scheme,sweep_var,sweep_value,mean_mse,std_error,mean_outer_iters,mean_wall_time_s,trials,"
    "excluded";

/// printf "%.17g": enough digits to read back the identical double.
std::string format_real(Real value);

void write_results_csv(const ExperimentResult& res, std::ostream& out);

/// Writes `path` and the companion manifest (`path` with a .manifest
/// extension) holding the spec and the tool version.
void write_results(const ExperimentResult& res, const ExperimentSpec& spec,
                   const std::filesystem::path& path);

std::filesystem::path manifest_path(const std::filesystem::path& csv_path);

struct CsvRow {
  std::string scheme;
  std::string sweep_var;
  Real sweep_value = 0;
  Real mean_mse = 0;
  Real std_error = 0;
  Real mean_outer_iters = 0;
  Real mean_wall_time = 0;
  int trials = 0;
  int excluded = 0;
};

std::vector<CsvRow> read_results_csv(const std::filesystem::path& path);

std::string tool_version();

}  // namespace aircomp
