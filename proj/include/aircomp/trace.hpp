// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string_view>
#include <vector>

#include "aircomp/types.hpp"

namespace aircomp {

enum class Termination { kConverged, kMaxIters, kAbortedNonfinite };

std::string_view to_string(Termination t);

/// Objective history of an iterative solve. Entry 0 is the starting value;
/// every later entry is the objective after one accepted update.
struct SolveTrace {
  std::vector<Real> mse_history;
  Termination termination = Termination::kMaxIters;
  int iterations = 0;
  double wall_time = 0;  // seconds

  /// Largest single-step increase in mse_history (<= 0 for a monotone trace).
  Real max_increase() const;
  Real final_value() const { return mse_history.empty() ? Real(0) : mse_history.back(); }
};

}  // namespace aircomp
