// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "aircomp/analog_problem.hpp"

namespace aircomp {

struct BcdConfig {
  Real eps = 1e-3;  // stop when one sweep decreases the MSE by less than this
  int max_sweeps = 200;

  void validate() const;
};

/// A, B, C of the analog quadratic plus the running product Q = A U_rf C,
/// maintained by rank-one updates as entries change.
struct BcdWorkspace {
  AnalogProblem problem;
  CMatrix q;
};

inline constexpr Real kQDriftTol = 1e-8;
inline constexpr Real kDegenerateB = 1e-14;

BcdWorkspace bcd_build_workspace(const SystemConfig& cfg, const ChannelSet& ch,
                                 const TxBeamformerSet& tx, const AnalogCombiner& rf,
                                 const DigitalCombiner& bb);

BcdWorkspace bcd_build_workspace(AnalogProblem problem, const AnalogCombiner& rf);

/// b = A(i,i) U(i,j) C(j,j) - Q(i,j) + B(i,j). With |U(i,j)| = 1, phi as a
/// function of that entry alone is const - 2 Re{conj(b) U(i,j)}.
Complex bcd_entry_b(const BcdWorkspace& ws, const AnalogCombiner& rf, Index i, Index j);

/// Sets U(i,j) to b/|b| and updates Q. Leaves the entry alone when
/// |b| < 1e-14 (every unit-modulus value is then optimal). Returns whether
/// the entry was written.
bool bcd_entry_update(BcdWorkspace& ws, AnalogCombiner& rf, Index i, Index j);

/// Relative drift ||Q - A U C|| / ||Q||.
Real bcd_q_drift(const BcdWorkspace& ws, const AnalogCombiner& rf);

struct BcdSolution : AnalogSolution {
  int q_refreshes = 0;
};

/// Cyclic sweeps over all entries (j outer, i inner) until a sweep lowers
/// the objective by less than eps.
BcdSolution solve_analog_bcd(const SystemConfig& cfg, const ChannelSet& ch,
                             const TxBeamformerSet& tx, const AnalogCombiner& rf_init,
                             const DigitalCombiner& bb, const BcdConfig& bcd = {});

BcdSolution solve_analog_bcd(const AnalogProblem& problem, const AnalogCombiner& rf_init,
                             const BcdConfig& bcd = {});

}  // namespace aircomp
