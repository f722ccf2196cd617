// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string_view>
#include <vector>

#include "aircomp/analog_bcd.hpp"
#include "aircomp/analog_sca.hpp"
#include "aircomp/model.hpp"
#include "aircomp/trace.hpp"
#include "aircomp/tx_beamforming.hpp"

namespace aircomp {

enum class AnalogSolver { kSca, kBcd };

std::string_view to_string(AnalogSolver s);

struct DriverConfig {
  AnalogSolver analog_solver = AnalogSolver::kSca;
  Real outer_eps = 1e-3;
  int outer_max_iters = 100;
  ScaConfig sca;
  BcdConfig bcd;
  int zf_receive_steps = 50;  // gradient steps per FD-ZF receive update

  void validate() const;
};

/// Alternating transmit -> analog -> digital optimization. The trace holds
/// the MSE after the bootstrap digital update and after every block update;
/// outer_mse holds one value per completed outer iteration.
struct HybridResult {
  BeamformingState state;
  SolveTrace trace;
  std::vector<Real> outer_mse;
  std::vector<TxSolveReport> tx_reports;
  int analog_iterations = 0;  // SCA iterations or BCD sweeps, summed
};

HybridResult solve_hybrid(const SystemConfig& cfg, const ChannelSet& ch,
                          const BeamformingState& init, const DriverConfig& dcfg);

struct FullyDigitalState {
  TxBeamformerSet tx;
  CMatrix receiver;  // N_r x L
};

struct FullyDigitalResult {
  FullyDigitalState state;
  SolveTrace trace;
  std::vector<Real> outer_mse;
  std::vector<TxSolveReport> tx_reports;
};

/// Fully-digital baseline: alternates the Lagrange transmit update with the
/// sum-MMSE receiver. Needs only N_t, N_r, K, L; N_rf is ignored.
FullyDigitalResult solve_fd(const SystemConfig& cfg, const ChannelSet& ch,
                            const TxBeamformerSet& init_tx, const DriverConfig& dcfg);

/// Zero-forcing transmit with a receiver whose columns stay orthonormal.
/// The MSE trace is recorded but is not monotone in general.
FullyDigitalResult solve_fd_zf(const SystemConfig& cfg, const ChannelSet& ch,
                               const TxBeamformerSet& init_tx, const DriverConfig& dcfg);

/// V_k = (U^H H_k)^+, scaled down to the power budget when needed, so that
/// U^H H_k V_k = c_k I with c_k <= 1. Rank-deficient U^H H_k keeps `current`
/// and sets the degenerate flag.
TxSolution zf_transmit(const SystemConfig& cfg, const ChannelSet& ch, const CMatrix& receiver,
                       const TxBeamformerSet& current);

/// Closest matrix with orthonormal columns (polar factor of the thin SVD).
CMatrix orthonormal_projection(const CMatrix& x);

/// Projected steepest descent on the MSE over N_r x L matrices with
/// orthonormal columns, transmit side fixed. Fixed step 1/lambda_max(A),
/// halved whenever a step would increase the MSE.
CMatrix orthonormal_receive_descent(const ReceiveStats& stats, const CMatrix& start,
                                    int steps);

}  // namespace aircomp
