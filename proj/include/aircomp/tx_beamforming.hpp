// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <vector>

#include "aircomp/model.hpp"

namespace aircomp {

/// Per-device outcome of the transmit update.
struct TxSolveReport {
  std::vector<Real> mu;            // Lagrange multiplier of the power constraint
  std::vector<Real> power_used;    // tr(V_k V_k^H)
  std::vector<int> bisection_iters;
  std::vector<bool> degenerate;    // H_k^H W = 0: V_k left unchanged

  /// Complementary-slackness certificate for device k: either the
  /// constraint is inactive (mu ~ 0, power within budget) or it is tight.
  bool kkt_holds(std::size_t k, Real budget) const;
};

struct TxSolution {
  TxBeamformerSet tx;
  TxSolveReport report;
};

inline constexpr Real kBisectionTol = 1e-8;

struct BisectionResult {
  Real mu = 0;
  int iterations = 0;
};

/// Finds mu > 0 with power_fn(mu) = budget for a strictly decreasing
/// power_fn. The bracket starts at [0, 1] and its upper end doubles until
/// power_fn(upper) < budget. Returns mu = 0 when power_fn(0) <= budget.
/// The returned mu always satisfies power_fn(mu) <= budget.
BisectionResult bisect_mu(const std::function<Real(Real)>& power_fn, Real budget,
                          Real tol = kBisectionTol);

/// Optimal V_k for a fixed N_r x L receive combiner W, per device:
///   V_k = (M_k + mu_k I)^{-1} H_k^H W,   M_k = H_k^H W W^H H_k.
/// `current` supplies the value returned for degenerate devices.
TxSolution solve_tx(const SystemConfig& cfg, const ChannelSet& ch, const CMatrix& receiver,
                    const TxBeamformerSet& current);

TxSolution solve_tx(const SystemConfig& cfg, const ChannelSet& ch, const AnalogCombiner& rf,
                    const DigitalCombiner& bb, const TxBeamformerSet& current);

/// The per-device objective ||W^H H_k V_k - I||_F^2.
Real tx_objective(const CMatrix& channel, const CMatrix& receiver, const CMatrix& beamformer);

}  // namespace aircomp
