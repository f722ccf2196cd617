// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "aircomp/analog_problem.hpp"

namespace aircomp {

struct ScaConfig {
  Real tau = 0.2;      // proximal weight
  Real eps = 1e-3;     // stop when one step decreases the MSE by less than this
  int max_iters = 500;
  // When a step raises the objective the surrogate did not majorize it; the
  // step is then retried with tau doubled. Off = plain fixed-tau iteration.
  bool backtrack = true;

  void validate() const;
};

/// Gradient of the MSE with respect to the column-major phase vector:
///   gamma = -vec(2 Re[j conj(U_rf) o F]),
///   F = A U_rf U_bb U_bb^H - sum_k H_k V_k U_bb^H.
RVector sca_gradient(const SystemConfig& cfg, const ChannelSet& ch, const TxBeamformerSet& tx,
                     const AnalogCombiner& rf, const DigitalCombiner& bb);

RVector sca_gradient(const AnalogProblem& p, const CMatrix& u, const CMatrix& auc);

/// Minimizer of the proximal linearization, wrapped to (-pi, pi]:
///   theta+ = wrap(theta - gamma / (2 tau)).
RVector sca_step(const RVector& theta, const RVector& gamma, Real tau);

/// Value of the surrogate f(theta_r) + gamma^T (theta - theta_r) + tau ||theta - theta_r||^2.
Real sca_surrogate(Real f_at_expansion, const RVector& gamma, const RVector& theta,
                   const RVector& expansion, Real tau);

struct ScaSolution : AnalogSolution {
  Real final_tau = 0;
  int rejected_steps = 0;
};

ScaSolution solve_analog_sca(const SystemConfig& cfg, const ChannelSet& ch,
                             const TxBeamformerSet& tx, const AnalogCombiner& rf_init,
                             const DigitalCombiner& bb, const ScaConfig& sca = {});

ScaSolution solve_analog_sca(const AnalogProblem& problem, const AnalogCombiner& rf_init,
                             const ScaConfig& sca = {});

}  // namespace aircomp
