// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "aircomp/model.hpp"
#include "aircomp/trace.hpp"

namespace aircomp {

/// Quadratic form of the MSE in the analog combiner with V_k and U_bb fixed:
///   MSE(U) = K L + phi(U),  phi(U) = tr(U^H A U C) - 2 Re tr(U^H B)
/// with A = sum_k H_k V_k V_k^H H_k^H + sigma^2 I, B = sum_k H_k V_k U_bb^H,
/// C = U_bb U_bb^H.
struct AnalogProblem {
  CMatrix a;  // N_r x N_r, Hermitian positive definite
  CMatrix b;  // N_r x N_rf
  CMatrix c;  // N_rf x N_rf, Hermitian positive semidefinite
  Index streams = 0;
};

AnalogProblem analog_problem(const ReceiveStats& stats, const DigitalCombiner& bb);

/// phi(U) given the product A U C.
Real analog_phi(const AnalogProblem& p, const CMatrix& u, const CMatrix& auc);
Real analog_phi(const AnalogProblem& p, const CMatrix& u);

/// Result of an analog-combiner solve. The trace records MSE values.
struct AnalogSolution {
  AnalogCombiner rf;
  SolveTrace trace;
};

}  // namespace aircomp
