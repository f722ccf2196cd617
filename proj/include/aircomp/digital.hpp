// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "aircomp/model.hpp"

namespace aircomp {

/// Sum-MMSE digital combiner for a fixed analog stage:
///   U_bb = (U_rf^H A U_rf)^{-1} U_rf^H sum_k H_k V_k.
/// Throws NumericalError when U_rf^H A U_rf is not positive definite.
DigitalCombiner solve_digital(const SystemConfig& cfg, const ChannelSet& ch,
                              const TxBeamformerSet& tx, const AnalogCombiner& rf);

/// Same update for an arbitrary analog matrix (e.g. identity), from stats.
CMatrix solve_digital(const ReceiveStats& stats, const CMatrix& analog);

/// Fully-digital sum-MMSE receiver A^{-1} sum_k H_k V_k (N_r x L).
CMatrix solve_fully_digital_mmse(const SystemConfig& cfg, const ChannelSet& ch,
                                 const TxBeamformerSet& tx);

CMatrix solve_fully_digital_mmse(const ReceiveStats& stats);

}  // namespace aircomp
