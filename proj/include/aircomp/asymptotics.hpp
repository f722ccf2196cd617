// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "aircomp/model.hpp"

namespace aircomp {

/// Large-array MSE prediction K L^2 sigma^2 / (beta N_r P).
Real mse_asymptotic(const SystemConfig& cfg);

/// Pre-limit value K L^2 sigma^2 / (L sigma^2 + beta N_r P); exact for
/// mutually orthogonal channels with H_k^H H_k = beta N_r I and
/// V_k^H V_k = (P/L) I.
Real mse_exact_orthogonal(const SystemConfig& cfg);

/// Simplified sum-MMSE receiver sum_k H_k V_k (sigma^2 I + beta N_r V_k^H V_k)^{-1}.
CMatrix mmse_simplified(const SystemConfig& cfg, const ChannelSet& ch,
                        const TxBeamformerSet& tx);

enum class ChannelModel { kRayleigh, kOrthogonal };

struct LargeArrayRow {
  int rx_antennas = 0;
  Real empirical_mse = 0;
  Real std_error = 0;
  Real asymptotic = 0;        // mse_asymptotic
  Real exact_orthogonal = 0;  // mse_exact_orthogonal
  Real rel_gap = 0;           // |empirical - asymptotic| / asymptotic
  int trials = 0;
};

/// For each N_r: average the fully-digital sum-MMSE MSE under the fixed
/// transmit beamformers V_k = sqrt(P/L) [I; 0] over `trials` channel draws
/// and tabulate it against the closed forms. Trial seeds follow the same
/// derivation as run_experiment with sweep index = position in nr_list.
std::vector<LargeArrayRow> large_array_table(const SystemConfig& base,
                                             const std::vector<int>& nr_list, int trials,
                                             std::uint64_t seed,
                                             ChannelModel model = ChannelModel::kRayleigh,
                                             int threads = 1);

}  // namespace aircomp
