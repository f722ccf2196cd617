// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

#include "aircomp/types.hpp"

namespace aircomp {

/// Aggregates that every receive-side update needs, all independent of the
/// receiver itself:
///   covariance   = sum_k H_k V_k V_k^H H_k^H + sigma^2 I   (N_r x N_r)
///   sum_response = sum_k H_k V_k                           (N_r x L)
struct ReceiveStats {
  CMatrix covariance;
  CMatrix sum_response;
  Index streams = 0;  // K * L, the constant term of the MSE
};

ReceiveStats receive_stats(const SystemConfig& cfg, const ChannelSet& ch,
                           const TxBeamformerSet& tx);

/// Computation MSE, evaluated directly from its definition
///   sum_k ||W^H H_k V_k - I||_F^2 + sigma^2 ||W||_F^2
/// for an arbitrary N_r x L receive combiner W.
Real compute_mse(const SystemConfig& cfg, const ChannelSet& ch,
                 const TxBeamformerSet& tx, const CMatrix& receiver);

/// Hybrid-receiver MSE, W = U_rf U_bb.
Real compute_mse(const SystemConfig& cfg, const ChannelSet& ch,
                 const BeamformingState& state);

/// Same value as compute_mse, from precomputed stats:
///   K L + tr(W^H A W) - 2 Re tr(W^H T).
Real mse_from_stats(const ReceiveStats& stats, const CMatrix& receiver);

struct EmpiricalMse {
  Real mean = 0;
  Real std_error = 0;
};

/// Monte-Carlo estimate of E||s - s_hat||^2 by simulating the signal chain
/// with s_k ~ CN(0, I) and n ~ CN(0, sigma^2 I).
EmpiricalMse estimate_mse_empirical(const SystemConfig& cfg, const ChannelSet& ch,
                                    const TxBeamformerSet& tx, const CMatrix& receiver,
                                    std::int64_t num_samples, std::uint64_t seed);

EmpiricalMse estimate_mse_empirical(const SystemConfig& cfg, const ChannelSet& ch,
                                    const BeamformingState& state,
                                    std::int64_t num_samples, std::uint64_t seed);

/// I.i.d. CN(0, 1) entries. With apply_path_loss every matrix is scaled by
/// sqrt(beta); the default keeps the normalized channels.
ChannelSet generate_rayleigh_channels(const SystemConfig& cfg, std::uint64_t seed,
                                      bool apply_path_loss = false);

/// Channels with H_k^H H_k' = 0 (k != k') and H_k^H H_k = beta N_r I, taken
/// from disjoint column blocks of a random unitary. Requires K N_t <= N_r.
ChannelSet generate_orthogonal_channels(const SystemConfig& cfg, std::uint64_t seed);

/// V_k = sqrt(P/L) [I_L; 0] for every device.
TxBeamformerSet initial_tx(const SystemConfig& cfg);

/// Uniform phases on (-pi, pi], the initial_tx beamformers, zero U_bb.
BeamformingState init_state(const SystemConfig& cfg, std::uint64_t seed);

/// tr(V V^H).
inline Real tx_power(const CMatrix& v) { return v.squaredNorm(); }

/// Deterministic 64-bit seed mixing (splitmix64 finalizer).
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

/// Seeds of one Monte-Carlo cell, derived from (base, sweep index, trial).
struct TrialSeeds {
  std::uint64_t channel = 0;
  std::uint64_t init = 0;
};

TrialSeeds trial_seeds(std::uint64_t base, std::size_t sweep_index, std::size_t trial);

}  // namespace aircomp
