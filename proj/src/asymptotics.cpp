// SPDX-License-Identifier: Apache-2.0
#include "aircomp/asymptotics.hpp"

#include <cmath>

#include "aircomp/digital.hpp"
#include "aircomp/parallel.hpp"

namespace aircomp {

Real mse_asymptotic(const SystemConfig& cfg) {
  const Real l = cfg.functions;
  return cfg.devices * l * l * cfg.noise_var / (cfg.path_loss * cfg.rx_antennas * cfg.power);
}

Real mse_exact_orthogonal(const SystemConfig& cfg) {
  const Real l = cfg.functions;
  return cfg.devices * l * l * cfg.noise_var /
         (l * cfg.noise_var + cfg.path_loss * cfg.rx_antennas * cfg.power);
}

CMatrix mmse_simplified(const SystemConfig& cfg, const ChannelSet& ch,
                        const TxBeamformerSet& tx) {
  const Index l = cfg.functions;
  const Real array_gain = cfg.path_loss * cfg.rx_antennas;
  CMatrix out = CMatrix::Zero(cfg.rx_antennas, l);
  for (std::size_t k = 0; k < ch.size(); ++k) {
    const CMatrix inner =
        CMatrix::Identity(l, l) * cfg.noise_var + array_gain * (tx[k].adjoint() * tx[k]);
    // out += H V inner^{-1}  <=>  out^H += inner^{-1} (H V)^H  (inner is Hermitian)
    out += inner.llt().solve((ch[k] * tx[k]).adjoint()).adjoint();
  }
  return out;
}

std::vector<LargeArrayRow> large_array_table(const SystemConfig& base,
                                             const std::vector<int>& nr_list, int trials,
                                             std::uint64_t seed, ChannelModel model,
                                             int threads) {
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  std::vector<LargeArrayRow> rows;
  for (std::size_t s = 0; s < nr_list.size(); ++s) {
    SystemConfig cfg = base;
    cfg.rx_antennas = nr_list[s];
    cfg.rf_chains = nr_list[s];
    cfg.validate_fully_digital();
    const TxBeamformerSet tx = initial_tx(cfg);

    std::vector<Real> values(static_cast<std::size_t>(trials));
    parallel_for(values.size(), threads, [&](std::size_t t) {
      const TrialSeeds seeds = trial_seeds(seed, s, t);
      const ChannelSet ch = model == ChannelModel::kRayleigh
                                ? generate_rayleigh_channels(cfg, seeds.channel, true)
                                : generate_orthogonal_channels(cfg, seeds.channel);
      values[t] = compute_mse(cfg, ch, tx, solve_fully_digital_mmse(cfg, ch, tx));
    });

    LargeArrayRow row;
    row.rx_antennas = cfg.rx_antennas;
    row.trials = trials;
    Real sum = 0, sum_sq = 0;
    for (Real v : values) {
      sum += v;
      sum_sq += v * v;
    }
    const Real n = trials;
    row.empirical_mse = sum / n;
    if (trials > 1) {
      const Real var = std::max<Real>(0, (sum_sq - n * row.empirical_mse * row.empirical_mse) /
                                             (n - 1));
      row.std_error = std::sqrt(var / n);
    }
    row.asymptotic = mse_asymptotic(cfg);
    row.exact_orthogonal = mse_exact_orthogonal(cfg);
    row.rel_gap = std::abs(row.empirical_mse - row.asymptotic) / row.asymptotic;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace aircomp
