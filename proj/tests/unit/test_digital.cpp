// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <random>

#include "aircomp/asymptotics.hpp"
#include "aircomp/digital.hpp"
#include "support/oracles.hpp"

using namespace aircomp;

TEST_CASE("scalar digital combiner") {
  SystemConfig cfg;
  const ChannelSet ch{{CMatrix::Constant(1, 1, 1.0)}};
  const TxBeamformerSet tx{{CMatrix::Constant(1, 1, 1.0)}};
  const AnalogCombiner rf = AnalogCombiner::from_phases(1, 1, RVector::Zero(1));
  const DigitalCombiner bb = solve_digital(cfg, ch, tx, rf);
  CHECK(std::abs(bb.matrix(0, 0) - 0.5) < 1e-15);
  CHECK(compute_mse(cfg, ch, BeamformingState{tx, rf, bb}) == doctest::Approx(0.5));
}

TEST_CASE("noise-dominated limit") {
  std::mt19937_64 rng(1);
  SystemConfig cfg;
  cfg.devices = 3;
  cfg.tx_antennas = 2;
  cfg.rx_antennas = 6;
  cfg.rf_chains = 3;
  cfg.functions = 2;
  cfg.power = 1;
  cfg.noise_var = 1e9;
  const ChannelSet ch = generate_rayleigh_channels(cfg, 2);
  const BeamformingState st = oracle::random_state(cfg, rng);
  BeamformingState opt = st;
  opt.bb = solve_digital(cfg, ch, st.tx, st.rf);
  CHECK(opt.bb.matrix.norm() < 1e-6);
  CHECK(compute_mse(cfg, ch, opt) == doctest::Approx(6.0).epsilon(1e-6));
}

TEST_CASE("digital combiner is a global minimizer over U_bb") {
  std::mt19937_64 rng(3);
  for (int n = 0; n < 10; ++n) {
    const SystemConfig cfg = oracle::random_config(rng, {1, 2, 4, 8});
    const ChannelSet ch = generate_rayleigh_channels(cfg, rng());
    BeamformingState st = oracle::random_state(cfg, rng);
    st.bb = solve_digital(cfg, ch, st.tx, st.rf);
    const Real best = compute_mse(cfg, ch, st);
    for (int p = 0; p < 100; ++p) {
      BeamformingState probe = st;
      CMatrix delta = oracle::random_complex(cfg.rf_chains, cfg.functions, rng);
      probe.bb.matrix += 1e-3 * delta / delta.norm();
      CHECK(compute_mse(cfg, ch, probe) >= best - 1e-12);
    }
    // First-order condition by finite differences.
    const CMatrix g = oracle::fd_complex_gradient(
        [&](const CMatrix& x) {
          BeamformingState s = st;
          s.bb.matrix = x;
          return compute_mse(cfg, ch, s);
        },
        st.bb.matrix);
    CHECK(g.norm() < 1e-6 * (1 + st.bb.matrix.norm()));
  }
}

TEST_CASE("fully-digital receiver specializes the hybrid one") {
  std::mt19937_64 rng(4);
  for (int n = 0; n < 10; ++n) {
    SystemConfig cfg = oracle::random_config(rng, {1, 2, 4, 8});
    cfg.rf_chains = cfg.rx_antennas;
    const ChannelSet ch = generate_rayleigh_channels(cfg, rng());
    const TxBeamformerSet tx = oracle::random_tx(cfg, rng);
    const CMatrix fd = solve_fully_digital_mmse(cfg, ch, tx);
    const CMatrix eye = CMatrix::Identity(cfg.rx_antennas, cfg.rx_antennas);
    const CMatrix hybrid = solve_digital(receive_stats(cfg, ch, tx), eye);
    CHECK((fd - hybrid).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, fd.cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("both solve paths agree when K L < N_r") {
  std::mt19937_64 rng(5);
  SystemConfig cfg;
  cfg.devices = 3;
  cfg.tx_antennas = 2;
  cfg.rx_antennas = 40;
  cfg.rf_chains = 40;
  cfg.functions = 2;
  cfg.power = 10;
  const ChannelSet ch = generate_rayleigh_channels(cfg, 6);
  const TxBeamformerSet tx = oracle::random_tx(cfg, rng);
  const CMatrix small_side = solve_fully_digital_mmse(cfg, ch, tx);
  const CMatrix direct = solve_fully_digital_mmse(receive_stats(cfg, ch, tx));
  CHECK((small_side - direct).norm() <= 1e-10 * direct.norm());
}

TEST_CASE("single device with orthogonal channel matches the simplified form") {
  SystemConfig cfg;
  cfg.devices = 1;
  cfg.tx_antennas = 2;
  cfg.rx_antennas = cfg.rf_chains = 16;
  cfg.functions = 2;
  cfg.power = 10;
  const ChannelSet ch = generate_orthogonal_channels(cfg, 8);
  const TxBeamformerSet tx = initial_tx(cfg);
  const CMatrix fd = solve_fully_digital_mmse(cfg, ch, tx);
  const CMatrix simplified = mmse_simplified(cfg, ch, tx);
  CHECK((fd - simplified).norm() < 1e-10);
}

TEST_CASE("all-zero channels give the zero combiner") {
  SystemConfig cfg;
  cfg.devices = 2;
  cfg.tx_antennas = 2;
  cfg.rx_antennas = cfg.rf_chains = 4;
  cfg.functions = 1;
  const ChannelSet ch{{CMatrix::Zero(4, 2), CMatrix::Zero(4, 2)}};
  CHECK(solve_fully_digital_mmse(cfg, ch, initial_tx(cfg)).norm() == 0.0);
}

TEST_CASE("sum-MMSE combiner depends on the channels only through A and T") {
  // Two different (H_k, V_k) collections with the same sum response and
  // covariance: one device with [HV_1, HV_2] vs two devices with HV_1, HV_2
  // and pre-rotated beamformers are built from a shared unitary mix.
  std::mt19937_64 rng(9);
  SystemConfig cfg;
  cfg.devices = 2;
  cfg.tx_antennas = 2;
  cfg.rx_antennas = cfg.rf_chains = 5;
  cfg.functions = 2;
  cfg.power = 100;
  const ChannelSet ch = generate_rayleigh_channels(cfg, 10);
  const TxBeamformerSet tx = oracle::random_tx(cfg, rng);
  const ReceiveStats s1 = receive_stats(cfg, ch, tx);

  // Second set: swap device order and scale H by a unit phase with V by its
  // conjugate; both statistics are unchanged.
  const Complex phase = std::polar(1.0, 0.7);
  const ChannelSet ch2{{ch[1] * phase, ch[0] * std::conj(phase)}};
  const TxBeamformerSet tx2{{tx[1] * std::conj(phase), tx[0] * phase}};
  const ReceiveStats s2 = receive_stats(cfg, ch2, tx2);
  REQUIRE((s1.covariance - s2.covariance).norm() < 1e-10);
  REQUIRE((s1.sum_response - s2.sum_response).norm() < 1e-10);

  const AnalogCombiner rf = AnalogCombiner::from_phases(5, 5, oracle::random_phases(25, rng));
  const DigitalCombiner a = solve_digital(cfg, ch, tx, rf);
  const DigitalCombiner b = solve_digital(cfg, ch2, tx2, rf);
  CHECK((a.matrix - b.matrix).norm() < 1e-10);

  // The conventional per-device detector is not a single shared combiner:
  // device 0's and device 1's combiners differ from each other.
  const CMatrix d0 = oracle::per_device_mmse(cfg, ch, tx, 0);
  const CMatrix d1 = oracle::per_device_mmse(cfg, ch, tx, 1);
  CHECK((d0 - d1).norm() > 1e-3);
  const CMatrix sum = solve_fully_digital_mmse(cfg, ch, tx);
  CHECK((sum - (d0 + d1)).norm() < 1e-10 * sum.norm());
}

TEST_CASE("singular inner matrix names the rank") {
  SystemConfig cfg;
  cfg.noise_var = 0;
  cfg.rx_antennas = cfg.rf_chains = 2;
  ReceiveStats stats;
  stats.covariance = CMatrix::Zero(2, 2);
  stats.sum_response = CMatrix::Zero(2, 1);
  stats.streams = 1;
  try {
    solve_digital(stats, CMatrix::Identity(2, 2));
    FAIL("expected NumericalError");
  } catch (const NumericalError& e) {
    CHECK(std::string(e.what()).find("rank") != std::string::npos);
  }
}
