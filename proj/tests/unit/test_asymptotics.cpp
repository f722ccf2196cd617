// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "aircomp/asymptotics.hpp"
#include "aircomp/digital.hpp"

using namespace aircomp;

namespace {

SystemConfig base_config(int rx_antennas) {
  SystemConfig cfg;
  cfg.devices = 20;
  cfg.tx_antennas = 2;
  cfg.rx_antennas = rx_antennas;
  cfg.rf_chains = rx_antennas;
  cfg.functions = 2;
  cfg.power = 10;
  return cfg;
}

}  // namespace

TEST_CASE("closed forms with K = 20, L = 2, P = 10, N_r = 512") {
  const SystemConfig cfg = base_config(512);
  CHECK(mse_asymptotic(cfg) == doctest::Approx(0.015625).epsilon(1e-15));
  CHECK(mse_exact_orthogonal(cfg) == doctest::Approx(80.0 / 5122.0).epsilon(1e-15));
}

TEST_CASE("scaling laws of the large-array prediction") {
  const SystemConfig base = base_config(64);
  const Real v = mse_asymptotic(base);
  SystemConfig c = base;
  c.rx_antennas *= 2;
  CHECK(mse_asymptotic(c) == v / 2);
  c = base;
  c.power *= 2;
  CHECK(mse_asymptotic(c) == v / 2);
  c = base;
  c.devices *= 2;
  CHECK(mse_asymptotic(c) == v * 2);
  c = base;
  c.functions = 3;
  CHECK(mse_asymptotic(c) == doctest::Approx(v * 9 / 4).epsilon(1e-15));
}

TEST_CASE("pre-limit form") {
  SystemConfig cfg = base_config(64);
  cfg.noise_var = 0;
  CHECK(mse_exact_orthogonal(cfg) == 0.0);
  cfg.noise_var = 1;
  Real previous = 0;
  for (int nr : {64, 1024, 16384, 1 << 20, 1 << 24}) {
    cfg.rx_antennas = nr;
    const Real ratio = mse_exact_orthogonal(cfg) / mse_asymptotic(cfg);
    CHECK(ratio < 1.0);
    CHECK(ratio > previous);
    previous = ratio;
  }
  CHECK(previous == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("simplified receiver") {
  SUBCASE("scalar") {
    SystemConfig cfg;
    cfg.path_loss = 3;
    cfg.power = 2;
    cfg.noise_var = 0.5;
    const ChannelSet ch{{CMatrix::Constant(1, 1, std::sqrt(3.0))}};
    const TxBeamformerSet tx{{CMatrix::Constant(1, 1, std::sqrt(2.0))}};
    const CMatrix w = mmse_simplified(cfg, ch, tx);
    CHECK(std::abs(w(0, 0) - std::sqrt(6.0) / 6.5) < 1e-15);
  }

  SUBCASE("noiseless coefficient") {
    SystemConfig cfg = base_config(64);
    cfg.devices = 3;
    cfg.noise_var = 0;
    const ChannelSet ch = generate_rayleigh_channels(cfg, 5);
    const TxBeamformerSet tx = initial_tx(cfg);
    CMatrix sum = CMatrix::Zero(64, 2);
    for (std::size_t k = 0; k < 3; ++k) sum += ch[k] * tx[k];
    const Real coef = 2.0 / (64 * 10.0);
    CHECK((mmse_simplified(cfg, ch, tx) - coef * sum).norm() < 1e-13 * sum.norm() * coef);
  }

  SUBCASE("equals the exact receiver on orthogonal channels") {
    for (int nr : {64, 128, 256}) {
      const SystemConfig cfg = base_config(nr);
      const ChannelSet ch = generate_orthogonal_channels(cfg, 100 + nr);
      const TxBeamformerSet tx = initial_tx(cfg);
      const Real exact = compute_mse(cfg, ch, tx, solve_fully_digital_mmse(cfg, ch, tx));
      const Real simplified = compute_mse(cfg, ch, tx, mmse_simplified(cfg, ch, tx));
      CHECK(simplified == doctest::Approx(exact).epsilon(1e-8));
    }
  }
}

TEST_CASE("large-array table") {
  SUBCASE("orthogonal channels reproduce the pre-limit form") {
    const auto rows =
        large_array_table(base_config(64), {64, 128, 256, 512}, 5, 9, ChannelModel::kOrthogonal);
    REQUIRE(rows.size() == 4);
    for (const auto& r : rows) {
      CHECK(r.empirical_mse == doctest::Approx(r.exact_orthogonal).epsilon(1e-6));
      CHECK(r.std_error < 1e-6 * r.exact_orthogonal);
      CHECK(r.trials == 5);
    }
  }

  SUBCASE("Rayleigh gap shrinks with the array") {
    const auto rows = large_array_table(base_config(64), {64, 128, 256, 512}, 40, 10);
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].rel_gap < rows[i - 1].rel_gap);
    for (const auto& r : rows)
      CHECK(r.rel_gap == doctest::Approx(std::abs(r.empirical_mse - r.asymptotic) / r.asymptotic));
  }

  SUBCASE("thread count does not change the table") {
    const auto a = large_array_table(base_config(64), {64, 128}, 8, 11, ChannelModel::kRayleigh, 1);
    const auto b = large_array_table(base_config(64), {64, 128}, 8, 11, ChannelModel::kRayleigh, 3);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].empirical_mse == b[i].empirical_mse);
  }

  CHECK_THROWS_AS(large_array_table(base_config(64), {64}, 0, 1), std::invalid_argument);
}
