// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <random>

#include "aircomp/model.hpp"
#include "support/oracles.hpp"

using namespace aircomp;

namespace {

SystemConfig scalar_config(Real noise) {
  SystemConfig cfg;
  cfg.noise_var = noise;
  return cfg;
}

BeamformingState scalar_state(Complex bb) {
  BeamformingState st;
  st.tx.beamformers = {CMatrix::Constant(1, 1, 1.0)};
  st.rf = AnalogCombiner::from_phases(1, 1, RVector::Zero(1));
  st.bb.matrix = CMatrix::Constant(1, 1, bb);
  return st;
}

ChannelSet scalar_channel() { return ChannelSet{{CMatrix::Constant(1, 1, 1.0)}}; }

}  // namespace

TEST_CASE("scalar MSE values") {
  CHECK(compute_mse(scalar_config(0), scalar_channel(), scalar_state(1.0)) == 0.0);
  CHECK(compute_mse(scalar_config(1), scalar_channel(), scalar_state(0.5)) ==
        doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("dimension mismatches name the matrix") {
  SystemConfig cfg;
  cfg.devices = 2;
  cfg.rx_antennas = 3;
  cfg.rf_chains = 2;
  ChannelSet ch{{CMatrix::Ones(3, 1), CMatrix::Ones(2, 1)}};
  BeamformingState st;
  st.tx.beamformers = {CMatrix::Ones(1, 1), CMatrix::Ones(1, 1)};
  st.rf = AnalogCombiner::from_phases(3, 2, RVector::Zero(6));
  st.bb.matrix = CMatrix::Ones(2, 1);
  try {
    compute_mse(cfg, ch, st);
    FAIL("expected DimensionError");
  } catch (const DimensionError& e) {
    CHECK(e.matrix() == "H_1");
  }
  st.bb.matrix = CMatrix::Ones(3, 1);
  ch.channels[1] = CMatrix::Ones(3, 1);
  CHECK_THROWS_AS(compute_mse(cfg, ch, st), DimensionError);
}

TEST_CASE("MSE is non-negative, matches the stats form and ignores device order") {
  std::mt19937_64 rng(11);
  for (int n = 0; n < 30; ++n) {
    const SystemConfig cfg = oracle::random_config(rng, {1, 2, 3, 5, 8});
    const ChannelSet ch = generate_rayleigh_channels(cfg, rng());
    const BeamformingState st = oracle::random_state(cfg, rng);
    const Real mse = compute_mse(cfg, ch, st);
    CHECK(mse >= 0);
    const Real via_stats = mse_from_stats(receive_stats(cfg, ch, st.tx), st.receiver());
    CHECK(via_stats == doctest::Approx(mse).epsilon(1e-10));

    ChannelSet ch_rev = ch;
    BeamformingState st_rev = st;
    std::reverse(ch_rev.channels.begin(), ch_rev.channels.end());
    std::reverse(st_rev.tx.beamformers.begin(), st_rev.tx.beamformers.end());
    CHECK(compute_mse(cfg, ch_rev, st_rev) == doctest::Approx(mse).epsilon(1e-12));
  }
}

TEST_CASE("Monte-Carlo estimate") {
  SUBCASE("perfect equalization without noise is exactly zero") {
    const EmpiricalMse e =
        estimate_mse_empirical(scalar_config(0), scalar_channel(), scalar_state(1.0), 5000, 3);
    CHECK(e.mean == 0.0);
  }
  SUBCASE("scalar example within 3 standard errors of 0.5") {
    const EmpiricalMse e =
        estimate_mse_empirical(scalar_config(1), scalar_channel(), scalar_state(0.5), 1000000, 4);
    CHECK(std::abs(e.mean - 0.5) <= 3 * e.std_error);
  }
  SUBCASE("random instance (K=3, N_t=2, N_r=8, N_rf=4, L=2)") {
    SystemConfig cfg;
    cfg.devices = 3;
    cfg.tx_antennas = 2;
    cfg.rx_antennas = 8;
    cfg.rf_chains = 4;
    cfg.functions = 2;
    cfg.power = 5;
    std::mt19937_64 rng(5);
    const ChannelSet ch = generate_rayleigh_channels(cfg, 6);
    const BeamformingState st = oracle::random_state(cfg, rng);
    const EmpiricalMse e = estimate_mse_empirical(cfg, ch, st, 100000, 7);
    CHECK(std::abs(e.mean - compute_mse(cfg, ch, st)) <= 3 * e.std_error);
    const EmpiricalMse again = estimate_mse_empirical(cfg, ch, st, 100000, 7);
    CHECK(again.mean == e.mean);
  }
  CHECK_THROWS(estimate_mse_empirical(scalar_config(1), scalar_channel(), scalar_state(1.0), 0, 1));
}

TEST_CASE("Rayleigh channels") {
  SystemConfig cfg;
  cfg.devices = 50;
  cfg.tx_antennas = 10;
  cfg.rx_antennas = 64;
  const ChannelSet ch = generate_rayleigh_channels(cfg, 7);
  REQUIRE(ch.size() == 50);
  for (const auto& h : ch.channels) {
    REQUIRE(h.rows() == 64);
    REQUIRE(h.cols() == 10);
    const Complex mean = h.mean();
    const Real var = (h.array() - mean).abs2().sum() / (h.size() - 1);
    CHECK(var >= 0.9);
    CHECK(var <= 1.1);
  }
  const ChannelSet same = generate_rayleigh_channels(cfg, 7);
  const ChannelSet other = generate_rayleigh_channels(cfg, 8);
  bool identical = true, differs = false;
  for (std::size_t k = 0; k < ch.size(); ++k) {
    identical = identical && (ch[k].array() == same[k].array()).all();
    differs = differs || (ch[k].array() != other[k].array()).any();
  }
  CHECK(identical);
  CHECK(differs);

  cfg.path_loss = 4;
  const ChannelSet scaled = generate_rayleigh_channels(cfg, 7, true);
  CHECK((scaled[3] - 2.0 * ch[3]).norm() < 1e-12);
}

TEST_CASE("orthogonal channels are exactly orthogonal") {
  SystemConfig cfg;
  cfg.devices = 4;
  cfg.tx_antennas = 2;
  cfg.rx_antennas = 16;
  for (Real beta : {1.0, 4.0}) {
    cfg.path_loss = beta;
    const ChannelSet ch = generate_orthogonal_channels(cfg, 21);
    for (std::size_t k = 0; k < ch.size(); ++k)
      for (std::size_t m = 0; m < ch.size(); ++m) {
        const CMatrix gram = ch[k].adjoint() * ch[m];
        const CMatrix expect =
            k == m ? CMatrix(CMatrix::Identity(2, 2) * (beta * 16)) : CMatrix::Zero(2, 2);
        CHECK((gram - expect).cwiseAbs().maxCoeff() < 1e-10);
      }
  }
  cfg.devices = 9;
  CHECK_THROWS_AS(generate_orthogonal_channels(cfg, 1), InfeasibleError);
}

TEST_CASE("initial state") {
  SystemConfig cfg;
  cfg.devices = 3;
  cfg.tx_antennas = 4;
  cfg.rx_antennas = 8;
  cfg.rf_chains = 3;
  cfg.functions = 2;
  cfg.power = 7;
  const BeamformingState a = init_state(cfg, 99);
  CHECK_NOTHROW(a.validate(cfg));
  CHECK(a.bb.matrix.norm() == 0.0);
  for (const auto& v : a.tx.beamformers) CHECK(tx_power(v) == doctest::Approx(7).epsilon(1e-15));
  const BeamformingState b = init_state(cfg, 99);
  CHECK((a.rf.phases().array() == b.rf.phases().array()).all());

  cfg.tx_antennas = 2;  // N_t = L: sqrt(P/L) I
  const TxBeamformerSet tx = initial_tx(cfg);
  CHECK((tx[0] - std::sqrt(3.5) * CMatrix::Identity(2, 2)).norm() < 1e-15);
  CHECK(tx_power(tx[0]) == doctest::Approx(7).epsilon(1e-15));
}

TEST_CASE("config and type invariants") {
  SystemConfig cfg;
  cfg.rx_antennas = 4;
  cfg.rf_chains = 5;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.rf_chains = 2;
  cfg.functions = 2;  // exceeds N_t = 1
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.tx_antennas = 2;
  CHECK_NOTHROW(cfg.validate());
  cfg.noise_var = 0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.noise_var = 2;
  cfg.power = 10;
  cfg.path_loss = 0.5;
  CHECK(cfg.snr() == doctest::Approx(2.5));
  CHECK(power_from_snr_db(10) == doctest::Approx(10));
  CHECK(power_from_snr_db(10, 2, 0.5) == doctest::Approx(40));

  TxBeamformerSet tx{{CMatrix::Constant(2, 2, 2.0)}};
  cfg.devices = 1;
  CHECK_THROWS_AS(tx.validate(cfg), InfeasibleError);  // power 16 > 10

  ChannelSet ch{{CMatrix::Constant(4, 2, std::numeric_limits<Real>::quiet_NaN())}};
  CHECK_THROWS_AS(ch.validate(cfg), NumericalError);
}

TEST_CASE("analog combiner phases") {
  RVector theta(4);
  theta << kPi, -kPi, 3 * kPi, 0.5;
  const AnalogCombiner rf = AnalogCombiner::from_phases(2, 2, theta);
  CHECK(rf.phases()(0) == doctest::Approx(kPi));
  CHECK(rf.phases()(1) == doctest::Approx(kPi));  // -pi maps to pi
  CHECK(rf.phases()(2) == doctest::Approx(kPi));
  CHECK(std::abs(rf.matrix()(1, 1) - std::polar(1.0, 0.5)) < 1e-15);

  AnalogCombiner edited = rf;
  edited.set_entry(0, 1, Complex(0, 3));
  CHECK(edited.phases()(phase_index(0, 1, 2)) == doctest::Approx(kPi / 2));
  CHECK(std::abs(edited.matrix()(0, 1) - Complex(0, 1)) < 1e-15);

  SystemConfig cfg;
  cfg.rx_antennas = cfg.rf_chains = 2;
  CHECK_NOTHROW(edited.validate(cfg));
  cfg.rf_chains = 1;
  CHECK_THROWS_AS(edited.validate(cfg), DimensionError);

  for (Real a : {-7.0, -kPi, 0.0, kPi, 9.5}) {
    const Real w = wrap_phase(a);
    CHECK(w > -kPi);
    CHECK(w <= kPi);
    CHECK(std::abs(std::polar(1.0, w) - std::polar(1.0, a)) < 1e-12);
  }
}

TEST_CASE("trial seeds are distinct across cells") {
  const TrialSeeds a = trial_seeds(1, 0, 0), b = trial_seeds(1, 0, 1), c = trial_seeds(1, 1, 0);
  CHECK(a.channel != b.channel);
  CHECK(a.channel != c.channel);
  CHECK(a.channel != a.init);
  CHECK(trial_seeds(1, 2, 3).channel == trial_seeds(1, 2, 3).channel);
}
