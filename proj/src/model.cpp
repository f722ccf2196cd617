// SPDX-License-Identifier: Apache-2.0
#include "aircomp/model.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace aircomp {
namespace {

std::string dims(Index r, Index c) {
  std::ostringstream os;
  os << r << "x" << c;
  return os.str();
}

void expect_dims(const std::string& name, const CMatrix& m, Index rows, Index cols) {
  if (m.rows() != rows || m.cols() != cols) {
    throw DimensionError(name, "expected " + dims(rows, cols) + ", got " +
                                   dims(m.rows(), m.cols()));
  }
}

CMatrix complex_gaussian(Index rows, Index cols, Real variance, std::mt19937_64& rng) {
  std::normal_distribution<Real> normal(0.0, std::sqrt(variance / 2.0));
  CMatrix m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = Complex(normal(rng), normal(rng));
  return m;
}

void check_tx_receiver(const SystemConfig& cfg, const ChannelSet& ch,
                       const TxBeamformerSet& tx, const CMatrix& receiver) {
  if (ch.size() != static_cast<std::size_t>(cfg.devices))
    throw DimensionError("ChannelSet", "expected " + std::to_string(cfg.devices) +
                                           " channels, got " + std::to_string(ch.size()));
  if (tx.size() != ch.size())
    throw DimensionError("TxBeamformerSet", "expected " + std::to_string(ch.size()) +
                                                " beamformers, got " +
                                                std::to_string(tx.size()));
  for (std::size_t k = 0; k < ch.size(); ++k) {
    expect_dims("H_" + std::to_string(k), ch[k], cfg.rx_antennas, cfg.tx_antennas);
    expect_dims("V_" + std::to_string(k), tx[k], cfg.tx_antennas, cfg.functions);
  }
  expect_dims("receiver", receiver, cfg.rx_antennas, cfg.functions);
}

}  // namespace

void SystemConfig::validate_fully_digital() const {
  if (devices < 1 || tx_antennas < 1 || rx_antennas < 1 || functions < 1)
    throw ConfigError("K, N_t, N_r and L must all be >= 1");
  if (functions > tx_antennas) throw ConfigError("L must not exceed N_t");
  if (!(power > 0) || !std::isfinite(power)) throw ConfigError("P must be finite and > 0");
  if (!(noise_var > 0) || !std::isfinite(noise_var))
    throw ConfigError("sigma^2 must be finite and > 0");
  if (!(path_loss > 0) || !std::isfinite(path_loss))
    throw ConfigError("beta must be finite and > 0");
}

void SystemConfig::validate() const {
  validate_fully_digital();
  if (rf_chains < 1 || rf_chains > rx_antennas) throw ConfigError("need 1 <= N_rf <= N_r");
  if (functions > rf_chains) throw ConfigError("L must not exceed N_rf");
}

Real power_from_snr_db(Real snr_db, Real noise_var, Real path_loss) {
  return noise_var * std::pow(10.0, snr_db / 10.0) / path_loss;
}

void ChannelSet::validate(const SystemConfig& cfg) const {
  if (channels.size() != static_cast<std::size_t>(cfg.devices))
    throw DimensionError("ChannelSet", "expected " + std::to_string(cfg.devices) +
                                           " channels, got " +
                                           std::to_string(channels.size()));
  for (std::size_t k = 0; k < channels.size(); ++k) {
    expect_dims("H_" + std::to_string(k), channels[k], cfg.rx_antennas, cfg.tx_antennas);
    if (!channels[k].allFinite())
      throw NumericalError("H_" + std::to_string(k) + " has non-finite entries");
  }
}

void TxBeamformerSet::validate(const SystemConfig& cfg) const {
  if (beamformers.size() != static_cast<std::size_t>(cfg.devices))
    throw DimensionError("TxBeamformerSet", "expected " + std::to_string(cfg.devices) +
                                                " beamformers, got " +
                                                std::to_string(beamformers.size()));
  for (std::size_t k = 0; k < beamformers.size(); ++k) {
    expect_dims("V_" + std::to_string(k), beamformers[k], cfg.tx_antennas, cfg.functions);
    if (tx_power(beamformers[k]) > cfg.power * (1.0 + 1e-9))
      throw InfeasibleError("V_" + std::to_string(k) + " exceeds the power budget");
  }
}

Real wrap_phase(Real angle) {
  Real r = std::remainder(angle, 2.0 * kPi);
  if (r <= -kPi) r += 2.0 * kPi;
  return r;
}

AnalogCombiner AnalogCombiner::from_phases(Index rows, Index cols, const RVector& phases) {
  if (phases.size() != rows * cols)
    throw DimensionError("phases", "expected length " + std::to_string(rows * cols) +
                                       ", got " + std::to_string(phases.size()));
  AnalogCombiner out;
  out.phases_ = wrap_phases(phases);
  out.matrix_.resize(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i)
      out.matrix_(i, j) = std::polar(1.0, out.phases_(phase_index(i, j, rows)));
  return out;
}

AnalogCombiner AnalogCombiner::from_matrix(const CMatrix& matrix) {
  RVector phases(matrix.size());
  for (Index j = 0; j < matrix.cols(); ++j)
    for (Index i = 0; i < matrix.rows(); ++i) {
      if (matrix(i, j) == Complex(0))
        throw std::invalid_argument("analog combiner entry has zero modulus");
      phases(phase_index(i, j, matrix.rows())) = std::arg(matrix(i, j));
    }
  return from_phases(matrix.rows(), matrix.cols(), phases);
}

void AnalogCombiner::set_entry(Index i, Index j, Complex value) {
  const Real phase = wrap_phase(std::arg(value));
  phases_(phase_index(i, j, matrix_.rows())) = phase;
  matrix_(i, j) = std::polar(1.0, phase);
}

void AnalogCombiner::validate(const SystemConfig& cfg) const {
  expect_dims("U_rf", matrix_, cfg.rx_antennas, cfg.rf_chains);
  if (phases_.size() != matrix_.size())
    throw DimensionError("phases", "length does not match U_rf");
  for (Index j = 0; j < matrix_.cols(); ++j)
    for (Index i = 0; i < matrix_.rows(); ++i) {
      const Real theta = phases_(phase_index(i, j, matrix_.rows()));
      if (!(theta > -kPi && theta <= kPi))
        throw std::invalid_argument("U_rf phase outside (-pi, pi]");
      if (std::abs(std::abs(matrix_(i, j)) - 1.0) > 1e-12)
        throw std::invalid_argument("U_rf entry violates unit modulus");
      if (std::abs(matrix_(i, j) - std::polar(1.0, theta)) > 1e-12)
        throw std::invalid_argument("U_rf matrix and phases disagree");
    }
}

void DigitalCombiner::validate(const SystemConfig& cfg) const {
  expect_dims("U_bb", matrix, cfg.rf_chains, cfg.functions);
  if (!matrix.allFinite()) throw NumericalError("U_bb has non-finite entries");
}

void BeamformingState::validate(const SystemConfig& cfg) const {
  tx.validate(cfg);
  rf.validate(cfg);
  bb.validate(cfg);
}

ReceiveStats receive_stats(const SystemConfig& cfg, const ChannelSet& ch,
                           const TxBeamformerSet& tx) {
  const Index nr = cfg.rx_antennas;
  const Index l = cfg.functions;
  const Index k_count = static_cast<Index>(ch.size());
  // Stack the effective per-device channels side by side; the covariance is
  // then a single rank-K L Hermitian update.
  CMatrix stacked(nr, k_count * l);
  ReceiveStats stats;
  stats.sum_response = CMatrix::Zero(nr, l);
  for (Index k = 0; k < k_count; ++k) {
    stacked.middleCols(k * l, l).noalias() = ch[k] * tx[k];
    stats.sum_response += stacked.middleCols(k * l, l);
  }
  CMatrix lower = CMatrix::Identity(nr, nr) * cfg.noise_var;
  lower.selfadjointView<Eigen::Lower>().rankUpdate(stacked);
  stats.covariance = lower.selfadjointView<Eigen::Lower>();
  stats.streams = k_count * l;
  return stats;
}

Real compute_mse(const SystemConfig& cfg, const ChannelSet& ch,
                 const TxBeamformerSet& tx, const CMatrix& receiver) {
  check_tx_receiver(cfg, ch, tx, receiver);
  const Index l = cfg.functions;
  const CMatrix receiver_h = receiver.adjoint();
  const CMatrix identity = CMatrix::Identity(l, l);
  Real total = 0;
  for (std::size_t k = 0; k < ch.size(); ++k) {
    const CMatrix effective = (receiver_h * ch[k]) * tx[k];
    total += (effective - identity).squaredNorm();
  }
  return total + cfg.noise_var * receiver.squaredNorm();
}

Real compute_mse(const SystemConfig& cfg, const ChannelSet& ch,
                 const BeamformingState& state) {
  expect_dims("U_rf", state.rf.matrix(), cfg.rx_antennas, cfg.rf_chains);
  expect_dims("U_bb", state.bb.matrix, cfg.rf_chains, cfg.functions);
  return compute_mse(cfg, ch, state.tx, state.receiver());
}

Real mse_from_stats(const ReceiveStats& stats, const CMatrix& receiver) {
  const CMatrix aw = stats.covariance * receiver;
  const Real quad = receiver.conjugate().cwiseProduct(aw).sum().real();
  const Real cross = receiver.conjugate().cwiseProduct(stats.sum_response).sum().real();
  return static_cast<Real>(stats.streams) + quad - 2.0 * cross;
}

EmpiricalMse estimate_mse_empirical(const SystemConfig& cfg, const ChannelSet& ch,
                                    const TxBeamformerSet& tx, const CMatrix& receiver,
                                    std::int64_t num_samples, std::uint64_t seed) {
  if (num_samples < 1) throw std::invalid_argument("num_samples must be >= 1");
  check_tx_receiver(cfg, ch, tx, receiver);
  std::mt19937_64 rng(seed);
  const Index nr = cfg.rx_antennas;
  const Index l = cfg.functions;
  const CMatrix receiver_h = receiver.adjoint();

  // Samples are processed in column batches; each column is one channel use.
  constexpr std::int64_t kBatch = 4096;
  Real sum = 0, sum_sq = 0;
  for (std::int64_t done = 0; done < num_samples; done += kBatch) {
    const Index batch = static_cast<Index>(std::min(kBatch, num_samples - done));
    CMatrix received = complex_gaussian(nr, batch, cfg.noise_var, rng);
    CMatrix target = CMatrix::Zero(l, batch);
    for (std::size_t k = 0; k < ch.size(); ++k) {
      const CMatrix data = complex_gaussian(l, batch, 1.0, rng);
      received.noalias() += ch[k] * (tx[k] * data);
      target += data;
    }
    const CMatrix estimate = receiver_h * received;
    const RVector err = (target - estimate).colwise().squaredNorm().transpose();
    sum += err.sum();
    sum_sq += err.squaredNorm();
  }
  const Real n = static_cast<Real>(num_samples);
  EmpiricalMse out;
  out.mean = sum / n;
  if (num_samples > 1) {
    const Real var = std::max<Real>(0, (sum_sq - n * out.mean * out.mean) / (n - 1));
    out.std_error = std::sqrt(var / n);
  }
  return out;
}

EmpiricalMse estimate_mse_empirical(const SystemConfig& cfg, const ChannelSet& ch,
                                    const BeamformingState& state,
                                    std::int64_t num_samples, std::uint64_t seed) {
  return estimate_mse_empirical(cfg, ch, state.tx, state.receiver(), num_samples, seed);
}

ChannelSet generate_rayleigh_channels(const SystemConfig& cfg, std::uint64_t seed,
                                      bool apply_path_loss) {
  std::mt19937_64 rng(seed);
  ChannelSet out;
  out.channels.reserve(cfg.devices);
  const Real amplitude = apply_path_loss ? std::sqrt(cfg.path_loss) : 1.0;
  for (int k = 0; k < cfg.devices; ++k)
    out.channels.push_back(amplitude *
                           complex_gaussian(cfg.rx_antennas, cfg.tx_antennas, 1.0, rng));
  return out;
}

ChannelSet generate_orthogonal_channels(const SystemConfig& cfg, std::uint64_t seed) {
  const Index nr = cfg.rx_antennas;
  const Index nt = cfg.tx_antennas;
  if (static_cast<Index>(cfg.devices) * nt > nr)
    throw InfeasibleError("orthogonal channels need K*N_t <= N_r (K*N_t = " +
                          std::to_string(cfg.devices * nt) + ", N_r = " +
                          std::to_string(nr) + ")");
  std::mt19937_64 rng(seed);
  const CMatrix gauss = complex_gaussian(nr, nr, 1.0, rng);
  const CMatrix unitary = gauss.householderQr().householderQ();
  const Real scale = std::sqrt(cfg.path_loss * static_cast<Real>(nr));
  ChannelSet out;
  for (int k = 0; k < cfg.devices; ++k)
    out.channels.push_back(scale * unitary.middleCols(k * nt, nt));
  return out;
}

TxBeamformerSet initial_tx(const SystemConfig& cfg) {
  TxBeamformerSet tx;
  const Real amp = std::sqrt(cfg.power / cfg.functions);
  for (int k = 0; k < cfg.devices; ++k)
    tx.beamformers.push_back(amp * CMatrix::Identity(cfg.tx_antennas, cfg.functions));
  return tx;
}

BeamformingState init_state(const SystemConfig& cfg, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<Real> uniform(-kPi, kPi);
  RVector phases(static_cast<Index>(cfg.rx_antennas) * cfg.rf_chains);
  for (Index i = 0; i < phases.size(); ++i) phases(i) = uniform(rng);
  BeamformingState state;
  state.tx = initial_tx(cfg);
  state.rf = AnalogCombiner::from_phases(cfg.rx_antennas, cfg.rf_chains, phases);
  state.bb.matrix = CMatrix::Zero(cfg.rf_chains, cfg.functions);
  return state;
}

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

TrialSeeds trial_seeds(std::uint64_t base, std::size_t sweep_index, std::size_t trial) {
  const std::uint64_t cell = mix_seed(mix_seed(base, sweep_index), trial);
  return TrialSeeds{mix_seed(cell, 0xC4A11E15ULL), mix_seed(cell, 0x1A17ULL)};
}

}  // namespace aircomp
